#include "vemrec/cli.hpp"

int main(int argc, char** argv) { return vemrec::cli::run(argc, argv); }
