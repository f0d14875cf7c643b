#ifndef VEMREC_COMMON_HPP
#define VEMREC_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vemrec {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct MeshError : Error {
    using Error::Error;
};

struct SolverError : Error {
    using Error::Error;
};

struct RecoveryError : Error {
    using Error::Error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw Error(what);
}

// Deterministic uniform double in [0,1) from raw mt19937_64 output.
// std::uniform_real_distribution is not bit-stable across standard libraries.
template <class Rng>
double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class Rng>
double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

} // namespace vemrec

#endif
