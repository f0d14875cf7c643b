/// \file cli.hpp
/// \brief Command-line driver: mesh generation, single solves and the
///        convergence/adaptive studies. Config file keys mirror the flags;
///        flags win. Every run echoes its resolved configuration next to the
///        outputs so it can be reproduced.
#ifndef VEMREC_CLI_HPP
#define VEMREC_CLI_HPP

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vemrec/bench.hpp"
#include "vemrec/mesh_io.hpp"

namespace vemrec {
namespace cli {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// The echo holds only flag-named keys (plus # comments), so a run can be
// replayed verbatim with `--config <echo>`.
inline void echo_config(const std::string& path, const std::string& command,
                        const std::map<std::string, std::string>& kv) {
    std::ofstream os(path);
    require(os.good(), "cannot write config echo " + path);
    os << "# command: vemrec " << command << " --config <this file>\n";
    os << "# stabilization: dofi-dofi, unit scaling\n";
    for (const auto& [k, v] : kv) os << k << "=" << v << "\n";
}

// Plain key=value config support: a `--config FILE` pair anywhere after the
// subcommand is replaced by `--key=value` arguments for every file entry not
// already set on the command line, so explicit flags always win.
inline std::vector<std::string> apply_config_file(std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t k = 0; k + 1 < args.size(); ++k) {
        if (args[k] != "--config") continue;
        config_path = args[k + 1];
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(k),
                   args.begin() + static_cast<std::ptrdiff_t>(k) + 2);
        break;
    }
    if (config_path.empty()) return args;
    std::ifstream is(config_path);
    require(is.good(), "cannot read config file " + config_path);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos, "config file: expected key=value, got '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        require(!key.empty(), "config file: empty key in '" + line + "'");
        const std::string flag = "--" + key;
        bool overridden = false;
        for (const std::string& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) overridden = true;
        if (!overridden) args.push_back(flag + "=" + value);
    }
    return args;
}

struct CommonOptions {
    std::string out_dir = "out";
    bool svg = false;
    double stroke_width = 1.0;
    std::string colormap = "heat";

    std::string config_file; // consumed before parsing; listed here for --help

    void attach(CLI::App* app) {
        app->add_option("--out", out_dir, "output directory");
        app->add_flag("--svg", svg, "also write SVG renderings");
        app->add_option("--stroke-width", stroke_width, "SVG stroke width");
        app->add_option("--colormap", colormap, "SVG fill colormap (heat|gray)");
        app->add_option("--config", config_file, "plain key=value config file; flags win");
    }

    std::filesystem::path prepare() const {
        std::filesystem::create_directories(out_dir);
        return out_dir;
    }
};

inline PolygonMesh default_adaptive_mesh(int case_id, std::uint64_t seed) {
    switch (case_id) {
        case 2: return generate(MeshFamily::LShape, 4);
        case 3: return generate(MeshFamily::T6, 8, seed); // stand-in initial mesh, seed recorded
        case 4: return generate(MeshFamily::T5, 8);
        default: return generate(MeshFamily::T1, 4);
    }
}

inline int run(int argc, const char* const* argv) {
    CLI::App app{"lowest-order virtual element solver with gradient recovery on polygonal meshes"};
    app.require_subcommand(1);

    // --- mesh ---------------------------------------------------------------
    auto* cmd_mesh = app.add_subcommand("mesh", "generate a mesh and write it as JSON");
    std::string family_str = "t1";
    int n = 4;
    std::uint64_t seed = 1;
    CommonOptions mesh_common;
    cmd_mesh->add_option("--family", family_str, "t1..t6 or lshape")->required();
    cmd_mesh->add_option("--n", n, "resolution parameter (>= 2)")->required();
    cmd_mesh->add_option("--seed", seed, "random seed (t4, t6)");
    mesh_common.attach(cmd_mesh);

    // --- solve --------------------------------------------------------------
    auto* cmd_solve = app.add_subcommand("solve", "solve one test case on one mesh");
    int case_id = 1;
    std::string solve_family = "t1";
    int solve_n = 16;
    std::uint64_t solve_seed = 1;
    std::string mesh_file;
    double rel_tol = 1e-12;
    CommonOptions solve_common;
    cmd_solve->add_option("--case", case_id, "test case 1..4, or 0 for the linear patch test")->required();
    cmd_solve->add_option("--family", solve_family, "mesh family (ignored with --mesh)");
    cmd_solve->add_option("--n", solve_n, "resolution parameter");
    cmd_solve->add_option("--seed", solve_seed, "random seed");
    cmd_solve->add_option("--mesh", mesh_file, "mesh JSON file instead of a generated family");
    cmd_solve->add_option("--rel-tol", rel_tol, "CG relative tolerance");
    solve_common.attach(cmd_solve);

    // --- study --------------------------------------------------------------
    auto* cmd_study = app.add_subcommand("study", "convergence or adaptive study");
    int study_case = 1;
    std::string study_family = "all";
    std::string levels_str = "4,8,16,32,64";
    bool adaptive = false;
    bool check_rates = false;
    double theta = kDefaultDorflerTheta;
    int max_iters = 25;
    int dof_budget = 30000;
    std::uint64_t study_seed = 1;
    std::string initial_family;
    int initial_n = 0;
    CommonOptions study_common;
    cmd_study->add_option("--case", study_case, "test case 1..4")->required();
    cmd_study->add_option("--family", study_family, "t1..t6, lshape or 'all'");
    cmd_study->add_option("--levels", levels_str, "comma-separated n values");
    cmd_study->add_flag("--adaptive", adaptive, "run the adaptive loop instead of uniform levels");
    cmd_study->add_flag("--check-rates", check_rates, "exit nonzero unless slopes pass the expected bands");
    cmd_study->add_option("--theta", theta, "Doerfler bulk parameter in (0,1]");
    cmd_study->add_option("--max-iters", max_iters, "adaptive iteration cap");
    cmd_study->add_option("--dof-budget", dof_budget, "adaptive DOF cap");
    cmd_study->add_option("--seed", study_seed, "base random seed");
    cmd_study->add_option("--initial-family", initial_family, "adaptive initial mesh family");
    cmd_study->add_option("--initial-n", initial_n, "adaptive initial mesh resolution");
    study_common.attach(cmd_study);

    try {
        std::vector<std::string> args = apply_config_file({argv + 1, argv + argc});
        std::vector<const char*> ptrs{argv[0]};
        for (const std::string& a : args) ptrs.push_back(a.c_str());
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());

        if (cmd_mesh->parsed()) {
            const auto out = mesh_common.prepare();
            const MeshFamily family = family_from_name(family_str);
            const PolygonMesh mesh = generate(family, n, seed);
            std::string stem = "mesh_" + family_str + "_" + std::to_string(n);
            if (family == MeshFamily::T4 || family == MeshFamily::T6) stem += "_s" + std::to_string(seed);
            write_mesh_json(mesh, (out / (stem + ".json")).string());
            if (mesh_common.svg)
                write_mesh_svg(mesh, (out / (stem + ".svg")).string(),
                               {800.0, mesh_common.stroke_width, mesh_common.colormap, {}});
            echo_config((out / (stem + "_config.txt")).string(), "mesh",
                        {{"family", family_str},
                         {"n", std::to_string(n)},
                         {"seed", std::to_string(seed)},
                         {"svg", mesh_common.svg ? "1" : "0"},
                         {"out", mesh_common.out_dir}});
            std::cout << stem << ": " << mesh.cell_count() << " cells, " << mesh.vertex_count()
                      << " vertices, h = " << mesh.h << "\n";
            return 0;
        }

        if (cmd_solve->parsed()) {
            const auto out = solve_common.prepare();
            const TestCase tc = make_case(case_id);
            PolygonMesh mesh;
            std::string mesh_desc;
            if (!mesh_file.empty()) {
                mesh = read_mesh_json(mesh_file);
                mesh_desc = std::filesystem::path(mesh_file).stem().string();
            } else {
                mesh = generate(family_from_name(solve_family), solve_n, solve_seed);
                mesh_desc = solve_family + "_" + std::to_string(solve_n);
            }
            SolverConfig cfg;
            cfg.rel_tol = rel_tol;
            const SolveOutput sol = solve_case(mesh, tc, cfg);
            const RecoveredField rec = recover_field(mesh, sol.u);
            const IndicatorSet ind = compute_indicators(mesh, sol.u, rec);

            const std::string stem = "solve_case" + std::to_string(case_id) + "_" + mesh_desc;
            {
                std::ofstream os((out / (stem + "_dofs.csv")).string());
                write_solution_csv(mesh, sol.u, os);
            }
            {
                std::ofstream os((out / (stem + "_recovered.csv")).string());
                write_recovered_csv(mesh, rec, os);
            }
            std::ofstream report((out / (stem + "_errors.csv")).string());
            report << "dof,eta_global,h1_error,recovered_error,kappa,cg_iters,cg_residual\n";
            report << std::setprecision(16);
            double h1 = 0.0, rec_err = 0.0, kappa = 0.0;
            if (tc.u) {
                h1 = grad_error_projected(mesh, tc.grad_u, sol.u);
                rec_err = recovered_error(mesh, tc.grad_u, rec);
                kappa = (h1 > 0.0) ? ind.eta_global / h1 : 0.0;
            }
            report << mesh.vertex_count() << "," << ind.eta_global << "," << h1 << "," << rec_err << ","
                   << kappa << "," << sol.linear.iterations << "," << sol.linear.residual << "\n";
            if (solve_common.svg) {
                SvgOptions svg{800.0, solve_common.stroke_width, solve_common.colormap, ind.eta};
                write_mesh_svg(mesh, (out / (stem + "_eta.svg")).string(), svg);
            }
            std::map<std::string, std::string> echo{{"case", std::to_string(case_id)},
                                                    {"rel-tol", num(rel_tol)},
                                                    {"svg", solve_common.svg ? "1" : "0"},
                                                    {"out", solve_common.out_dir}};
            if (!mesh_file.empty()) {
                echo["mesh"] = mesh_file;
            } else {
                echo["family"] = solve_family;
                echo["n"] = std::to_string(solve_n);
                echo["seed"] = std::to_string(solve_seed);
            }
            echo_config((out / (stem + "_config.txt")).string(), "solve", echo);
            std::cout << stem << ": dof = " << mesh.vertex_count() << ", eta = " << ind.eta_global
                      << ", H1 = " << h1 << ", recovered = " << rec_err << ", kappa = " << kappa << "\n";
            return 0;
        }

        // study
        const auto out = study_common.prepare();
        const TestCase tc = make_case(study_case);
        if (adaptive) {
            PolygonMesh initial = initial_family.empty()
                                      ? default_adaptive_mesh(study_case, study_seed)
                                      : generate(family_from_name(initial_family),
                                                 initial_n > 0 ? initial_n : 4, study_seed);
            AdaptiveOptions opt;
            opt.theta = theta;
            opt.max_iters = max_iters;
            opt.dof_budget = dof_budget;
            const std::string stem = "adaptive_case" + std::to_string(study_case);
            if (study_common.svg) {
                opt.on_refined = [&](int iter, const PolygonMesh& m, const std::vector<int>&) {
                    if (iter % 5 == 0 || m.vertex_count() >= dof_budget)
                        write_mesh_svg(m, (out / (stem + "_" + std::to_string(iter) + ".svg")).string(),
                                       {800.0, study_common.stroke_width, study_common.colormap, {}});
                };
            }
            const AdaptiveResult res = adaptive_study(tc, std::move(initial), opt);
            {
                std::ofstream os((out / (stem + ".csv")).string());
                write_adaptive_csv(res.rows, os);
            }
            if (study_common.svg)
                write_mesh_svg(res.final_mesh, (out / (stem + "_final.svg")).string(),
                               {800.0, study_common.stroke_width, study_common.colormap, {}});
            std::map<std::string, std::string> echo{{"adaptive", "1"},
                                                    {"case", std::to_string(study_case)},
                                                    {"theta", num(theta)},
                                                    {"max-iters", std::to_string(max_iters)},
                                                    {"dof-budget", std::to_string(dof_budget)},
                                                    {"seed", std::to_string(study_seed)},
                                                    {"svg", study_common.svg ? "1" : "0"},
                                                    {"out", study_common.out_dir}};
            if (!initial_family.empty()) {
                echo["initial-family"] = initial_family;
                echo["initial-n"] = std::to_string(initial_n > 0 ? initial_n : 4);
            }
            echo_config((out / (stem + "_config.txt")).string(), "study", echo);
            std::cout << stem << ": " << res.rows.size() << " iterations, final dof = "
                      << res.rows.back().dof << ", final kappa = " << res.rows.back().kappa << "\n";
            return 0;
        }

        std::vector<int> levels;
        {
            std::stringstream ss(levels_str);
            std::string tok;
            while (std::getline(ss, tok, ',')) levels.push_back(std::stoi(tok));
            require(!levels.empty(), "study: empty --levels");
        }
        std::vector<MeshFamily> families;
        if (study_family == "all")
            families.assign(unit_square_families().begin(), unit_square_families().end());
        else
            families.push_back(family_from_name(study_family));

        bool rates_ok = true;
        for (MeshFamily family : families) {
            const auto rows = convergence_study(tc, family, levels, study_seed);
            const std::string stem = "case" + std::to_string(study_case) + "_" + family_name(family);
            {
                std::ofstream os((out / (stem + ".csv")).string());
                write_convergence_csv(rows, os);
            }
            echo_config((out / (stem + "_config.txt")).string(), "study",
                        {{"case", std::to_string(study_case)},
                         {"family", family_name(family)},
                         {"levels", levels_str},
                         {"seed", std::to_string(study_seed)},
                         {"out", study_common.out_dir}});
            const double s_h1 = slope_of(rows, [](const ConvergenceRow& r) { return r.h1_error; });
            const double s_scl = slope_of(rows, [](const ConvergenceRow& r) { return r.supercloseness; });
            const double s_rec = slope_of(rows, [](const ConvergenceRow& r) { return r.recovered_error; });
            std::cout << stem << ": slopes vs DOF  H1 " << s_h1 << "  supercloseness " << s_scl
                      << "  recovered " << s_rec << "\n";
            if (check_rates) {
                const RateExpectation ex = expected_rates(family);
                const bool ok = std::abs(s_h1 - ex.h1_slope) <= ex.h1_tol &&
                                std::abs(s_rec - ex.recovered_slope) <= ex.recovered_tol &&
                                std::abs(s_scl - ex.supercloseness_slope) <= ex.supercloseness_tol;
                std::cout << stem << ": rate check " << (ok ? "PASS" : "FAIL") << "\n";
                rates_ok = rates_ok && ok;
            }
        }
        return rates_ok ? 0 : 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace cli
} // namespace vemrec

#endif
