// cli.hpp — command-line surface: simulate, reproduce, spectrum,
// transition-matrix, verify, sweep. Flat key=value config files provide
// defaults; explicit flags override them.

#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "nhpt/dynamics.hpp"
#include "nhpt/io.hpp"
#include "nhpt/operators.hpp"
#include "nhpt/parallel.hpp"
#include "nhpt/perturbation.hpp"
#include "nhpt/pulses.hpp"
#include "nhpt/scenarios.hpp"
#include "nhpt/spectrum.hpp"
#include "nhpt/verify.hpp"

namespace nhpt::cli {

namespace fs = std::filesystem;

// "pole:A=1,tp=0.5" / "modpole:A=1,tp=-0.5,Omega=-2" / "gauss:A=1,w=1" / "none"
inline Pulse parse_pulse_spec(const std::string& spec) {
    if (spec == "none") return Pulse::zero();
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    std::map<std::string, double> kv;
    if (colon != std::string::npos) {
        std::istringstream rest(spec.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("pulse spec: expected key=value in '" + item + "'");
            }
            try {
                kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw std::invalid_argument("pulse spec: bad number in '" + item + "'");
            }
        }
    }
    auto take = [&](std::initializer_list<const char*> names, double fallback) {
        for (const char* n : names) {
            auto it = kv.find(n);
            if (it != kv.end()) return it->second;
        }
        return fallback;
    };
    const Complex A(take({"A", "A_re"}, 1.0), take({"A_im"}, 0.0));
    if (kind == "pole") return Pulse::pole(A, take({"tp", "t_p"}, -0.5));
    if (kind == "modpole") {
        return Pulse::modulated_pole(A, take({"tp", "t_p"}, -0.5), take({"Omega", "omega"}, 0.0));
    }
    if (kind == "gauss") {
        if (A.imag() != 0.0) {
            throw std::invalid_argument("pulse spec: gauss takes a real amplitude");
        }
        return Pulse::gaussian_real(A.real(), take({"w", "width", "tp", "t_p"}, 1.0));
    }
    throw std::invalid_argument("pulse spec: unknown kind '" + kind +
                                "' (expected pole|modpole|gauss|none)");
}

struct LoadedSystem {
    Matrix h0_bare;
    Matrix h1_bare;
    EigenSystem basis;
    GeneralOperator h1e;
    bool builtin = false;
    std::string name;
};

inline LoadedSystem load_system(const std::string& system, const std::string& h0_file,
                                const std::string& h1_file) {
    LoadedSystem out;
    if (system == "ep2" || system == "ep3") {
        const auto [h0, h1] = system == "ep2" ? build_ep2() : build_ep3();
        out.h0_bare = h0.entries;
        out.h1_bare = h1.entries;
        out.builtin = true;
        out.name = system;
    } else if (!system.empty() && system != "files") {
        throw std::invalid_argument("unknown system '" + system + "' (expected ep2|ep3|files)");
    } else {
        if (h0_file.empty() || h1_file.empty()) {
            throw std::invalid_argument("file-based system needs both --h0 and --h1");
        }
        out.h0_bare = io::read_operator_file(h0_file);
        out.h1_bare = io::read_operator_file(h1_file);
        out.builtin = false;
        out.name = "files";
    }
    out.basis = eigendecompose(HermitianOperator(out.h0_bare));
    out.h1e = matrix_elements(GeneralOperator(out.h1_bare), out.basis);
    return out;
}

namespace detail {

inline std::string pops_to_string(const Eigen::VectorXd& pops) {
    std::string s;
    for (Eigen::Index l = 0; l < pops.size(); ++l) {
        if (l) s += " ";
        s += io::format_double(pops(l));
    }
    return s;
}

inline const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Plot the CSV artifacts produced by `nhpt reproduce` / `nhpt simulate`.

Usage: python3 plot_figures.py [dir ...]
Each directory must hold populations.csv and, when present, loop.csv.
"""
import csv
import sys
import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_csv(path):
    with open(path) as f:
        rows = list(csv.reader(f))
    header, data = rows[0], rows[1:]
    cols = {name: [float(r[i]) for r in data] for i, name in enumerate(header)}
    return cols


def plot_dir(d):
    d = pathlib.Path(d)
    pops = read_csv(d / "populations.csv")
    has_loop = (d / "loop.csv").exists()
    fig, axes = plt.subplots(1, 2 if has_loop else 1, figsize=(10, 4))
    axes = axes if hasattr(axes, "__len__") else [axes]
    if has_loop:
        loop = read_csv(d / "loop.csv")
        ax = axes[0]
        ax.plot(loop["re_z"], loop["im_z"], lw=0.8)
        ax.plot([0], [0], "k+", ms=10)
        ax.set_xlabel("Re z"), ax.set_ylabel("Im z"), ax.set_title("parameter loop")
        ax.set_aspect("equal")
    ax = axes[-1]
    t = pops["t"]
    for key in sorted(k for k in pops if k.startswith("pop_")):
        ax.plot(t, pops[key], label="|c_%s|^2" % key.split("_")[1])
    ax.set_xlim(-20, 20)
    ax.set_xlabel("t"), ax.set_ylabel("population"), ax.legend()
    fig.tight_layout()
    out = d / "figure.png"
    fig.savefig(out, dpi=150)
    print("wrote", out)


if __name__ == "__main__":
    dirs = sys.argv[1:] or [p.parent for p in pathlib.Path(".").glob("*/populations.csv")]
    for d in dirs:
        plot_dir(d)
)PY";

inline void write_plot_script(const fs::path& out_dir) {
    fs::create_directories(out_dir);
    std::ofstream f(out_dir / "plot_figures.py", std::ios::trunc);
    f << kPlotScript;
}

inline void write_scenario_artifacts(const ScenarioResult& res, const fs::path& dir) {
    fs::create_directories(dir);
    io::write_loop_csv(res.loop, dir / "loop.csv");
    io::write_populations_csv(res.trajectory, dir / "populations.csv");
    io::write_final_amplitudes_csv(res.trajectory, dir / "final_amplitudes.csv");
    std::ofstream v(dir / "verdict.txt", std::ios::trunc);
    v << "verdict: " << res.verdict.to_string() << "\n";
    v << "initial_state: " << res.initial_state << "\n";
    v << "dominant_fraction: " << io::format_double(res.verdict.dominant_fraction) << "\n";
    v << "final_populations: " << pops_to_string(res.trajectory.final_populations()) << "\n";
    v << "winding: " << res.loop.winding << "\n";
    v << "eps_trunc: " << io::format_double(res.eps_trunc) << "\n";
    v << "t_max: " << io::format_double(res.t_max) << "\n";
}

struct CommonOpts {
    std::string system;
    std::string h0_file, h1_file;
    std::string pulse_spec = "none";
    int init = 1;
    double t_max_start = 500.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 10.0;
    double delta = 0.0;
    std::string out_dir = "nhpt_out";

    IntegrationConfig config() const {
        IntegrationConfig cfg;
        cfg.rel_tol = rel_tol;
        cfg.abs_tol = abs_tol;
        cfg.max_step = max_step;
        cfg.delta = delta;
        return cfg;
    }
};

// flags override config-file values: any option the user did not pass on the
// command line picks up the config entry of the same name
inline void apply_config_defaults(CLI::App* sub, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr || opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

} // namespace detail

inline int run(std::vector<std::string> args) {
    CLI::App app{"nhpt — N-level systems driven by non-Hermitian time-dependent perturbations"};
    app.require_subcommand(1);

    std::string config_file;
    app.add_option("--config", config_file, "flat key=value config file (flags override it)")
        ->expected(1);

    detail::CommonOpts common;
    auto add_common = [&](CLI::App* sub, bool with_system) {
        if (with_system) {
            sub->add_option("--system", common.system, "builtin system: ep2|ep3|files");
            sub->add_option("--h0", common.h0_file, "H0 operator file (system=files)");
            sub->add_option("--h1", common.h1_file, "H1 operator file (system=files)");
            sub->add_option("--init", common.init, "initial eigenstate, 1-based");
        }
        sub->add_option("--pulse", common.pulse_spec,
                        "pulse spec: pole:A=..,tp=.. | modpole:..,Omega=.. | gauss:A=..,w=.. | none");
        sub->add_option("--tmax", common.t_max_start, "starting half-window (doubled to convergence)");
        sub->add_option("--rel-tol", common.rel_tol, "integrator relative tolerance");
        sub->add_option("--abs-tol", common.abs_tol, "integrator absolute tolerance");
        sub->add_option("--max-step", common.max_step, "integrator step cap");
        sub->add_option("--delta", common.delta, "upward contour offset");
        sub->add_option("--out", common.out_dir, "output directory");
    };

    auto* sim = app.add_subcommand("simulate", "integrate one configuration and export artifacts");
    add_common(sim, true);

    auto* rep = app.add_subcommand("reproduce", "rerun the built-in encircling panels");
    std::string figure = "all";
    rep->add_option("figure", figure, "fig1a..fig5b or all")->expected(1);
    rep->add_option("--out", common.out_dir, "output directory");

    auto* spec_cmd = app.add_subcommand("spectrum", "numerical spectrum of a pulse");
    double sp_tmax = 2000.0;
    int sp_n = 1 << 18;
    bool sp_no_tail = false;
    spec_cmd->add_option("--pulse", common.pulse_spec, "pulse spec")->required();
    spec_cmd->add_option("--tmax", sp_tmax, "truncation window half-width");
    spec_cmd->add_option("--n", sp_n, "samples (power of two >= 1024)");
    spec_cmd->add_flag("--no-tail-correction", sp_no_tail, "skip the analytic truncation tails");
    spec_cmd->add_option("--out", common.out_dir, "output directory");

    auto* tmx = app.add_subcommand("transition-matrix", "W matrix, first-order and numeric");
    add_common(tmx, true);
    std::string tmx_source = "both";
    tmx->add_option("--source", tmx_source, "first-order|numeric|both");

    auto* ver = app.add_subcommand("verify", "randomized theorem suites");
    std::string suite = "all";
    std::uint64_t seed = 42;
    int trials = 50;
    ver->add_option("--suite", suite, "unidirectional|transitionless|first-order|controls|all");
    ver->add_option("--seed", seed, "root seed");
    ver->add_option("--trials", trials, "trials per suite (split across N = 2..6)");
    ver->add_option("--out", common.out_dir, "output directory for report.txt");

    auto* swp = app.add_subcommand("sweep", "scan one pulse parameter");
    add_common(swp, true);
    std::string param = "Omega";
    std::string range = "0:4:0.25";
    swp->add_option("--param", param, "A|tp|Omega");
    swp->add_option("--range", range, "lo:hi:step");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (!config_file.empty()) {
            const auto kv = io::read_config_file(config_file);
            for (CLI::App* sub : {sim, rep, spec_cmd, tmx, ver, swp}) {
                if (sub->parsed()) detail::apply_config_defaults(sub, kv);
            }
        }

        if (sim->parsed()) {
            const auto sys = load_system(common.system, common.h0_file, common.h1_file);
            if (common.init < 1 || common.init > sys.basis.dim()) {
                throw std::invalid_argument("--init out of range 1..N");
            }
            const Pulse pulse = parse_pulse_spec(common.pulse_spec);
            Vector init = Vector::Zero(sys.basis.dim());
            init(common.init - 1) = 1.0;
            const auto run =
                converged_run(sys.basis, sys.h1e, pulse, init, common.config(), common.t_max_start);
            const fs::path dir(common.out_dir);
            io::write_populations_csv(run.trajectory, dir / "populations.csv");
            io::write_trajectory_csv(run.trajectory, dir / "trajectory.csv");
            io::write_final_amplitudes_csv(run.trajectory, dir / "final_amplitudes.csv");
            if (sys.builtin && pulse.is_pole_family()) {
                io::write_loop_csv(analyze_loop(pulse, loop_grid()), dir / "loop.csv");
            }
            detail::write_plot_script(dir);
            const auto pops = run.trajectory.final_populations();
            const auto verdict = classify_outcome(pops, common.init - 1);
            std::cout << "final populations: " << detail::pops_to_string(pops) << "\n";
            std::cout << "verdict: " << verdict.to_string() << "\n";
            std::cout << "eps_trunc: " << io::format_double(run.eps_trunc)
                      << "  t_max: " << io::format_double(run.t_max) << "\n";
            std::cout << "artifacts: " << dir.string() << "\n";
            return 0;
        }

        if (rep->parsed()) {
            std::vector<FigureId> ids;
            if (figure == "all") {
                for (const auto& [fid, name] : figure_ids()) ids.push_back(fid);
            } else {
                ids.push_back(parse_figure_id(figure));
            }
            std::vector<ScenarioResult> results(ids.size());
            parallel_for(ids.size(), [&](std::size_t i) { results[i] = run_figure(ids[i]); });
            const fs::path out(common.out_dir);
            detail::write_plot_script(out);
            for (std::size_t i = 0; i < ids.size(); ++i) {
                detail::write_scenario_artifacts(results[i], out / to_string(ids[i]));
            }
            std::printf("%-6s %-14s %8s %10s %12s\n", "panel", "verdict", "winding", "eps",
                        "final pops");
            for (std::size_t i = 0; i < ids.size(); ++i) {
                const auto& r = results[i];
                std::printf("%-6s %-14s %8d %10.2e   %s\n", to_string(ids[i]).c_str(),
                            r.verdict.to_string().c_str(), r.loop.winding, r.eps_trunc,
                            detail::pops_to_string(r.trajectory.final_populations()).c_str());
            }
            std::cout << "artifacts: " << out.string() << "\n";
            return 0;
        }

        if (spec_cmd->parsed()) {
            const Pulse pulse = parse_pulse_spec(common.pulse_spec);
            const auto grid = numerical_spectrum(pulse, sp_tmax, sp_n, !sp_no_tail);
            const fs::path dir(common.out_dir);
            io::write_spectrum_csv(grid, dir / "spectrum.csv");
            std::cout << "samples: " << grid.n << "  domega: " << io::format_double(grid.domega())
                      << "\n";
            std::cout << "support: " << to_string(classify(pulse).support) << "\n";
            std::cout << "leakage: " << io::format_double(grid.leakage) << "\n";
            std::cout << "parseval_ratio: " << io::format_double(parseval_ratio(pulse, grid))
                      << "\n";
            std::cout << "artifacts: " << (dir / "spectrum.csv").string() << "\n";
            return 0;
        }

        if (tmx->parsed()) {
            if (tmx_source != "first-order" && tmx_source != "numeric" && tmx_source != "both") {
                throw std::invalid_argument("--source must be first-order|numeric|both");
            }
            const auto sys = load_system(common.system, common.h0_file, common.h1_file);
            const Pulse pulse = parse_pulse_spec(common.pulse_spec);
            const fs::path dir(common.out_dir);
            fs::create_directories(dir);
            std::ofstream f(dir / "transition_matrix.csv", std::ios::trunc);
            f << "from,to,W,source\n";
            auto dump = [&](const TransitionMatrix& tm) {
                for (Eigen::Index a = 0; a < tm.dim(); ++a) {
                    for (Eigen::Index b = 0; b < tm.dim(); ++b) {
                        f << (a + 1) << ',' << (b + 1) << ',' << io::format_double(tm.W(a, b))
                          << ',' << to_string(tm.source) << '\n';
                    }
                }
            };
            if (tmx_source == "first-order" || tmx_source == "both") {
                const auto fo = first_order(sys.basis, sys.h1e, pulse);
                dump(fo);
                std::cout << "first_order W:\n" << fo.W << "\n";
            }
            if (tmx_source == "numeric" || tmx_source == "both") {
                const auto num =
                    transition_matrix(sys.basis, sys.h1e, pulse, common.config().with_window(2000.0));
                dump(num);
                std::cout << "numeric W:\n" << num.W << "\n";
            }
            std::cout << "artifacts: " << (dir / "transition_matrix.csv").string() << "\n";
            return 0;
        }

        if (ver->parsed()) {
            static const std::vector<std::string> known_suites = {
                "unidirectional", "transitionless", "first-order", "controls", "all"};
            if (std::find(known_suites.begin(), known_suites.end(), suite) ==
                known_suites.end()) {
                throw std::invalid_argument("unknown suite '" + suite + "'");
            }
            bool all_pass = true;
            std::ostringstream report;
            const bool want_all = suite == "all";
            auto split_over_n = [&](auto&& runner) {
                const int per = std::max(1, trials / 5);
                for (int n = 2; n <= 6; ++n) {
                    const int quota = (n < 6) ? per : std::max(1, trials - 4 * per);
                    RandomSystemSpec spec;
                    spec.N = n;
                    spec.seed = seed + static_cast<std::uint64_t>(n);
                    const auto r = runner(spec, quota);
                    all_pass = all_pass && r.pass;
                    report << r.to_text() << "\n";
                }
            };
            if (want_all || suite == "unidirectional") {
                split_over_n([](const RandomSystemSpec& s, int t) {
                    return check_unidirectional(s, t);
                });
            }
            if (want_all || suite == "transitionless") {
                split_over_n([](const RandomSystemSpec& s, int t) {
                    return check_transitionless(s, t);
                });
            }
            if (want_all || suite == "controls") {
                RandomSystemSpec spec;
                spec.N = 3;
                spec.seed = seed;
                for (auto kind : {ControlKind::HermitianGaussian, ControlKind::WrongSignModulation}) {
                    const auto r = run_negative_control(kind, spec, std::max(2, trials / 10));
                    all_pass = all_pass && r.pass;
                    report << r.to_text() << "\n";
                }
            }
            if (want_all || suite == "first-order") {
                RandomSystemSpec spec;
                spec.N = 4;
                spec.seed = seed;
                const auto r = check_first_order_symmetry(spec, std::max(2, trials / 5));
                all_pass = all_pass && r.pass;
                report << r.to_text() << "\n";
            }
            std::cout << report.str();
            const fs::path dir(common.out_dir);
            fs::create_directories(dir);
            std::ofstream f(dir / "report.txt", std::ios::trunc);
            f << report.str();
            std::cout << (all_pass ? "VERIFY PASS" : "VERIFY FAIL") << "\n";
            return all_pass ? 0 : 2;
        }

        if (swp->parsed()) {
            const auto sys = load_system(common.system, common.h0_file, common.h1_file);
            if (common.init < 1 || common.init > sys.basis.dim()) {
                throw std::invalid_argument("--init out of range 1..N");
            }
            const Pulse base = parse_pulse_spec(common.pulse_spec);
            double lo = 0, hi = 0, step = 0;
            if (std::sscanf(range.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0) {
                throw std::invalid_argument("--range must be lo:hi:step with step > 0");
            }
            std::vector<double> values;
            for (double v = lo; v <= hi + 0.5 * step; v += step) values.push_back(v);
            if (values.empty()) throw std::invalid_argument("--range produced no values");

            std::vector<Pulse> pulses;
            for (double v : values) {
                if (param == "A") {
                    pulses.push_back(base.scaled(v / std::max(std::abs(base.amplitude()), 1e-300)));
                } else if (param == "tp" || param == "t_p") {
                    if (!base.is_pole_family()) {
                        throw std::invalid_argument("sweep over tp needs a pole-family pulse");
                    }
                    pulses.push_back(base.kind() == PulseKind::PolePulse
                                         ? Pulse::pole(base.amplitude(), v)
                                         : Pulse::modulated_pole(base.amplitude(), v,
                                                                 base.omega_mod()));
                } else if (param == "Omega" || param == "omega") {
                    if (base.kind() != PulseKind::ModulatedPolePulse) {
                        throw std::invalid_argument("sweep over Omega needs a modpole pulse");
                    }
                    pulses.push_back(Pulse::modulated_pole(base.amplitude(), base.t_p(), v));
                } else {
                    throw std::invalid_argument("unknown sweep parameter '" + param + "'");
                }
            }

            Vector init = Vector::Zero(sys.basis.dim());
            init(common.init - 1) = 1.0;
            std::vector<ConvergedRun> runs(values.size());
            const auto cfg = common.config();
            parallel_for(values.size(), [&](std::size_t i) {
                runs[i] = converged_run(sys.basis, sys.h1e, pulses[i], init, cfg,
                                        common.t_max_start);
            });

            const fs::path dir(common.out_dir);
            std::vector<std::string> header{param};
            for (Eigen::Index l = 0; l < sys.basis.dim(); ++l) {
                header.push_back("pop_" + std::to_string(l + 1));
            }
            header.push_back("dominant_fraction");
            io::CsvWriter csv(dir / "sweep.csv", header);
            std::ofstream verdicts(dir / "sweep_verdicts.txt", std::ios::trunc);
            std::printf("%10s  %-14s  %s\n", param.c_str(), "verdict", "final pops");
            for (std::size_t i = 0; i < values.size(); ++i) {
                const auto pops = runs[i].trajectory.final_populations();
                const auto verdict = classify_outcome(pops, common.init - 1);
                std::vector<double> row{values[i]};
                for (Eigen::Index l = 0; l < pops.size(); ++l) row.push_back(pops(l));
                row.push_back(verdict.dominant_fraction);
                csv.row(row);
                verdicts << io::format_double(values[i]) << " " << verdict.to_string() << "\n";
                std::printf("%10.4f  %-14s  %s\n", values[i], verdict.to_string().c_str(),
                            detail::pops_to_string(pops).c_str());
            }
            std::cout << "artifacts: " << dir.string() << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace nhpt::cli
