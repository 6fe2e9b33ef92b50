// verify.hpp — randomized property verification of the one-sided-spectrum
// theorems and the first-order symmetry claims over generated systems.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nhpt/dynamics.hpp"
#include "nhpt/operators.hpp"
#include "nhpt/parallel.hpp"
#include "nhpt/perturbation.hpp"
#include "nhpt/pulses.hpp"

namespace nhpt {

namespace detail {

// splitmix64: portable, bit-reproducible across platforms
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    bool coin() { return (next() & 1u) != 0; }
};

inline std::uint64_t trial_seed(std::uint64_t root, std::uint64_t index) {
    Rng mix(root ^ (0x51f15eedULL + index * 0x9e3779b97f4a7c15ULL));
    return mix.next();
}

} // namespace detail

struct RandomSystemSpec {
    int N = 2;                        // 2..8
    std::uint64_t seed = 0;
    double h0_scale = 1.0;
    double h1_scale = 1.0;
    // pole-family parameter ranges for the drawn pulses
    double tp_min = 0.45;
    double tp_max = 0.8;
    // target range of the amplification exponent (pi/|t_p|) |A| ||H1||_2;
    // keeps the dynamics firmly non-perturbative yet within double precision
    double exponent_min = 1.5;
    double exponent_max = 3.0;
    // |Omega| / spectral spread for transitionless draws
    double omega_factor_min = 1.05;
    double omega_factor_max = 1.4;
    double strength_cap = 10.0;       // hard cap on |A| * max-entry norm

    void validate() const {
        if (N < 2 || N > 8) throw std::invalid_argument("RandomSystemSpec: N must be in [2, 8]");
    }
};

struct GeneratedSystem {
    EigenSystem basis;
    GeneralOperator h1_bare;
    GeneralOperator h1e;
    double min_gap = 0.0;
};

namespace detail {

inline GeneratedSystem generate_system(const RandomSystemSpec& spec, Rng& rng,
                                       bool hermitian_h1) {
    const int n = spec.N;
    GeneratedSystem sys;
    for (int attempt = 0; attempt < 200; ++attempt) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                m(i, j) = Complex(rng.uniform(-spec.h0_scale, spec.h0_scale),
                                  rng.uniform(-spec.h0_scale, spec.h0_scale));
            }
        }
        const HermitianOperator h0(0.5 * (m + m.adjoint()).eval());
        sys.basis = eigendecompose(h0);
        double gap = std::numeric_limits<double>::infinity();
        for (int i = 1; i < n; ++i) gap = std::min(gap, sys.basis.omegas(i) - sys.basis.omegas(i - 1));
        sys.min_gap = gap;
        if (gap >= 0.05 * spec.h0_scale) break;
        if (attempt == 199) {
            throw std::runtime_error("generate_system: could not draw a gapped spectrum");
        }
    }
    Matrix h1(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            h1(i, j) = Complex(rng.uniform(-spec.h1_scale, spec.h1_scale),
                               rng.uniform(-spec.h1_scale, spec.h1_scale));
        }
    }
    if (hermitian_h1) h1 = 0.5 * (h1 + h1.adjoint()).eval();
    sys.h1_bare = GeneralOperator(h1);
    sys.h1e = matrix_elements(sys.h1_bare, sys.basis);
    return sys;
}

// amplitude drawn so (pi/|t_p|) |A| ||H1||_2 lands in the exponent range,
// respecting the hard strength cap
inline Complex draw_amplitude(const RandomSystemSpec& spec, Rng& rng, const Matrix& h1,
                              double tp_abs) {
    const double opnorm = h1.jacobiSvd().singularValues()(0);
    const double exponent = rng.uniform(spec.exponent_min, spec.exponent_max);
    double mag = exponent * tp_abs / (kPi * std::max(opnorm, 1e-12));
    const double maxabs = h1.cwiseAbs().maxCoeff();
    mag = std::min(mag, spec.strength_cap / std::max(maxabs, 1e-12));
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    return std::polar(mag, phase);
}

inline IntegrationConfig verify_cfg() {
    IntegrationConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-11;
    return cfg;
}

} // namespace detail

struct TrialOutcome {
    int index = 0;
    std::uint64_t seed = 0;
    int N = 0;
    double t_p = 0.0;
    double amplitude = 0.0;
    double Omega = 0.0;
    double eps_trunc = 0.0;
    double t_max = 0.0;
    double worst = 0.0;           // worst violation across inits and levels
    std::string worst_case;
    double max_population = 0.0;  // evidence of non-perturbative growth
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t root_seed = 0;
    std::vector<TrialOutcome> trials;
    double worst = 0.0;
    double max_eps = 0.0;
    bool pass = false;

    void finalize() {
        worst = 0.0;
        max_eps = 0.0;
        pass = true;
        for (const auto& t : trials) {
            worst = std::max(worst, t.worst);
            max_eps = std::max(max_eps, t.eps_trunc);
            pass = pass && t.pass;
        }
    }

    std::string to_text() const {
        std::ostringstream os;
        os << "suite: " << suite << "\n";
        os << "root_seed: " << root_seed << "  trials: " << trials.size() << "\n";
        os << std::scientific << std::setprecision(6);
        for (const auto& t : trials) {
            os << "  trial " << std::setw(3) << t.index << "  seed " << t.seed << "  N " << t.N
               << "  t_p " << t.t_p << "  |A| " << t.amplitude;
            if (t.Omega != 0.0) os << "  Omega " << t.Omega;
            os << "  t_max " << t.t_max << "  eps " << t.eps_trunc << "  worst " << t.worst
               << " (" << t.worst_case << ")  maxpop " << t.max_population << "  "
               << (t.pass ? "pass" : "FAIL") << "\n";
        }
        os << "worst violation: " << worst << "  max eps_trunc: " << max_eps << "  "
           << (pass ? "PASS" : "FAIL") << "\n";
        return os.str();
    }
};

namespace detail {

struct TrialAccumulator {
    double worst = 0.0;
    std::string worst_case;
    double eps = 0.0;
    double t_max = 0.0;
    double max_pop = 0.0;

    void account(double value, const std::string& label) {
        if (value > worst) {
            worst = value;
            worst_case = label;
        }
    }
};

// Integrate from every initial state; feed violations per the forbidden-set
// rule into the accumulator. direction: +1 forbids upward transitions,
// -1 downward, 0 forbids every transition (transitionless).
inline TrialAccumulator run_trial_assertions(const GeneratedSystem& sys, const Pulse& pulse,
                                             int direction) {
    TrialAccumulator acc;
    const auto cfg = verify_cfg();
    const int n = static_cast<int>(sys.basis.dim());
    for (int init = 0; init < n; ++init) {
        Vector c0 = Vector::Zero(n);
        c0(init) = 1.0;
        const auto run = converged_run(sys.basis, sys.h1e, pulse, c0, cfg, 500.0, 0.002, 8000.0);
        acc.eps = std::max(acc.eps, run.eps_trunc);
        acc.t_max = std::max(acc.t_max, run.t_max);
        const auto pops = run.trajectory.final_populations();
        acc.max_pop = std::max(acc.max_pop, pops.maxCoeff());
        for (int m = 0; m < n; ++m) {
            if (m == init) continue;
            const bool forbidden =
                direction == 0 ||
                (direction > 0 ? sys.basis.omegas(m) > sys.basis.omegas(init)
                               : sys.basis.omegas(m) < sys.basis.omegas(init));
            if (!forbidden) continue;
            std::ostringstream label;
            label << "pop " << init + 1 << "->" << m + 1;
            acc.account(pops(m), label.str());
        }
        std::ostringstream label;
        label << "survival init " << init + 1;
        acc.account(std::abs(run.trajectory.final(init) - Complex(1.0, 0.0)), label.str());
    }
    return acc;
}

} // namespace detail

// One-sided pole pulses must not drive transitions against the side of their
// spectrum: upward for t_p < 0, downward for t_p > 0. Both signs are drawn.
inline SuiteReport check_unidirectional(const RandomSystemSpec& spec, int trials) {
    spec.validate();
    SuiteReport rep;
    rep.suite = "unidirectional";
    rep.root_seed = spec.seed;
    rep.trials.resize(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
        TrialOutcome out;
        out.index = static_cast<int>(i);
        out.seed = detail::trial_seed(spec.seed, i);
        detail::Rng rng(out.seed);
        const auto sys = detail::generate_system(spec, rng, /*hermitian_h1=*/false);
        const double tp = (rng.coin() ? -1.0 : 1.0) * rng.uniform(spec.tp_min, spec.tp_max);
        const Complex A = detail::draw_amplitude(spec, rng, sys.h1e.entries, std::abs(tp));
        const Pulse pulse = Pulse::pole(A, tp);
        const auto acc = detail::run_trial_assertions(sys, pulse, tp < 0.0 ? +1 : -1);
        out.N = spec.N;
        out.t_p = tp;
        out.amplitude = std::abs(A);
        out.eps_trunc = acc.eps;
        out.t_max = acc.t_max;
        out.worst = acc.worst;
        out.worst_case = acc.worst_case;
        out.max_population = acc.max_pop;
        out.pass = acc.worst < acc.eps;
        rep.trials[i] = std::move(out);
    });
    rep.finalize();
    return rep;
}

// Modulated pole pulses whose shifted support clears the level spread must
// leave every initial state unchanged.
inline SuiteReport check_transitionless(const RandomSystemSpec& spec, int trials) {
    spec.validate();
    SuiteReport rep;
    rep.suite = "transitionless";
    rep.root_seed = spec.seed;
    rep.trials.resize(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
        TrialOutcome out;
        out.index = static_cast<int>(i);
        out.seed = detail::trial_seed(spec.seed ^ 0x7a115eedULL, i);
        detail::Rng rng(out.seed);
        const auto sys = detail::generate_system(spec, rng, false);
        const double tp = (rng.coin() ? -1.0 : 1.0) * rng.uniform(spec.tp_min, spec.tp_max);
        const Complex A = detail::draw_amplitude(spec, rng, sys.h1e.entries, std::abs(tp));
        const double Omega = (tp < 0.0 ? -1.0 : 1.0) *
                             rng.uniform(spec.omega_factor_min, spec.omega_factor_max) *
                             sys.basis.spread();
        const Pulse pulse = Pulse::modulated_pole(A, tp, Omega);
        if (!classify(pulse).support.clears_spread(sys.basis.spread())) {
            throw std::logic_error("check_transitionless: drawn pulse does not clear the spread");
        }
        const auto acc = detail::run_trial_assertions(sys, pulse, 0);
        out.N = spec.N;
        out.t_p = tp;
        out.amplitude = std::abs(A);
        out.Omega = Omega;
        out.eps_trunc = acc.eps;
        out.t_max = acc.t_max;
        out.worst = acc.worst;
        out.worst_case = acc.worst_case;
        out.max_population = acc.max_pop;
        out.pass = acc.worst < acc.eps;
        rep.trials[i] = std::move(out);
    });
    rep.finalize();
    return rep;
}

enum class ControlKind { HermitianGaussian, WrongSignModulation };

// Negative controls: configurations that break the theorem premises must show
// violations well above the truncation budget (pass = worst > 10 eps).
inline SuiteReport run_negative_control(ControlKind kind, const RandomSystemSpec& spec,
                                        int trials) {
    spec.validate();
    SuiteReport rep;
    rep.suite = kind == ControlKind::HermitianGaussian ? "control-hermitian-gaussian"
                                                       : "control-wrong-sign-modulation";
    rep.root_seed = spec.seed;
    rep.trials.resize(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
        TrialOutcome out;
        out.index = static_cast<int>(i);
        out.seed = detail::trial_seed(spec.seed ^ 0xc0417701ULL, i);
        detail::Rng rng(out.seed);
        detail::TrialAccumulator acc;
        if (kind == ControlKind::HermitianGaussian) {
            const auto sys = detail::generate_system(spec, rng, /*hermitian_h1=*/true);
            const double width = 1.0 / std::max(sys.basis.spread(), 0.2);
            const double opnorm = sys.h1e.entries.jacobiSvd().singularValues()(0);
            const double amp = 0.8 / (width * std::max(opnorm, 1e-12));
            const Pulse pulse = Pulse::gaussian_real(amp, width);
            out.amplitude = amp;
            out.t_p = width;
            acc = detail::run_trial_assertions(sys, pulse, +1);
        } else {
            const auto sys = detail::generate_system(spec, rng, false);
            const double tp = (rng.coin() ? -1.0 : 1.0) * rng.uniform(spec.tp_min, spec.tp_max);
            RandomSystemSpec strong = spec;
            strong.exponent_min = 2.0;
            strong.exponent_max = 3.0;
            const Complex A = detail::draw_amplitude(strong, rng, sys.h1e.entries, std::abs(tp));
            // wrong sign pairing: support fails to clear the transition band
            const double Omega = (tp < 0.0 ? +1.0 : -1.0) *
                                 rng.uniform(spec.omega_factor_min, spec.omega_factor_max) *
                                 sys.basis.spread();
            const Pulse pulse = Pulse::modulated_pole(A, tp, Omega);
            out.t_p = tp;
            out.amplitude = std::abs(A);
            out.Omega = Omega;
            acc = detail::run_trial_assertions(sys, pulse, 0);
        }
        out.N = spec.N;
        out.eps_trunc = acc.eps;
        out.t_max = acc.t_max;
        out.worst = acc.worst;
        out.worst_case = acc.worst_case;
        out.max_population = acc.max_pop;
        out.pass = acc.worst > 10.0 * acc.eps;   // controls must violate loudly
        rep.trials[i] = std::move(out);
    });
    rep.finalize();
    // for controls, "worst" is the smallest observed violation margin
    return rep;
}

struct SymmetryReport {
    std::uint64_t root_seed = 0;
    int trials = 0;
    double worst_hermitian_asymmetry = 0.0;   // must stay at rounding level
    double min_complex_f_asymmetry = 0.0;     // must stay well above zero
    double min_nonnormal_asymmetry = 0.0;
    bool pass = false;

    std::string to_text() const {
        std::ostringstream os;
        os << std::scientific << std::setprecision(6);
        os << "suite: first-order-symmetry\n";
        os << "root_seed: " << root_seed << "  trials: " << trials << "\n";
        os << "  worst Hermitian asymmetry:     " << worst_hermitian_asymmetry << "\n";
        os << "  min complex-f asymmetry:       " << min_complex_f_asymmetry << "\n";
        os << "  min non-normal-H1 asymmetry:   " << min_nonnormal_asymmetry << "\n";
        os << (pass ? "PASS" : "FAIL") << "\n";
        return os.str();
    }
};

// First-order W symmetry: symmetric for real f + Hermitian H1, asymmetric as
// soon as either reality or self-adjointness is dropped.
inline SymmetryReport check_first_order_symmetry(const RandomSystemSpec& spec, int trials) {
    spec.validate();
    SymmetryReport rep;
    rep.root_seed = spec.seed;
    rep.trials = trials;
    rep.min_complex_f_asymmetry = std::numeric_limits<double>::infinity();
    rep.min_nonnormal_asymmetry = std::numeric_limits<double>::infinity();
    for (int i = 0; i < trials; ++i) {
        detail::Rng rng(detail::trial_seed(spec.seed ^ 0x5f1257ULL, static_cast<std::uint64_t>(i)));
        const auto herm = detail::generate_system(spec, rng, /*hermitian_h1=*/true);
        const double width = 1.0 / std::max(herm.basis.spread(), 0.2);
        const auto gauss = Pulse::gaussian_real(1.0, width);

        const auto sym = first_order(herm.basis, herm.h1e, gauss);
        double asym = 0.0;
        for (Eigen::Index a = 0; a < sym.dim(); ++a) {
            for (Eigen::Index b = 0; b < sym.dim(); ++b) {
                asym = std::max(asym, std::abs(sym.W(a, b) - sym.W(b, a)));
            }
        }
        rep.worst_hermitian_asymmetry = std::max(rep.worst_hermitian_asymmetry, asym);

        // complex f, Hermitian H1: |H1| symmetric but |F| one-sided
        const double tp = rng.uniform(spec.tp_min, spec.tp_max) * (rng.coin() ? -1 : 1);
        const auto pole = first_order(herm.basis, herm.h1e, Pulse::pole(1.0, tp));
        double pole_asym = 0.0;
        for (Eigen::Index a = 0; a < pole.dim(); ++a) {
            for (Eigen::Index b = 0; b < pole.dim(); ++b) {
                pole_asym = std::max(pole_asym, std::abs(pole.W(a, b) - pole.W(b, a)));
            }
        }
        rep.min_complex_f_asymmetry = std::min(rep.min_complex_f_asymmetry, pole_asym);

        // real f, non-normal H1
        const auto gen = detail::generate_system(spec, rng, /*hermitian_h1=*/false);
        const auto gw = Pulse::gaussian_real(1.0, 1.0 / std::max(gen.basis.spread(), 0.2));
        const auto nn = first_order(gen.basis, gen.h1e, gw);
        double nn_asym = 0.0;
        for (Eigen::Index a = 0; a < nn.dim(); ++a) {
            for (Eigen::Index b = 0; b < nn.dim(); ++b) {
                nn_asym = std::max(nn_asym, std::abs(nn.W(a, b) - nn.W(b, a)));
            }
        }
        rep.min_nonnormal_asymmetry = std::min(rep.min_nonnormal_asymmetry, nn_asym);
    }
    rep.pass = rep.worst_hermitian_asymmetry < 1e-12 && rep.min_complex_f_asymmetry > 1e-8 &&
               rep.min_nonnormal_asymmetry > 1e-8;
    return rep;
}

} // namespace nhpt
