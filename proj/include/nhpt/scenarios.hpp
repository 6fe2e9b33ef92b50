// scenarios.hpp — prebuilt EP2/EP3 encircling models, loop geometry in the
// complex z-plane, one-command figure reproduction, and the Omega threshold scan.

#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nhpt/dynamics.hpp"
#include "nhpt/operators.hpp"
#include "nhpt/pulses.hpp"

namespace nhpt {

struct DegenerateLoopError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// z(t) = 1 + f(t) sampled on a time grid, with winding number around the
// exceptional point at z = 0.
struct Loop {
    std::vector<double> times;
    std::vector<Complex> samples;
    int winding = 0;
    double winding_residual = 0.0;   // turns left after rounding
    double min_distance_to_ep = 0.0;
};

enum class VerdictKind { Remained, FlippedTo, Mixed };

struct Verdict {
    VerdictKind kind = VerdictKind::Mixed;
    int level = 0;   // 1-based dominant state for Remained/FlippedTo
    double dominant_fraction = 0.0;

    std::string to_string() const {
        std::ostringstream os;
        switch (kind) {
            case VerdictKind::Remained: os << "remained(" << level << ")"; break;
            case VerdictKind::FlippedTo: os << "flipped_to(" << level << ")"; break;
            case VerdictKind::Mixed: os << "mixed"; break;
        }
        return os.str();
    }
};

struct ScenarioResult {
    Loop loop;
    AmplitudeTrajectory trajectory;
    std::vector<double> eigenvalue_times;
    std::vector<std::vector<Complex>> instantaneous_eigenvalues;
    Verdict verdict;
    int initial_state = 1;   // 1-based
    double eps_trunc = 0.0;
    double t_max = 0.0;
    Pulse pulse = Pulse::zero();
};

// Two-level crossing model: H0 = |I><II| + |II><I|, H1 = |II><I|.
// H(t) = H0 + f(t) H1 has a second-order EP at z = 1 + f = 0.
inline std::pair<HermitianOperator, GeneralOperator> build_ep2() {
    Matrix h0(2, 2), h1(2, 2);
    h0 << 0, 1, 1, 0;
    h1 << 0, 0, 1, 0;
    return {HermitianOperator(h0), GeneralOperator(h1)};
}

// Three-level chain with a third-order EP at z = 0:
// H0 = |I><II| + |II><I| + |II><III| + |III><II|, H1 = |II><I| + |III><II|.
inline std::pair<HermitianOperator, GeneralOperator> build_ep3() {
    Matrix h0 = Matrix::Zero(3, 3), h1 = Matrix::Zero(3, 3);
    h0(0, 1) = h0(1, 0) = 1;
    h0(1, 2) = h0(2, 1) = 1;
    h1(1, 0) = 1;
    h1(2, 1) = 1;
    return {HermitianOperator(h0), GeneralOperator(h1)};
}

// Symmetric sampling grid: dense uniform core around the pulse peak plus
// logarithmic tails out to t_max. Always contains 0 and +-t_max.
inline std::vector<double> loop_grid(double t_max = 2000.0, int n_center = 8192,
                                     int n_tail = 1024) {
    const double core = std::min(50.0, t_max);
    std::vector<double> pos;
    for (int i = 0; i <= n_center / 2; ++i) {
        pos.push_back(core * i / (n_center / 2));
    }
    if (t_max > core) {
        const double ratio = std::log(t_max / core);
        for (int i = 1; i <= n_tail; ++i) {
            pos.push_back(core * std::exp(ratio * i / n_tail));
        }
    }
    std::vector<double> grid;
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
        if (*it > 0.0) grid.push_back(-*it);
    }
    grid.insert(grid.end(), pos.begin(), pos.end());
    return grid;
}

// Winding number by accumulated argument of z(t) around the EP at z = 0.
inline Loop analyze_loop(const Pulse& p, const std::vector<double>& grid) {
    if (grid.size() < 8) throw std::invalid_argument("analyze_loop: grid too small");
    Loop loop;
    loop.times = grid;
    loop.samples.reserve(grid.size());
    double min_dist = std::numeric_limits<double>::infinity();
    for (double t : grid) {
        const Complex z = 1.0 + evaluate(p, t);
        min_dist = std::min(min_dist, std::abs(z));
        loop.samples.push_back(z);
    }
    if (min_dist < 1e-6) {
        throw DegenerateLoopError("analyze_loop: loop passes within 1e-6 of the EP at z = 0");
    }
    loop.min_distance_to_ep = min_dist;
    if (std::abs(loop.samples.front() - 1.0) > 1e-2 ||
        std::abs(loop.samples.back() - 1.0) > 1e-2) {
        throw std::invalid_argument("analyze_loop: z(+-t_max) has not relaxed to 1; extend the grid");
    }
    double total = 0.0;
    for (std::size_t k = 1; k < loop.samples.size(); ++k) {
        total += std::arg(loop.samples[k] * std::conj(loop.samples[k - 1]));
    }
    const double turns = total / (2.0 * kPi);
    loop.winding = static_cast<int>(std::lround(turns));
    loop.winding_residual = std::abs(turns - loop.winding);
    if (loop.winding_residual >= 1e-3) {
        throw std::runtime_error("analyze_loop: winding is not integral; grid too sparse");
    }
    return loop;
}

// Population dominance verdict. A state holding more than `threshold` of the
// total final population decides the outcome; anything else is mixed.
inline Verdict classify_outcome(const Eigen::VectorXd& final_pops, int initial_index,
                                double threshold = 0.9) {
    Verdict v;
    Eigen::Index argmax = 0;
    final_pops.maxCoeff(&argmax);
    const double total = final_pops.sum();
    v.dominant_fraction = total > 0.0 ? final_pops(argmax) / total : 0.0;
    v.level = static_cast<int>(argmax) + 1;
    if (v.dominant_fraction <= threshold) {
        v.kind = VerdictKind::Mixed;
        return v;
    }
    v.kind = (argmax == initial_index) ? VerdictKind::Remained : VerdictKind::FlippedTo;
    return v;
}

enum class FigureId { Fig1a, Fig1b, Fig2a, Fig2b, Fig3a, Fig3b, Fig4a, Fig4b, Fig5a, Fig5b };

inline const std::vector<std::pair<FigureId, std::string>>& figure_ids() {
    static const std::vector<std::pair<FigureId, std::string>> ids = {
        {FigureId::Fig1a, "fig1a"}, {FigureId::Fig1b, "fig1b"}, {FigureId::Fig2a, "fig2a"},
        {FigureId::Fig2b, "fig2b"}, {FigureId::Fig3a, "fig3a"}, {FigureId::Fig3b, "fig3b"},
        {FigureId::Fig4a, "fig4a"}, {FigureId::Fig4b, "fig4b"}, {FigureId::Fig5a, "fig5a"},
        {FigureId::Fig5b, "fig5b"}};
    return ids;
}

inline std::string to_string(FigureId id) {
    for (const auto& [fid, name] : figure_ids()) {
        if (fid == id) return name;
    }
    return "?";
}

inline FigureId parse_figure_id(const std::string& name) {
    for (const auto& [fid, fname] : figure_ids()) {
        if (fname == name) return fid;
    }
    throw std::invalid_argument("unknown figure id: " + name);
}

struct FigureSpec {
    bool three_level = false;
    Pulse pulse = Pulse::zero();
    int initial_state = 1;   // 1-based
};

inline FigureSpec figure_spec(FigureId id) {
    const double s2 = std::sqrt(2.0);
    switch (id) {
        case FigureId::Fig1a: return {false, Pulse::pole(1.0, -0.5), 1};
        case FigureId::Fig1b: return {false, Pulse::pole(1.0, 0.5), 1};
        case FigureId::Fig2a: return {false, Pulse::modulated_pole(1.0, -0.5, -2.0), 1};
        case FigureId::Fig2b: return {false, Pulse::modulated_pole(1.0, 0.5, 2.0), 1};
        case FigureId::Fig3a: return {false, Pulse::modulated_pole(1.0, -0.5, 2.0), 1};
        case FigureId::Fig3b: return {false, Pulse::modulated_pole(1.0, 0.5, -2.0), 1};
        case FigureId::Fig4a: return {true, Pulse::pole(1.0, -0.5), 2};
        case FigureId::Fig4b: return {true, Pulse::pole(1.0, 0.5), 2};
        case FigureId::Fig5a: return {true, Pulse::modulated_pole(1.0, -0.5, -2.0 * s2), 2};
        case FigureId::Fig5b: return {true, Pulse::modulated_pole(1.0, 0.5, 2.0 * s2), 2};
    }
    throw std::logic_error("figure_spec: unknown id");
}

// Instantaneous eigenvalues of H(t) = H0 + f(t) H1, sorted by (Re, Im).
inline std::vector<Complex> instantaneous_eigenvalues(const Matrix& h0, const Matrix& h1,
                                                      const Pulse& p, double t) {
    const Matrix h = h0 + evaluate(p, t) * h1;
    Eigen::ComplexEigenSolver<Matrix> solver(h, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("instantaneous_eigenvalues: solver failed");
    }
    std::vector<Complex> ev(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return ev;
}

// Execute one figure panel: converged amplitude run, loop geometry on a fixed
// grid, instantaneous spectra on a decimated grid, dominance verdict.
inline ScenarioResult run_figure(FigureId id, const IntegrationConfig& base = {}) {
    const FigureSpec spec = figure_spec(id);
    const auto [h0, h1] = spec.three_level ? build_ep3() : build_ep2();
    const auto basis = eigendecompose(h0);
    const auto h1e = matrix_elements(h1, basis);

    Vector init = Vector::Zero(basis.dim());
    init(spec.initial_state - 1) = 1.0;
    const auto run = converged_run(basis, h1e, spec.pulse, init, base);

    ScenarioResult res;
    res.pulse = spec.pulse;
    res.initial_state = spec.initial_state;
    res.trajectory = run.trajectory;
    res.eps_trunc = run.eps_trunc;
    res.t_max = run.t_max;
    res.loop = analyze_loop(spec.pulse, loop_grid());
    for (std::size_t k = 0; k < res.loop.times.size(); k += 16) {
        res.eigenvalue_times.push_back(res.loop.times[k]);
        res.instantaneous_eigenvalues.push_back(
            instantaneous_eigenvalues(h0.entries, h1.entries, spec.pulse, res.loop.times[k]));
    }
    res.verdict = classify_outcome(res.trajectory.final_populations(), spec.initial_state - 1);
    return res;
}

struct OmegaScanPoint {
    double Omega = 0.0;
    Verdict verdict;
    Eigen::VectorXd final_populations;
};

// Modulation-frequency scan for the three-level model. Omega = 0 runs the
// plain pole pulse; otherwise t_p is sign-paired with Omega so the shifted
// support moves away from the transition band.
inline std::vector<OmegaScanPoint> omega_threshold_scan(int initial_state,
                                                        const std::vector<double>& omegas,
                                                        const IntegrationConfig& base = {}) {
    if (initial_state < 1 || initial_state > 3) {
        throw std::invalid_argument("omega_threshold_scan: initial state must be 1..3");
    }
    const auto [h0, h1] = build_ep3();
    const auto basis = eigendecompose(h0);
    const auto h1e = matrix_elements(h1, basis);
    Vector init = Vector::Zero(3);
    init(initial_state - 1) = 1.0;

    std::vector<OmegaScanPoint> scan;
    scan.reserve(omegas.size());
    for (double Om : omegas) {
        const double tp = (Om < 0.0) ? -0.5 : 0.5;
        const Pulse p = (Om == 0.0) ? Pulse::pole(1.0, tp) : Pulse::modulated_pole(1.0, tp, Om);
        const auto run = converged_run(basis, h1e, p, init, base);
        OmegaScanPoint pt;
        pt.Omega = Om;
        pt.final_populations = run.trajectory.final_populations();
        pt.verdict = classify_outcome(pt.final_populations, initial_state - 1);
        scan.push_back(std::move(pt));
    }
    return scan;
}

} // namespace nhpt
