// dynamics.hpp — integration of the interaction-picture amplitude equations
// on the real axis and along horizontally shifted contours, asymptotic
// coefficient extraction, transition matrices, and window-convergence runs.

#pragma once

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nhpt/operators.hpp"
#include "nhpt/pulses.hpp"
#include "nhpt/transition_matrix.hpp"

namespace nhpt {

struct DivergenceError : std::runtime_error {
    double last_good_time;
    DivergenceError(const std::string& msg, double t)
        : std::runtime_error(msg), last_good_time(t) {}
};

struct AsymptoticsError : std::runtime_error {
    double residual;
    AsymptoticsError(const std::string& msg, double r) : std::runtime_error(msg), residual(r) {}
};

struct IntegrationConfig {
    double t_start = -2000.0;
    double t_end = 2000.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 10.0;
    double delta = 0.0;              // upward contour offset, t = xi + i*delta
    bool tail_correction = true;     // secular phase fix for the truncated pulse tails

    void validate() const {
        if (!(t_start < t_end)) {
            throw std::invalid_argument("IntegrationConfig: t_start must be < t_end");
        }
        for (double tol : {rel_tol, abs_tol}) {
            if (!(tol > 0.0) || tol > 1e-2) {
                throw std::invalid_argument("IntegrationConfig: tolerances must be in (0, 1e-2]");
            }
        }
        if (delta < 0.0) throw std::invalid_argument("IntegrationConfig: delta must be >= 0");
        if (!(max_step > 0.0)) throw std::invalid_argument("IntegrationConfig: max_step must be > 0");
    }

    IntegrationConfig with_window(double t_max) const {
        IntegrationConfig c = *this;
        c.t_start = -t_max;
        c.t_end = t_max;
        return c;
    }
};

struct AmplitudeTrajectory {
    std::vector<double> times;
    std::vector<Vector> c;                       // amplitudes c_l per sample
    std::vector<Eigen::VectorXd> populations;    // |c_l|^2 per sample
    Vector final;

    Eigen::VectorXd final_populations() const {
        Eigen::VectorXd p(final.size());
        for (Eigen::Index l = 0; l < final.size(); ++l) p(l) = std::norm(final(l));
        return p;
    }
};

enum class AsymptoticsMode { Plain, FrequencyShifted };

// Extraction along t = xi + i*dir*delta: B holds B_l(delta) in Plain mode
// (coefficients of e^{-i(omega_l - omega_n) xi}) and D_l(delta) in
// FrequencyShifted mode (plateau amplitudes).
struct ContourAsymptotics {
    double delta = 0.0;
    int direction = +1;
    Vector B;
    double fit_residual = 0.0;
};

namespace detail {

// contour must keep at least 1e-6 clearance from the pole at i*t_p, and the
// pulse must be holomorphic in the closed strip between the axis and the line
inline void check_strip(const Pulse& p, double eta) {
    if (!p.is_pole_family()) return;
    const double tp = p.t_p();
    const double lo = std::min(0.0, eta) - 1e-6;
    const double hi = std::max(0.0, eta) + 1e-6;
    if (tp >= lo && tp <= hi) {
        std::ostringstream os;
        os << "dynamics: contour Im(t) = " << eta << " not separated from the pole at i*"
           << tp << " (clearance < 1e-6 or pole inside the strip)";
        throw std::invalid_argument(os.str());
    }
}

// right-hand side of i dc_l/dxi = f(xi + i eta) sum_s M_ls c_s e^{i(w_l - w_s)(xi + i eta)}
struct AmplitudeRhs {
    const Eigen::VectorXd* omegas;
    const Matrix* m;           // matrix elements of the perturbation
    const Pulse* pulse;
    double eta;
    Matrix damp;               // e^{-(w_l - w_s) eta}, fixed along the contour

    AmplitudeRhs(const Eigen::VectorXd& w, const Matrix& mm, const Pulse& p, double eta_)
        : omegas(&w), m(&mm), pulse(&p), eta(eta_) {
        const Eigen::Index n = w.size();
        damp.resize(n, n);
        for (Eigen::Index l = 0; l < n; ++l) {
            for (Eigen::Index s = 0; s < n; ++s) {
                damp(l, s) = std::exp(-(w(l) - w(s)) * eta);
            }
        }
    }

    void operator()(const std::vector<Complex>& c, std::vector<Complex>& dc, double xi) const {
        const Eigen::Index n = omegas->size();
        const Complex fv = evaluate(*pulse, Complex(xi, eta));
        thread_local std::vector<Complex> phase;
        phase.resize(static_cast<std::size_t>(n));
        for (Eigen::Index l = 0; l < n; ++l) {
            phase[static_cast<std::size_t>(l)] = std::exp(Complex(0.0, (*omegas)(l)*xi));
        }
        const Complex minus_i(0.0, -1.0);
        for (Eigen::Index l = 0; l < n; ++l) {
            Complex acc(0.0, 0.0);
            for (Eigen::Index s = 0; s < n; ++s) {
                acc += (*m)(l, s) * damp(l, s) * phase[static_cast<std::size_t>(l)] *
                       std::conj(phase[static_cast<std::size_t>(s)]) * c[static_cast<std::size_t>(s)];
            }
            dc[static_cast<std::size_t>(l)] = minus_i * fv * acc;
        }
    }
};

struct RawRun {
    std::vector<double> times;
    std::vector<std::vector<Complex>> states;
};

inline RawRun integrate_raw(const Eigen::VectorXd& omegas, const Matrix& m, const Pulse& p,
                            const std::vector<Complex>& init, const IntegrationConfig& cfg,
                            double eta) {
    namespace ode = boost::numeric::odeint;
    using state_type = std::vector<Complex>;

    AmplitudeRhs rhs(omegas, m, p, eta);
    state_type state = init;

    using stepper_t = ode::runge_kutta_dopri5<state_type>;
    using controlled_t = ode::controlled_runge_kutta<stepper_t>;
    controlled_t stepper(
        ode::default_error_checker<double, ode::range_algebra, ode::default_operations>(
            cfg.abs_tol, cfg.rel_tol, 1.0, 1.0),
        ode::default_step_adjuster<double, double>(cfg.max_step));

    RawRun run;
    double last_good = cfg.t_start;
    auto observer = [&](const state_type& x, double t) {
        for (const auto& v : x) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                std::ostringstream os;
                os << "dynamics: non-finite state at t = " << t << ", last good t = " << last_good;
                throw DivergenceError(os.str(), last_good);
            }
        }
        last_good = t;
        run.times.push_back(t);
        run.states.push_back(x);
    };

    try {
        ode::integrate_adaptive(stepper, rhs, state, cfg.t_start, cfg.t_end,
                                std::min(1.0, cfg.max_step), observer);
    } catch (const ode::step_adjustment_error&) {
        std::ostringstream os;
        os << "dynamics: step size underflow, last good t = " << last_good;
        throw DivergenceError(os.str(), last_good);
    }
    return run;
}

inline std::vector<Complex> to_std(const Vector& v) {
    return std::vector<Complex>(v.data(), v.data() + v.size());
}

inline Vector to_eigen_vec(const std::vector<Complex>& v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

} // namespace detail

// Integrate i dc_l/dt = f(t) sum_s (H1)_ls c_s e^{i(w_l - w_s) t} from
// c(t_start) = init, optionally along the upward-shifted contour cfg.delta.
// The secular tail correction folds the exact pre/post-window pulse integral
// into diagonal phase factors (plain pole pulses only; the other kinds have
// oscillatory or exponentially small tails).
inline AmplitudeTrajectory integrate(const EigenSystem& basis, const GeneralOperator& h1e,
                                     const Pulse& p, const Vector& init,
                                     const IntegrationConfig& cfg) {
    cfg.validate();
    if (init.size() != basis.dim() || h1e.dim() != basis.dim()) {
        throw std::invalid_argument("integrate: dimension mismatch");
    }
    for (Eigen::Index l = 0; l < init.size(); ++l) {
        if (!std::isfinite(init(l).real()) || !std::isfinite(init(l).imag())) {
            throw std::invalid_argument("integrate: initial amplitudes must be finite");
        }
    }
    detail::check_strip(p, cfg.delta);

    Vector start = init;
    if (cfg.tail_correction) {
        const Complex pre = envelope_tail_integral(p, -cfg.t_start, -1, cfg.delta);
        for (Eigen::Index l = 0; l < start.size(); ++l) {
            start(l) *= std::exp(Complex(0.0, -1.0) * h1e.entries(l, l) * pre);
        }
    }

    const auto run =
        detail::integrate_raw(basis.omegas, h1e.entries, p, detail::to_std(start), cfg, cfg.delta);

    AmplitudeTrajectory traj;
    traj.times = run.times;
    traj.c.reserve(run.states.size());
    for (const auto& s : run.states) traj.c.push_back(detail::to_eigen_vec(s));

    if (cfg.tail_correction) {
        const Complex post = envelope_tail_integral(p, cfg.t_end, +1, cfg.delta);
        Vector& last = traj.c.back();
        for (Eigen::Index l = 0; l < last.size(); ++l) {
            last(l) *= std::exp(Complex(0.0, -1.0) * h1e.entries(l, l) * post);
        }
    }

    traj.populations.reserve(traj.c.size());
    for (const auto& cs : traj.c) {
        Eigen::VectorXd pop(cs.size());
        for (Eigen::Index l = 0; l < cs.size(); ++l) pop(l) = std::norm(cs(l));
        traj.populations.push_back(std::move(pop));
    }
    traj.final = traj.c.back();
    return traj;
}

// Integrate along t = xi + i*dir*delta with c(-inf) = delta_{l,n} and fit the
// large-xi behavior over the last tenth of the window. Plain mode returns
// B_l(delta); FrequencyShifted mode returns the plateau values D_l(delta).
inline ContourAsymptotics contour_asymptotics(const EigenSystem& basis,
                                              const GeneralOperator& h1e, const Pulse& p,
                                              int init_index, const IntegrationConfig& cfg,
                                              double delta, AsymptoticsMode mode) {
    cfg.validate();
    if (delta < 0.0) throw std::invalid_argument("contour_asymptotics: delta must be >= 0");
    if (init_index < 0 || init_index >= basis.dim()) {
        throw std::invalid_argument("contour_asymptotics: init_index out of range");
    }
    const auto cls = classify(p);
    if (p.kind() == PulseKind::Custom) {
        throw std::invalid_argument("contour_asymptotics: Custom pulses cannot be continued off the real axis");
    }
    const int dir = (cls.holomorphy == Holomorphy::LowerHolomorphic) ? -1 : +1;
    const double eta = dir * delta;
    detail::check_strip(p, eta);

    Vector init = Vector::Zero(basis.dim());
    init(init_index) = 1.0;
    if (cfg.tail_correction) {
        const Complex pre = envelope_tail_integral(p, -cfg.t_start, -1, eta);
        for (Eigen::Index l = 0; l < init.size(); ++l) {
            init(l) *= std::exp(Complex(0.0, -1.0) * h1e.entries(l, l) * pre);
        }
    }
    const auto run =
        detail::integrate_raw(basis.omegas, h1e.entries, p, detail::to_std(init), cfg, eta);

    const double tail_start = cfg.t_end - 0.1 * (cfg.t_end - cfg.t_start);
    const Eigen::Index n = basis.dim();
    std::vector<Vector> samples;
    for (std::size_t k = 0; k < run.times.size(); ++k) {
        if (run.times[k] < tail_start) continue;
        Vector y = detail::to_eigen_vec(run.states[k]);
        // de-trend the residual secular phase accumulated from xi to +inf
        const Complex remaining = envelope_tail_from(p, run.times[k], eta);
        for (Eigen::Index l = 0; l < n; ++l) {
            y(l) *= std::exp(Complex(0.0, -1.0) * h1e.entries(l, l) * remaining);
            if (mode == AsymptoticsMode::Plain) {
                y(l) *= std::exp((basis.omegas(l) - basis.omegas(init_index)) * eta);
            }
        }
        samples.push_back(std::move(y));
    }
    if (samples.size() < 4) {
        throw AsymptoticsError("contour_asymptotics: too few samples in the fit window", 1.0);
    }

    ContourAsymptotics out;
    out.delta = delta;
    out.direction = dir;
    out.B = Vector::Zero(n);
    for (const auto& s : samples) out.B += s;
    out.B /= static_cast<double>(samples.size());
    double resid = 0.0;
    for (const auto& s : samples) {
        for (Eigen::Index l = 0; l < n; ++l) {
            resid = std::max(resid,
                             std::abs(s(l) - out.B(l)) / std::max(1.0, std::abs(out.B(l))));
        }
    }
    out.fit_residual = resid;
    if (resid >= 1e-6) {
        std::ostringstream os;
        os << "contour_asymptotics: fit residual " << resid
           << " >= 1e-6; asymptotic regime not reached, increase t_end";
        throw AsymptoticsError(os.str(), resid);
    }
    return out;
}

// One integration per initial basis state; W(n, m) = |c_m(t_end)|^2.
inline TransitionMatrix transition_matrix(const EigenSystem& basis, const GeneralOperator& h1e,
                                          const Pulse& p, const IntegrationConfig& cfg) {
    const Eigen::Index n = basis.dim();
    TransitionMatrix tm;
    tm.W.resize(n, n);
    tm.source = TransitionSource::Numeric;
    tm.final_amplitudes.resize(n, n);
    for (Eigen::Index row = 0; row < n; ++row) {
        Vector init = Vector::Zero(n);
        init(row) = 1.0;
        const auto traj = integrate(basis, h1e, p, init, cfg);
        for (Eigen::Index m = 0; m < n; ++m) {
            tm.W(row, m) = std::norm(traj.final(m));
            tm.final_amplitudes(row, m) = traj.final(m);
        }
    }
    return tm;
}

// Window-doubling convergence run: doubles t_max until the final populations
// move by less than move_target (relative, floored at scale 1), then reports
// the run plus the truncation budget implied by the last doubling.
struct ConvergedRun {
    AmplitudeTrajectory trajectory;
    double t_max = 0.0;
    double eps_trunc = 0.0;
    double last_move = 0.0;
    int windows = 0;
};

inline ConvergedRun converged_run(const EigenSystem& basis, const GeneralOperator& h1e,
                                  const Pulse& p, const Vector& init,
                                  const IntegrationConfig& base, double t_max_start = 500.0,
                                  double move_target = 0.002, double t_max_cap = 16000.0) {
    ConvergedRun out;
    double t_max = t_max_start;
    AmplitudeTrajectory prev = integrate(basis, h1e, p, init, base.with_window(t_max));
    out.windows = 1;
    double amp_move = 0.0;
    while (true) {
        const double next_t = 2.0 * t_max;
        AmplitudeTrajectory cur = integrate(basis, h1e, p, init, base.with_window(next_t));
        ++out.windows;
        double move = 0.0;
        amp_move = 0.0;
        for (Eigen::Index l = 0; l < init.size(); ++l) {
            const double pa = std::norm(prev.final(l));
            const double pb = std::norm(cur.final(l));
            move = std::max(move, std::abs(pb - pa) / std::max(std::abs(pb), 1.0));
            amp_move = std::max(amp_move, std::abs(cur.final(l) - prev.final(l)));
        }
        prev = std::move(cur);
        t_max = next_t;
        out.last_move = move;
        if (move < move_target || 2.0 * t_max > t_max_cap) break;
    }
    double max_amp = 0.0;
    for (Eigen::Index l = 0; l < prev.final.size(); ++l) {
        max_amp = std::max(max_amp, std::abs(prev.final(l)));
    }
    out.eps_trunc =
        std::max(10.0 * amp_move, 1e-6 + 100.0 * base.rel_tol * std::max(1.0, max_amp));
    out.t_max = t_max;
    out.trajectory = std::move(prev);
    return out;
}

} // namespace nhpt
