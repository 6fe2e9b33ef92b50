// perturbation.hpp — first-order transition probabilities
// W(n,m) = |(H1)_{m,n}|^2 |F(omega_m - omega_n)|^2 and their comparison
// against the full numerics in the weak-interaction limit.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "nhpt/dynamics.hpp"
#include "nhpt/operators.hpp"
#include "nhpt/pulses.hpp"
#include "nhpt/spectrum.hpp"
#include "nhpt/transition_matrix.hpp"

namespace nhpt {

namespace detail {

// F at a single frequency: closed form when available, grid interpolation of
// the numerical spectrum otherwise.
struct SpectrumEvaluator {
    bool analytic = true;
    const Pulse* pulse = nullptr;
    SpectrumGrid grid;

    explicit SpectrumEvaluator(const Pulse& p) : pulse(&p) {
        try {
            (void)analytic_spectrum(p, 0.0);
        } catch (const std::domain_error&) {
            analytic = false;
            grid = numerical_spectrum(p, 2000.0, 1 << 16);
        }
    }

    Complex operator()(double w) const {
        if (analytic) return analytic_spectrum(*pulse, w);
        if (w <= grid.omegas.front() || w >= grid.omegas.back()) return {0.0, 0.0};
        const double pos = (w - grid.omegas.front()) / grid.domega();
        const auto k = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(k);
        return grid.values[k] * (1.0 - frac) + grid.values[k + 1] * frac;
    }
};

} // namespace detail

// First-order (single-interaction) transition matrix. The survival diagonal
// is not covered at this order and is stored as the unperturbed value 1.
inline TransitionMatrix first_order(const EigenSystem& basis, const GeneralOperator& h1e,
                                    const Pulse& p) {
    if (h1e.dim() != basis.dim()) throw std::invalid_argument("first_order: dimension mismatch");
    const detail::SpectrumEvaluator F(p);
    const Eigen::Index n = basis.dim();
    TransitionMatrix tm;
    tm.source = TransitionSource::FirstOrder;
    tm.diagonal_is_unperturbed = true;
    tm.W = Eigen::MatrixXd::Ones(n, n);
    for (Eigen::Index from = 0; from < n; ++from) {
        for (Eigen::Index to = 0; to < n; ++to) {
            if (to == from) continue;
            const double dw = basis.omegas(to) - basis.omegas(from);
            tm.W(from, to) = std::norm(h1e.entries(to, from)) * std::norm(F(dw));
        }
    }
    return tm;
}

struct WeakLimitReport {
    TransitionMatrix first_order;       // at the rescaled amplitude
    TransitionMatrix numeric;
    double max_rel_deviation = 0.0;     // over entries with first-order W > floor
    int compared = 0;
    double floor = 1e-12;
    // entries with a first-order zero are outside the formula's reach; their
    // numeric values are reported here as (from, to, W_numeric)
    std::vector<std::tuple<int, int, double>> below_floor;
};

// Rescale the pulse by `scale`, run the full dynamics, and compare the
// off-diagonal transition probabilities against first-order theory.
inline WeakLimitReport weak_limit_compare(const EigenSystem& basis, const GeneralOperator& h1e,
                                          const Pulse& p, double scale,
                                          const IntegrationConfig& cfg) {
    if (!(scale >= 0.0) || scale > 1e-2) {
        throw std::invalid_argument("weak_limit_compare: scale must be in [0, 1e-2]");
    }
    const Pulse weak = p.scaled(scale);
    WeakLimitReport rep;
    rep.first_order = first_order(basis, h1e, weak);
    rep.numeric = transition_matrix(basis, h1e, weak, cfg);
    const Eigen::Index n = basis.dim();
    for (Eigen::Index from = 0; from < n; ++from) {
        for (Eigen::Index to = 0; to < n; ++to) {
            if (to == from) continue;
            const double wf = rep.first_order.W(from, to);
            const double wn = rep.numeric.W(from, to);
            if (wf > rep.floor) {
                rep.max_rel_deviation =
                    std::max(rep.max_rel_deviation, std::abs(wn - wf) / wf);
                ++rep.compared;
            } else {
                rep.below_floor.emplace_back(static_cast<int>(from), static_cast<int>(to), wn);
            }
        }
    }
    return rep;
}

} // namespace nhpt
