// spectrum.hpp — numerical Fourier analysis of pulse envelopes: discretized
// spectra, one-sidedness scoring, Hilbert-transform consistency.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "nhpt/detail/fft.hpp"
#include "nhpt/pulses.hpp"

namespace nhpt {

// Forbidden half-line: omega > edge when `positive`, omega < edge otherwise.
struct HalfLine {
    bool positive = true;
    double edge = 0.0;
};

struct SpectrumGrid {
    std::vector<double> omegas;                 // uniform, ascending
    std::vector<std::complex<double>> values;   // F(omega_k)
    double leakage = 0.0;   // energy fraction on the pulse's forbidden half-line
    double t_max = 0.0;
    int n = 0;

    double domega() const { return kPi / t_max; }
};

inline double one_sidedness(const SpectrumGrid& g, HalfLine forbidden);

namespace detail {

inline HalfLine forbidden_side(const SpectrumSupport& s, bool& has_forbidden) {
    has_forbidden = true;
    switch (s.kind) {
        case SupportKind::NegativeOnly: return {true, 0.0};
        case SupportKind::PositiveOnly: return {false, 0.0};
        case SupportKind::ShiftedNegative: return {true, s.edge};
        case SupportKind::ShiftedPositive: return {false, s.edge};
        case SupportKind::TwoSided: break;
    }
    has_forbidden = false;
    return {};
}

} // namespace detail

// Discretized F(omega) = int_{-t_max}^{t_max} f(t) e^{i omega t} dt on the
// grid omega_k = k*pi/t_max, k in [-n/2, n/2). Trapezoid-corrected endpoint
// weights; exact analytic truncation tails added for the pole family when
// tail_correction is set.
inline SpectrumGrid numerical_spectrum(const Pulse& p, double t_max, int n_samples,
                                       bool tail_correction = true) {
    if (!(t_max > 0.0)) throw std::invalid_argument("numerical_spectrum: t_max must be > 0");
    if (n_samples < 1024 || !detail::is_power_of_two(static_cast<std::size_t>(n_samples))) {
        throw std::invalid_argument("numerical_spectrum: n_samples must be a power of two >= 1024");
    }
    if (p.is_pole_family() && std::abs(p.t_p()) < 1e-6) {
        throw std::invalid_argument("numerical_spectrum: pole within 1e-6 of the real axis");
    }

    const int n = n_samples;
    const double dt = 2.0 * t_max / n;
    std::vector<std::complex<double>> x(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        x[static_cast<std::size_t>(j)] = evaluate(p, -t_max + j * dt);
    }
    const std::complex<double> f_left = x[0];
    const std::complex<double> f_right = evaluate(p, t_max);

    detail::fft_inplace(x, +1);   // Y_m = sum_j f_j e^{+2 pi i j m / n}

    SpectrumGrid g;
    g.t_max = t_max;
    g.n = n;
    g.omegas.resize(static_cast<std::size_t>(n));
    g.values.resize(static_cast<std::size_t>(n));
    const double dom = kPi / t_max;
    for (int k = -n / 2; k < n / 2; ++k) {
        const std::size_t out = static_cast<std::size_t>(k + n / 2);
        const std::size_t m = static_cast<std::size_t>((k + n) % n);
        const double omega = k * dom;
        // left-endpoint sum -> trapezoid on [-t_max, t_max];
        // e^{+- i omega_k t_max} = (-1)^k multiplies the whole window term
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        std::complex<double> F = dt * sgn * (x[m] + 0.5 * (f_right - f_left));
        if (tail_correction) F += spectrum_truncation_tail(p, t_max, omega);
        g.omegas[out] = omega;
        g.values[out] = F;
    }

    bool has_forbidden = false;
    const HalfLine forb = detail::forbidden_side(classify(p).support, has_forbidden);
    g.leakage = has_forbidden ? one_sidedness(g, forb) : 0.0;
    return g;
}

// Energy fraction on the forbidden half-line; the edge sample counts half.
// Zero spectrum scores 0.
inline double one_sidedness(const SpectrumGrid& g, HalfLine forbidden) {
    if (g.values.empty()) throw std::invalid_argument("one_sidedness: empty grid");
    const double tiny = 1e-12 * std::max(1.0, std::abs(forbidden.edge));
    double total = 0.0;
    double forb = 0.0;
    for (std::size_t k = 0; k < g.values.size(); ++k) {
        const double e = std::norm(g.values[k]);
        total += e;
        const double d = g.omegas[k] - forbidden.edge;
        if (std::abs(d) <= tiny) {
            forb += 0.5 * e;
        } else if (forbidden.positive ? d > 0.0 : d < 0.0) {
            forb += e;
        }
    }
    if (total == 0.0) return 0.0;
    return forb / total;
}

// Parseval check helper: (int |F|^2 domega / 2 pi) / (int |f|^2 dt) on the grid.
inline double parseval_ratio(const Pulse& p, const SpectrumGrid& g) {
    const double dt = 2.0 * g.t_max / g.n;
    double time_energy = 0.0;
    for (int j = 0; j < g.n; ++j) {
        time_energy += std::norm(evaluate(p, -g.t_max + j * dt));
    }
    time_energy *= dt;
    double freq_energy = 0.0;
    for (const auto& F : g.values) freq_energy += std::norm(F);
    freq_energy *= g.domega() / (2.0 * kPi);
    if (time_energy == 0.0) return freq_energy == 0.0 ? 1.0 : 0.0;
    return freq_energy / time_energy;
}

// Max deviation of Im f from the Hilbert transform of Re f (sign per the
// holomorphy side), over the central half of the grid. One-sided pulses only.
inline double hilbert_check(const Pulse& p, double t_max, int n) {
    const auto cls = classify(p);
    if (cls.holomorphy == Holomorphy::TwoSided) {
        throw std::domain_error("hilbert_check: pulse is not one-sided holomorphic");
    }
    if (n < 1024 || !detail::is_power_of_two(static_cast<std::size_t>(n))) {
        throw std::invalid_argument("hilbert_check: n must be a power of two >= 1024");
    }
    const double s = (cls.holomorphy == Holomorphy::UpperHolomorphic) ? 1.0 : -1.0;
    const double dt = 2.0 * t_max / n;

    std::vector<std::complex<double>> u(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> f(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        f[static_cast<std::size_t>(j)] = evaluate(p, -t_max + j * dt);
        u[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>(j)].real();
    }
    detail::fft_inplace(u, +1);
    // multiplier i*sgn(omega) under the e^{+i omega t} convention; zero the
    // omega = 0 and Nyquist bins
    for (int m = 0; m < n; ++m) {
        const int k = (m < n / 2) ? m : m - n;
        std::complex<double> mult(0.0, 0.0);
        if (k > 0 && k != n / 2) mult = {0.0, 1.0};
        if (k < 0 && k != -n / 2) mult = {0.0, -1.0};
        u[static_cast<std::size_t>(m)] *= mult;
    }
    detail::fft_inplace(u, -1);
    double worst = 0.0;
    for (int j = n / 4; j < 3 * n / 4; ++j) {
        const double h = u[static_cast<std::size_t>(j)].real() / n;
        worst = std::max(worst, std::abs(f[static_cast<std::size_t>(j)].imag() - s * h));
    }
    return worst;
}

} // namespace nhpt
