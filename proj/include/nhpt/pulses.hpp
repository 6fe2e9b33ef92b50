// pulses.hpp — perturbation envelopes f(t): evaluation at real and complex
// times, closed-form spectra, holomorphy classification, truncation tails.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "nhpt/detail/expint.hpp"

namespace nhpt {

inline constexpr double kPi = 3.14159265358979323846;

enum class PulseKind { PolePulse, ModulatedPolePulse, GaussianReal, Custom };

enum class Holomorphy { UpperHolomorphic, LowerHolomorphic, TwoSided };

enum class SupportKind { NegativeOnly, PositiveOnly, ShiftedNegative, ShiftedPositive, TwoSided };

// Half-line containing all spectral weight. For the shifted kinds the support
// is {omega <= edge} (ShiftedNegative) or {omega >= edge} (ShiftedPositive);
// the unshifted kinds have edge = 0.
struct SpectrumSupport {
    SupportKind kind = SupportKind::TwoSided;
    double edge = 0.0;

    bool one_sided() const { return kind != SupportKind::TwoSided; }
    // true when the support avoids frequencies of magnitude below `spread`
    bool clears_spread(double spread) const {
        switch (kind) {
            case SupportKind::NegativeOnly: return spread <= 0.0;
            case SupportKind::PositiveOnly: return spread <= 0.0;
            case SupportKind::ShiftedNegative: return edge <= -spread;
            case SupportKind::ShiftedPositive: return edge >= spread;
            case SupportKind::TwoSided: return false;
        }
        return false;
    }
};

struct PulseClassification {
    Holomorphy holomorphy = Holomorphy::TwoSided;
    SpectrumSupport support;
    bool warning = false;   // set for Custom: classification is a default, not derived
};

struct SpectrumSample {
    double omega = 0.0;
    std::complex<double> F;
};

struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Complex scalar envelope f(t). Pole pulses are A/(t - i t_p)^2, optionally
// modulated by exp(-i Omega t); the Gaussian is a·exp(-t^2/(2 w^2)) with the
// width carried in the t_p slot.
class Pulse {
public:
    using Complex = std::complex<double>;

    static Pulse pole(Complex A, double t_p) {
        require_offset(t_p);
        Pulse p;
        p.kind_ = PulseKind::PolePulse;
        p.A_ = A;
        p.t_p_ = t_p;
        return p;
    }

    static Pulse modulated_pole(Complex A, double t_p, double Omega) {
        require_offset(t_p);
        Pulse p;
        p.kind_ = PulseKind::ModulatedPolePulse;
        p.A_ = A;
        p.t_p_ = t_p;
        p.Omega_ = Omega;
        return p;
    }

    static Pulse gaussian_real(double amplitude, double width) {
        if (!(width > 0.0)) throw std::invalid_argument("Pulse: gaussian width must be > 0");
        Pulse p;
        p.kind_ = PulseKind::GaussianReal;
        p.A_ = amplitude;
        p.t_p_ = width;
        return p;
    }

    static Pulse custom(std::function<Complex(Complex)> f) {
        Pulse p;
        p.kind_ = PulseKind::Custom;
        p.custom_ = std::move(f);
        return p;
    }

    static Pulse zero() {
        return custom([](Complex) { return Complex(0.0, 0.0); });
    }

    PulseKind kind() const { return kind_; }
    Complex amplitude() const { return A_; }
    double t_p() const { return t_p_; }
    double omega_mod() const { return Omega_; }
    bool is_pole_family() const {
        return kind_ == PulseKind::PolePulse || kind_ == PulseKind::ModulatedPolePulse;
    }

    // Same pulse with amplitude A -> s*A. Custom pulses are wrapped.
    Pulse scaled(Complex s) const {
        Pulse p = *this;
        if (kind_ == PulseKind::Custom) {
            auto f = custom_;
            p.custom_ = [f, s](Complex t) { return s * f(t); };
        } else {
            p.A_ = s * A_;
        }
        return p;
    }

    friend Complex evaluate(const Pulse& p, Complex t);
    friend Complex analytic_spectrum(const Pulse& p, double omega);
    friend PulseClassification classify(const Pulse& p);
    friend Complex envelope_tail_integral(const Pulse& p, double t_abs, int side, double eta);
    friend Complex envelope_tail_from(const Pulse& p, double xi, double eta);
    friend Complex spectrum_truncation_tail(const Pulse& p, double t_max, double omega);

private:
    static void require_offset(double t_p) {
        if (t_p == 0.0) throw std::invalid_argument("Pulse: pole offset t_p must be nonzero");
    }

    PulseKind kind_ = PulseKind::Custom;
    Complex A_{0.0, 0.0};
    double t_p_ = 0.0;
    double Omega_ = 0.0;
    std::function<Complex(Complex)> custom_;
};

// f evaluated at complex time. Throws within 1e-9 of the pole at t = i t_p.
inline std::complex<double> evaluate(const Pulse& p, std::complex<double> t) {
    using C = std::complex<double>;
    switch (p.kind_) {
        case PulseKind::PolePulse:
        case PulseKind::ModulatedPolePulse: {
            const C d = t - C(0.0, p.t_p_);
            if (std::abs(d) < 1e-9) {
                throw SingularityError("Pulse: evaluation within 1e-9 of the pole at i*t_p");
            }
            C v = p.A_ / (d * d);
            if (p.kind_ == PulseKind::ModulatedPolePulse) {
                v *= std::exp(C(0.0, -p.Omega_) * t);
            }
            return v;
        }
        case PulseKind::GaussianReal: {
            const double w = p.t_p_;
            return p.A_.real() * std::exp(-t * t / (2.0 * w * w));
        }
        case PulseKind::Custom:
            if (!p.custom_) throw std::runtime_error("Pulse: empty custom envelope");
            return p.custom_(t);
    }
    throw std::logic_error("Pulse: unknown kind");
}

inline std::complex<double> evaluate(const Pulse& p, double t) {
    return evaluate(p, std::complex<double>(t, 0.0));
}

namespace detail {

// F(omega) = int A e^{i omega t}/(t - i b)^2 dt, closed form by residues.
// Support side is omega <= 0 for b < 0 and omega >= 0 for b > 0; on the
// support F = -2 pi A |omega| e^{-omega b}, exactly zero elsewhere.
inline std::complex<double> pole_spectrum(std::complex<double> A, double b, double omega) {
    if (b < 0.0) {
        if (omega > 0.0) return {0.0, 0.0};
    } else {
        if (omega < 0.0) return {0.0, 0.0};
    }
    return -2.0 * kPi * A * std::abs(omega) * std::exp(-omega * b);
}

} // namespace detail

// Closed-form spectrum F(omega) = int f(t) e^{i omega t} dt. Exactly zero on
// the forbidden half-line. Unsupported for Custom envelopes.
inline std::complex<double> analytic_spectrum(const Pulse& p, double omega) {
    switch (p.kind_) {
        case PulseKind::PolePulse:
            return detail::pole_spectrum(p.A_, p.t_p_, omega);
        case PulseKind::ModulatedPolePulse:
            // e^{-i Omega t} factor shifts the spectrum: F_mod(w) = F_pole(w - Omega)
            return detail::pole_spectrum(p.A_, p.t_p_, omega - p.Omega_);
        case PulseKind::GaussianReal: {
            const double w = p.t_p_;
            const double a = p.A_.real();
            return a * w * std::sqrt(2.0 * kPi) * std::exp(-0.5 * w * w * omega * omega);
        }
        case PulseKind::Custom:
            throw std::domain_error(
                "analytic_spectrum: unsupported for Custom pulses; use numerical_spectrum");
    }
    throw std::logic_error("Pulse: unknown kind");
}

// Holomorphy half-plane and spectral support. A pole below the real axis
// (t_p < 0) leaves f holomorphic for Im(t) >= 0 and the spectrum confined to
// omega <= Omega; mirrored for t_p > 0.
inline PulseClassification classify(const Pulse& p) {
    PulseClassification c;
    switch (p.kind_) {
        case PulseKind::PolePulse:
            if (p.t_p_ < 0.0) {
                c.holomorphy = Holomorphy::UpperHolomorphic;
                c.support = {SupportKind::NegativeOnly, 0.0};
            } else {
                c.holomorphy = Holomorphy::LowerHolomorphic;
                c.support = {SupportKind::PositiveOnly, 0.0};
            }
            return c;
        case PulseKind::ModulatedPolePulse:
            if (p.t_p_ < 0.0) {
                c.holomorphy = Holomorphy::UpperHolomorphic;
                c.support = {SupportKind::ShiftedNegative, p.Omega_};
            } else {
                c.holomorphy = Holomorphy::LowerHolomorphic;
                c.support = {SupportKind::ShiftedPositive, p.Omega_};
            }
            return c;
        case PulseKind::GaussianReal:
            c.holomorphy = Holomorphy::TwoSided;   // entire, but no one-sided decay
            c.support = {SupportKind::TwoSided, 0.0};
            return c;
        case PulseKind::Custom:
            c.holomorphy = Holomorphy::TwoSided;
            c.support = {SupportKind::TwoSided, 0.0};
            c.warning = true;
            return c;
    }
    throw std::logic_error("Pulse: unknown kind");
}

// int f(xi + i eta) dxi over (-inf, -t_abs] (side = -1) or [t_abs, +inf)
// (side = +1). Exact for the plain pole; zero for the other kinds, whose
// tails either vanish (Gaussian) or oscillate down to O(A/(Omega t^2)).
inline std::complex<double> envelope_tail_integral(const Pulse& p, double t_abs, int side,
                                                   double eta = 0.0) {
    using C = std::complex<double>;
    if (p.kind_ != PulseKind::PolePulse) return {0.0, 0.0};
    const C shift(0.0, eta - p.t_p_);
    if (side > 0) return p.A_ / (t_abs + shift);
    return -p.A_ / (-t_abs + shift);
}

// int_xi^{+inf} f(s + i eta) ds, used to de-trend asymptotic fits.
inline std::complex<double> envelope_tail_from(const Pulse& p, double xi, double eta = 0.0) {
    return envelope_tail_integral(p, xi, +1, eta);
}

namespace detail {

// int_T^inf A e^{i w t}/(t - i b)^2 dt = A e^{i w T} [1/z0 + i w e^{u0} E1(u0)],
// z0 = T - i b, u0 = -i w z0. The scaled E1 keeps every factor O(1).
inline std::complex<double> pole_upper_tail(std::complex<double> A, double b, double T,
                                            double w) {
    using C = std::complex<double>;
    const C z0(T, -b);
    if (w == 0.0) return A / z0;
    const C u0 = C(0.0, -w) * z0;
    const C bracket = 1.0 / z0 + C(0.0, w) * expint_e1_scaled(u0);
    return A * std::exp(C(0.0, w * T)) * bracket;
}

} // namespace detail

// Exact truncation remainder int_{|t| > t_max} f(t) e^{i omega t} dt for the
// pole family; zero for Gaussian (exp-small) and Custom.
inline std::complex<double> spectrum_truncation_tail(const Pulse& p, double t_max,
                                                     double omega) {
    if (!p.is_pole_family()) return {0.0, 0.0};
    const double w = (p.kind_ == PulseKind::ModulatedPolePulse) ? omega - p.Omega_ : omega;
    // lower tail maps to an upper tail under t -> -t (b and w flip sign)
    return detail::pole_upper_tail(p.A_, p.t_p_, t_max, w) +
           detail::pole_upper_tail(p.A_, -p.t_p_, t_max, -w);
}

inline std::string to_string(Holomorphy h) {
    switch (h) {
        case Holomorphy::UpperHolomorphic: return "upper-holomorphic";
        case Holomorphy::LowerHolomorphic: return "lower-holomorphic";
        case Holomorphy::TwoSided: return "two-sided";
    }
    return "?";
}

inline std::string to_string(const SpectrumSupport& s) {
    switch (s.kind) {
        case SupportKind::NegativeOnly: return "omega <= 0";
        case SupportKind::PositiveOnly: return "omega >= 0";
        case SupportKind::ShiftedNegative: return "omega <= " + std::to_string(s.edge);
        case SupportKind::ShiftedPositive: return "omega >= " + std::to_string(s.edge);
        case SupportKind::TwoSided: return "two-sided";
    }
    return "?";
}

} // namespace nhpt
