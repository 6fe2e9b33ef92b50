// expint.hpp — scaled complex exponential integral e^z E1(z).

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace nhpt::detail {

// e^z E1(z) for complex z off the branch cut (-inf, 0].
// Series below |z| = 3, modified Lentz continued fraction elsewhere.
inline std::complex<double> expint_e1_scaled(std::complex<double> z) {
    using C = std::complex<double>;
    constexpr double euler_gamma = 0.5772156649015328606;
    const double az = std::abs(z);
    if (az == 0.0) throw std::domain_error("expint_e1_scaled: z = 0");
    if (z.imag() == 0.0 && z.real() < 0.0) {
        throw std::domain_error("expint_e1_scaled: z on the branch cut");
    }

    if (az <= 3.0) {
        // E1(z) = -gamma - log z + sum_{k>=1} (-1)^{k+1} z^k / (k k!)
        C sum = 0.0;
        C term = 1.0;
        for (int k = 1; k <= 60; ++k) {
            term *= -z / static_cast<double>(k);
            const C add = -term / static_cast<double>(k);
            sum += add;
            if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
        }
        return std::exp(z) * (-euler_gamma - std::log(z) + sum);
    }

    // E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - 9/(...)))), Lentz form.
    const double tiny = 1e-300;
    C b = z + 1.0;
    C c = 1.0 / tiny;
    C d = 1.0 / b;
    C h = d;
    for (int i = 1; i <= 300; ++i) {
        const C a = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const C delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) return h;
    }
    throw std::runtime_error("expint_e1_scaled: continued fraction did not converge");
}

} // namespace nhpt::detail
