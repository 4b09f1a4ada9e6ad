#pragma once

#include <cmath>

namespace tbri {

// Scaled complementary error function exp(x^2) * erfc(x) for x >= 0.
// Direct evaluation overflows/underflows near x ~ 26; beyond that the
// Laplace asymptotic series converges to machine precision in a few terms.
inline double erfcx(double x) {
    if (x < 26.0) {
        return std::exp(x * x) * std::erfc(x);
    }
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 10; ++k) {
        term *= -(2 * k - 1) * inv2x2;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    constexpr double inv_sqrt_pi = 0.564189583547756287;
    return inv_sqrt_pi / x * sum;
}

} // namespace tbri
