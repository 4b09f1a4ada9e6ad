#pragma once

#include <functional>
#include <vector>

namespace tbri {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0; // estimated
    std::size_t evals = 0;
    bool converged = true;
};

using Integrand = std::function<double(double)>;

// 15-point Kronrod / 7-point Gauss pair on [a, b].
QuadResult gauss_kronrod_15(const Integrand& f, double a, double b);

// Globally adaptive Gauss-Kronrod over [a, b]. `breakpoints` seeds the
// initial subdivision (values outside (a, b) are ignored); intervals are
// then split worst-error-first until |error| <= abs_tol + rel_tol*|value|
// or the interval budget runs out (converged=false, never throws).
QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              double abs_tol = 1e-12, double rel_tol = 1e-10,
                              std::vector<double> breakpoints = {},
                              std::size_t max_intervals = 20000);

// Integral of an oscillatory integrand over [0, e_max], split into panels
// no wider than pi/(4t) with a dyadic refinement near the origin at
// `feature_scale`, each panel handled adaptively and summed with Kahan
// compensation. The reported error includes a round-off floor proportional
// to the total absolute panel mass, which is what limits heavily cancelling
// integrals.
QuadResult integrate_oscillatory_panels(const Integrand& h, double t, double e_max,
                                        double feature_scale,
                                        double abs_tol = 1e-13, double rel_tol = 1e-9);

// I(t) = integral over the whole real line of f(E) cos(E t) dE for even f,
// computed as 2 * integral over [0, e_max] with the panel scheme above.
QuadResult fourier_cos_even(const Integrand& f, double t, double e_max,
                            double feature_scale,
                            double abs_tol = 1e-13, double rel_tol = 1e-9);

} // namespace tbri
