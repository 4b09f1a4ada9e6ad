#include <doctest.h>

#include <cmath>

#include "tbri/quadrature.hpp"

using namespace tbri;

TEST_CASE("gauss-kronrod handles polynomials exactly") {
    const auto cubic = [](double x) { return 3.0 * x * x * x - x + 2.0; };
    const QuadResult r = gauss_kronrod_15(cubic, -1.0, 3.0);
    CHECK(r.value == doctest::Approx(3.0 / 4.0 * (81.0 - 1.0) - 0.5 * (9.0 - 1.0) + 2.0 * 4.0)
                        .epsilon(1e-14));
    CHECK(r.abs_error < 1e-12);
}

TEST_CASE("adaptive integration of a gaussian") {
    const auto f = [](double x) { return std::exp(-x * x); };
    const QuadResult r = integrate_adaptive(f, -10.0, 10.0, 1e-14, 1e-13);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::sqrt(3.14159265358979323846)).epsilon(1e-13));
}

TEST_CASE("adaptive integration resolves a narrow lorentzian") {
    const double g = 1e-3;
    const auto f = [g](double x) { return 1.0 / (x * x + g * g); };
    const QuadResult r =
        integrate_adaptive(f, -1.0, 1.0, 1e-13, 1e-11, {-g, 0.0, g});
    CHECK(r.converged);
    const double exact = 2.0 / g * std::atan(1.0 / g);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("fourier transform of a gaussian matches the closed form") {
    const auto f = [](double e) { return std::exp(-0.5 * e * e); };
    // frozen: sqrt(2 pi) exp(-t^2/2)
    const struct {
        double t, expected;
    } cases[] = {
        {0.5, 2.2120916882928265},
        {2.0, 0.33923524751608824},
        {5.0, 9.3413342108757041e-6},
    };
    for (const auto& c : cases) {
        const QuadResult r = fourier_cos_even(f, c.t, 40.0, 1.0);
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(c.expected).epsilon(1e-9));
        CHECK(std::abs(r.value - c.expected) <= 10 * r.abs_error + 1e-12);
    }
}

TEST_CASE("unconverged integrals are reported, not hidden") {
    // not enough interval budget for a hard spike
    const auto f = [](double x) { return 1.0 / (x * x + 1e-14); };
    const QuadResult r = integrate_adaptive(f, -1.0, 1.0, 1e-14, 1e-12, {}, 8);
    CHECK_FALSE(r.converged);
    CHECK(r.abs_error > 0.0);
}
