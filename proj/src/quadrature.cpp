#include "tbri/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace tbri {

namespace {

// Kronrod-15 abscissae/weights on [-1, 1] and the embedded Gauss-7 weights
// (QUADPACK dqk15 constants).
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a, b, value, error;
    std::size_t order; // insertion counter, deterministic tie-break
};

struct IntervalLess {
    bool operator()(const Interval& x, const Interval& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.order > y.order;
    }
};

} // namespace

QuadResult gauss_kronrod_15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(c - h * xgk[j]);
        fv[14 - j] = f(c + h * xgk[j]);
    }
    fv[7] = f(c);
    double resk = 0.0, resg = 0.0;
    for (int j = 0; j < 7; ++j) {
        resk += wgk[j] * (fv[j] + fv[14 - j]);
        if (j % 2 == 1) resg += wg[j / 2] * (fv[j] + fv[14 - j]);
    }
    resk += wgk[7] * fv[7];
    resg += wg[3] * fv[7];
    QuadResult r;
    r.value = resk * h;
    r.abs_error = std::abs((resk - resg) * h);
    r.evals = 15;
    return r;
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              double abs_tol, double rel_tol,
                              std::vector<double> breakpoints,
                              std::size_t max_intervals) {
    QuadResult total;
    if (a == b) return total;

    std::vector<double> knots;
    knots.push_back(a);
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double x : breakpoints) {
        if (x > a && x < b && (knots.empty() || x > knots.back())) knots.push_back(x);
    }
    knots.push_back(b);

    std::priority_queue<Interval, std::vector<Interval>, IntervalLess> heap;
    std::size_t counter = 0;
    double value = 0.0, error = 0.0;
    std::size_t evals = 0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        QuadResult r = gauss_kronrod_15(f, knots[i], knots[i + 1]);
        evals += r.evals;
        value += r.value;
        error += r.abs_error;
        heap.push({knots[i], knots[i + 1], r.value, r.abs_error, counter++});
    }

    std::size_t intervals = knots.size() - 1;
    while (error > abs_tol + rel_tol * std::abs(value) && intervals < max_intervals) {
        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at floating-point resolution; error is irreducible
            heap.push({worst.a, worst.b, worst.value, 0.0, counter++});
            error -= worst.error;
            continue;
        }
        QuadResult lo = gauss_kronrod_15(f, worst.a, mid);
        QuadResult hi = gauss_kronrod_15(f, mid, worst.b);
        evals += lo.evals + hi.evals;
        value += lo.value + hi.value - worst.value;
        error += lo.abs_error + hi.abs_error - worst.error;
        heap.push({worst.a, mid, lo.value, lo.abs_error, counter++});
        heap.push({mid, worst.b, hi.value, hi.abs_error, counter++});
        ++intervals;
    }

    total.value = value;
    total.abs_error = error;
    total.evals = evals;
    total.converged = error <= abs_tol + rel_tol * std::abs(value);
    return total;
}

QuadResult integrate_oscillatory_panels(const Integrand& h, double t, double e_max,
                                        double feature_scale, double abs_tol, double rel_tol) {
    // panel edges: quarter-period oscillation grid plus a dyadic refinement
    // around the origin feature
    std::vector<double> edges;
    edges.push_back(0.0);
    if (feature_scale > 0.0) {
        for (double s = feature_scale / 8.0; s < e_max; s *= 2.0) edges.push_back(s);
    }
    const double tt = std::abs(t);
    if (tt > 0.0) {
        const double w = 3.14159265358979323846 / (4.0 * tt);
        for (double x = w; x < e_max; x += w) {
            edges.push_back(x);
            if (edges.size() > 400000) break;
        }
    }
    edges.push_back(e_max);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    double value = 0.0, comp = 0.0; // Kahan
    double err = 0.0, abs_mass = 0.0;
    std::size_t evals = 0;
    bool all_ok = true;
    const double panel_abs = abs_tol / static_cast<double>(edges.size());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        QuadResult r = integrate_adaptive(h, edges[i], edges[i + 1], panel_abs, rel_tol, {}, 64);
        evals += r.evals;
        err += r.abs_error;
        abs_mass += std::abs(r.value);
        all_ok = all_ok && r.converged;
        const double y = r.value - comp;
        const double s = value + y;
        comp = (s - value) - y;
        value = s;
    }

    QuadResult out;
    out.value = value;
    // quadrature error plus round-off from cancellation across panels
    out.abs_error = err + 1e-16 * abs_mass;
    out.evals = evals;
    out.converged = all_ok;
    return out;
}

QuadResult fourier_cos_even(const Integrand& f, double t, double e_max,
                            double feature_scale, double abs_tol, double rel_tol) {
    const auto g = [&](double e) { return f(e) * std::cos(e * t); };
    QuadResult r = integrate_oscillatory_panels(g, t, e_max, feature_scale, abs_tol / 2, rel_tol);
    r.value *= 2.0;
    r.abs_error *= 2.0;
    return r;
}

} // namespace tbri
