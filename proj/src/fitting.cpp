#include "tbri/fitting.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "tbri/errors.hpp"

namespace tbri {

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InsufficientRange("fit_linear: need >= 2 points");
    }
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LinearFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    f.rms_residual = std::sqrt(ss_res / static_cast<double>(n));
    f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    return f;
}

GaussianFit fit_gaussian(std::span<const double> x, std::span<const double> y, int max_iter) {
    if (x.size() != y.size() || x.size() < 4) {
        throw InsufficientRange("fit_gaussian: need >= 4 points");
    }
    const std::size_t n = x.size();

    // moment seed (treat y as weights)
    double w = 0, wx = 0;
    double ymax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double yi = std::max(y[i], 0.0);
        w += yi;
        wx += yi * x[i];
        ymax = std::max(ymax, y[i]);
    }
    GaussianFit fit;
    if (w <= 0 || ymax <= 0) return fit;
    double c = wx / w;
    double var = 0;
    for (std::size_t i = 0; i < n; ++i) var += std::max(y[i], 0.0) * (x[i] - c) * (x[i] - c);
    double s = std::sqrt(std::max(var / w, 1e-300));
    double a = ymax;

    auto ss_residual = [&](double aa, double cc, double ssig) {
        double acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (x[i] - cc) / ssig;
            const double r = y[i] - aa * std::exp(-0.5 * u * u);
            acc += r * r;
        }
        return acc;
    };

    double lambda = 1e-3;
    double ss = ss_residual(a, c, s);
    for (int it = 0; it < max_iter; ++it) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (x[i] - c) / s;
            const double e = std::exp(-0.5 * u * u);
            const double r = y[i] - a * e;
            Eigen::Vector3d j;
            j << e, a * e * u / s, a * e * u * u / s;
            jtj += j * j.transpose();
            jtr += j * r;
        }
        Eigen::Matrix3d damped = jtj;
        damped.diagonal() += lambda * jtj.diagonal();
        const Eigen::Vector3d step = damped.ldlt().solve(jtr);
        const double a1 = a + step(0);
        const double c1 = c + step(1);
        const double s1 = s + step(2);
        if (!(s1 > 0) || !std::isfinite(a1) || !std::isfinite(c1) || !std::isfinite(s1)) {
            lambda *= 10;
            continue;
        }
        const double ss1 = ss_residual(a1, c1, s1);
        if (ss1 < ss) {
            a = a1;
            c = c1;
            s = s1;
            lambda = std::max(lambda * 0.3, 1e-12);
            const bool small_step = step.cwiseAbs().maxCoeff() <
                                    1e-10 * std::max({std::abs(a), std::abs(c), s, 1e-30});
            const bool small_gain = (ss - ss1) < 1e-14 * std::max(ss, 1e-300);
            ss = ss1;
            if (small_step || small_gain) {
                fit.converged = true;
                break;
            }
        } else {
            lambda *= 10;
            if (lambda > 1e12) break;
        }
    }

    fit.amplitude = a;
    fit.center = c;
    fit.sigma = s;
    double my = 0;
    for (std::size_t i = 0; i < n; ++i) my += y[i];
    my /= static_cast<double>(n);
    double syy = 0;
    for (std::size_t i = 0; i < n; ++i) syy += (y[i] - my) * (y[i] - my);
    fit.r2 = syy > 0 ? 1.0 - ss / syy : 1.0;
    if (!fit.converged && fit.r2 > 0.999999) fit.converged = true;
    return fit;
}

GaussianFit fit_gaussian_normalized(std::span<const double> x, std::span<const double> y,
                                    double total, int max_iter) {
    if (x.size() != y.size() || x.size() < 3) {
        throw InsufficientRange("fit_gaussian_normalized: need >= 3 points");
    }
    const std::size_t n = x.size();
    constexpr double sqrt_2pi = 2.50662827463100050;

    double w = 0, wx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double yi = std::max(y[i], 0.0);
        w += yi;
        wx += yi * x[i];
    }
    GaussianFit fit;
    if (w <= 0 || total <= 0) return fit;
    double c = wx / w;
    double var = 0;
    for (std::size_t i = 0; i < n; ++i) var += std::max(y[i], 0.0) * (x[i] - c) * (x[i] - c);
    double s = std::sqrt(std::max(var / w, 1e-300));

    const auto model = [&](double xc, double cc, double ss_) {
        const double u = (xc - cc) / ss_;
        return total / (sqrt_2pi * ss_) * std::exp(-0.5 * u * u);
    };
    const auto ss_residual = [&](double cc, double ss_) {
        double acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - model(x[i], cc, ss_);
            acc += r * r;
        }
        return acc;
    };

    double lambda = 1e-3;
    double ss = ss_residual(c, s);
    for (int it = 0; it < max_iter; ++it) {
        Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
        Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            const double g = model(x[i], c, s);
            const double u = (x[i] - c) / s;
            const double r = y[i] - g;
            Eigen::Vector2d j;
            j << g * u / s, g * (u * u - 1.0) / s;
            jtj += j * j.transpose();
            jtr += j * r;
        }
        Eigen::Matrix2d damped = jtj;
        damped.diagonal() += lambda * jtj.diagonal();
        const Eigen::Vector2d step = damped.ldlt().solve(jtr);
        const double c1 = c + step(0);
        const double s1 = s + step(1);
        if (!(s1 > 0) || !std::isfinite(c1) || !std::isfinite(s1)) {
            lambda *= 10;
            continue;
        }
        const double ss1 = ss_residual(c1, s1);
        if (ss1 < ss) {
            c = c1;
            s = s1;
            lambda = std::max(lambda * 0.3, 1e-12);
            const bool small_step =
                step.cwiseAbs().maxCoeff() < 1e-11 * std::max({std::abs(c), s, 1e-30});
            const bool small_gain = (ss - ss1) < 1e-14 * std::max(ss, 1e-300);
            ss = ss1;
            if (small_step || small_gain) {
                fit.converged = true;
                break;
            }
        } else {
            lambda *= 10;
            if (lambda > 1e12) break;
        }
    }

    fit.center = c;
    fit.sigma = s;
    fit.amplitude = total / (sqrt_2pi * s);
    double my = 0;
    for (std::size_t i = 0; i < n; ++i) my += y[i];
    my /= static_cast<double>(n);
    double syy = 0;
    for (std::size_t i = 0; i < n; ++i) syy += (y[i] - my) * (y[i] - my);
    fit.r2 = syy > 0 ? 1.0 - ss / syy : 1.0;
    if (!fit.converged && fit.r2 > 0.999999) fit.converged = true;
    return fit;
}

std::vector<double> moving_average(std::span<const double> v, int half) {
    const int n = static_cast<int>(v.size());
    std::vector<double> out(v.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        double acc = 0;
        for (int j = lo; j <= hi; ++j) acc += v[j];
        out[static_cast<std::size_t>(i)] = acc / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::vector<std::size_t> local_maxima(std::span<const double> v) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] > v[i - 1] && v[i] > v[i + 1]) out.push_back(i);
    }
    return out;
}

} // namespace tbri
