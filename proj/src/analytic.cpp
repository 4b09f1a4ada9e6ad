#include "tbri/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "tbri/errors.hpp"
#include "tbri/fitting.hpp"
#include "tbri/special.hpp"

namespace tbri {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double sqrt_2pi = 2.50662827463100050;

double z_of(double gamma, double sigma) { return gamma / (sigma * std::sqrt(8.0)); }

} // namespace

double hybrid_normalization(double gamma, double sigma) {
    if (!(gamma > 0) || !(sigma > 0)) {
        throw InvalidDimensions("hybrid_normalization: need gamma, sigma > 0");
    }
    // 1/B = 2 [1 - Phi(z)] (pi/gamma) exp(gamma^2/8sigma^2) = (2 pi / gamma) erfcx(z)
    return gamma / (2.0 * pi * erfcx(z_of(gamma, sigma)));
}

double hybrid_variance(double gamma, double sigma) {
    const double b = hybrid_normalization(gamma, sigma);
    return b * (sigma * sqrt_2pi - 0.5 * pi * gamma * erfcx(z_of(gamma, sigma)));
}

HybridSF make_hybrid(double gamma, double sigma, double center, bool validate) {
    HybridSF model{gamma, sigma, center, hybrid_normalization(gamma, sigma)};
    if (validate) {
        const double e_max = 40.0 * std::max(sigma, gamma);
        const auto f = [&](double e) { return evaluate_sf(model, center + e); };
        const QuadResult q = integrate_adaptive(f, -e_max, e_max, 1e-12, 1e-10,
                                                {-gamma, -gamma / 4, 0.0, gamma / 4, gamma});
        if (std::abs(q.value - 1.0) > 1e-6) {
            throw ConvergenceFailure("make_hybrid: normalization check failed, integral = " +
                                     std::to_string(q.value));
        }
    }
    return model;
}

double evaluate_sf(const StrengthFunctionModel& model, double e) {
    return std::visit(
        [e](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, BreitWignerSF>) {
                const double d = m.center - e;
                return m.gamma / (2.0 * pi * (d * d + m.gamma * m.gamma / 4.0));
            } else if constexpr (std::is_same_v<T, GaussianSF>) {
                const double u = (e - m.center) / m.sigma;
                return std::exp(-0.5 * u * u) / (m.sigma * sqrt_2pi);
            } else {
                const double d = e - m.center;
                return m.norm * std::exp(-d * d / (2.0 * m.sigma * m.sigma)) /
                       (d * d + m.gamma * m.gamma / 4.0);
            }
        },
        model);
}

double golden_rule_gamma(double mean_v_sq, double rho_f_at_e) {
    if (mean_v_sq < 0 || rho_f_at_e < 0) {
        throw InvalidDimensions("golden_rule_gamma: inputs must be >= 0");
    }
    return 2.0 * pi * mean_v_sq * rho_f_at_e;
}

namespace {

// Real-axis evaluation of A(t) = B * integral exp(-E^2/2s^2 - iEt)/(E^2+G^2/4) dE.
QuadResult amplitude_real_axis(const HybridSF& m, double t) {
    const double e_max = 40.0 * std::max(m.sigma, m.gamma);
    const auto f = [&](double e) {
        return std::exp(-e * e / (2.0 * m.sigma * m.sigma)) /
               (e * e + m.gamma * m.gamma / 4.0);
    };
    QuadResult q = fourier_cos_even(f, t, e_max, m.gamma, 1e-14, 1e-10);
    q.value *= m.norm;
    q.abs_error *= m.norm;
    return q;
}

// Same integral along the contour Im E = -y with 0 < y < G/2 (no pole is
// crossed, so the value is identical); the integrand then carries the decay
// exp(-y t) explicitly and the cancellation that kills the real-axis form at
// large G t disappears.
QuadResult amplitude_shifted_contour(const HybridSF& m, double t) {
    const double delta = std::min(m.gamma / 4.0, 1.0 / t);
    double y = m.gamma / 2.0 - delta;
    y = std::min(y, 30.0 * m.sigma); // keep exp(y^2/2s^2) representable
    const auto h = [&](double x) {
        const std::complex<double> e(x, -y);
        const std::complex<double> g =
            std::exp(-e * e / (2.0 * m.sigma * m.sigma)) / (e * e + m.gamma * m.gamma / 4.0);
        return g.real() * std::cos(x * t) + g.imag() * std::sin(x * t);
    };
    const double e_max = 40.0 * std::max(m.sigma, m.gamma);
    QuadResult q = integrate_oscillatory_panels(h, t, e_max, delta, 1e-14, 1e-10);
    const double scale = 2.0 * m.norm * std::exp(-y * t);
    q.value *= scale;
    q.abs_error *= std::abs(scale);
    return q;
}

} // namespace

double hybrid_amplitude_at(const HybridSF& model, double t, QuadResult* diagnostics) {
    if (!(model.gamma > 0) || !(model.sigma > 0)) {
        throw InvalidDimensions("hybrid_amplitude_at: invalid model");
    }
    const double tt = std::abs(t); // A(-t) = A(t): the density is real
    QuadResult q = (model.gamma * tt > 16.0) ? amplitude_shifted_contour(model, tt)
                                             : amplitude_real_axis(model, tt);
    if (diagnostics) *diagnostics = q;
    return q.value;
}

SurvivalSeries hybrid_amplitude(const HybridSF& model, const TimeGrid& grid) {
    grid.validate();
    SurvivalSeries out;
    out.grid = grid;
    out.provenance = Provenance::HybridFourier;
    out.meta.delta_e = std::sqrt(hybrid_variance(model.gamma, model.sigma));
    out.meta.gamma0 = model.gamma;
    out.meta.model = "hybrid";
    out.w.resize(grid.t.size());
    out.quad_abs_err.resize(grid.t.size());
    for (std::size_t j = 0; j < grid.t.size(); ++j) {
        QuadResult q;
        const double a = hybrid_amplitude_at(model, grid.t[j], &q);
        out.w[j] = a * a;
        // flagged per point when above the accuracy-loss threshold
        out.quad_abs_err[j] = q.abs_error;
    }
    return out;
}

bool amplitude_accuracy_loss(const SurvivalSeries& series, std::size_t point) {
    if (series.quad_abs_err.empty() || point >= series.w.size()) return false;
    const double a = std::sqrt(std::max(series.w[point], 0.0));
    return series.quad_abs_err[point] > 1e-10 + 1e-6 * a;
}

std::size_t count_accuracy_loss(const SurvivalSeries& series) {
    std::size_t n = 0;
    for (std::size_t j = 0; j < series.w.size(); ++j) {
        if (amplitude_accuracy_loss(series, j)) ++n;
    }
    return n;
}

double short_time_series(double gamma, double sigma, double t) {
    const double c2 = gamma * sigma / sqrt_2pi;
    const double c4 = gamma * sigma * sigma * sigma / sqrt_2pi;
    return 1.0 - 0.5 * c2 * t * t + c4 * t * t * t * t / 24.0;
}

double closed_form_w(const DecayLaw& law, double t) {
    return std::visit(
        [t](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, GaussianLaw>) {
                const double d2 = l.delta_e * l.delta_e;
                return std::exp(-d2 * t * t);
            } else if constexpr (std::is_same_v<T, ExponentialLaw>) {
                return l.prefactor * std::exp(-l.gamma * t);
            } else if constexpr (std::is_same_v<T, InterpolationLaw>) {
                const double g2 = l.gamma * l.gamma;
                const double d2 = l.delta_e * l.delta_e;
                return std::exp(g2 / (2.0 * d2) -
                                std::sqrt(g2 * g2 / (4.0 * d2 * d2) + g2 * t * t));
            } else {
                const double g2 = l.gamma * l.gamma;
                const double d2 = l.delta_e * l.delta_e;
                return pi * pi * g2 / (8.0 * d2) * std::exp(g2 / (4.0 * d2) - l.gamma * t);
            }
        },
        law);
}

CrossoverTimes crossover_time(double gamma, double delta_e, double tail_prefactor) {
    if (!(gamma > 0) || !(delta_e > 0) || !(tail_prefactor > 0)) {
        throw InvalidDimensions("crossover_time: need positive inputs");
    }
    CrossoverTimes out;
    const double d2 = delta_e * delta_e;
    out.order_of_magnitude = gamma / d2;
    // exp(-D^2 t^2) = C exp(-G t)  <=>  D^2 t^2 - G t + ln C = 0
    const double lc = std::log(tail_prefactor);
    const double disc = gamma * gamma - 4.0 * d2 * lc;
    if (disc >= 0) {
        const double root = std::sqrt(disc);
        const double t1 = (gamma - root) / (2.0 * d2);
        const double t2 = (gamma + root) / (2.0 * d2);
        if (t1 > 0) {
            out.intersection = t1;
        } else if (t2 > 0) {
            out.intersection = t2;
        }
    }
    return out;
}

namespace {

struct LogPoints {
    std::vector<double> t;
    std::vector<double> ln_w;
};

LogPoints usable_points(const SurvivalSeries& s, const FitDecayOptions& opt) {
    LogPoints p;
    const bool hybrid = s.provenance == Provenance::HybridFourier;
    for (std::size_t j = 0; j < s.grid.t.size(); ++j) {
        const double w = s.w[j];
        if (!(w > 0) || s.grid.t[j] <= 0) continue;
        if (hybrid) {
            if (w < opt.w_floor) continue;
            if (!s.quad_abs_err.empty() &&
                s.quad_abs_err[j] > opt.err_fraction * std::sqrt(w)) {
                continue;
            }
        }
        p.t.push_back(s.grid.t[j]);
        p.ln_w.push_back(std::log(w));
    }
    return p;
}

LinearFit fit_window(const LogPoints& p, double t_lo, double t_hi, bool vs_t_squared,
                     double w_cut_ln, const char* what) {
    std::vector<double> x, y;
    for (std::size_t j = 0; j < p.t.size(); ++j) {
        if (p.t[j] < t_lo || p.t[j] > t_hi) continue;
        if (p.ln_w[j] < w_cut_ln) continue;
        x.push_back(vs_t_squared ? p.t[j] * p.t[j] : p.t[j]);
        y.push_back(p.ln_w[j]);
    }
    if (x.size() < 3) {
        throw SaturationDominates(std::string(what) + ": fewer than 3 usable points in window");
    }
    return fit_linear(x, y);
}

} // namespace

LinearFit fit_exponential_tail(const SurvivalSeries& series, double t_lo, double t_hi,
                               const FitDecayOptions& opt) {
    return fit_window(usable_points(series, opt), t_lo, t_hi, false,
                      -std::numeric_limits<double>::infinity(), "fit_exponential_tail");
}

LinearFit fit_gaussian_decay(const SurvivalSeries& series, double t_lo, double t_hi,
                             const FitDecayOptions& opt) {
    return fit_window(usable_points(series, opt), t_lo, t_hi, true,
                      -std::numeric_limits<double>::infinity(), "fit_gaussian_decay");
}

DecayFit fit_decay(const SurvivalSeries& series, const FitDecayOptions& opt) {
    const LogPoints p_all = usable_points(series, opt);
    if (p_all.t.size() < 8) throw InsufficientRange("fit_decay: too few usable points");

    // saturation guard level for exact-spectral series; points at or below
    // the equilibrium plateau carry no decay information
    double ln_guard = -std::numeric_limits<double>::infinity();
    if (series.provenance == Provenance::ExactSpectral) {
        const std::size_t nback = std::max<std::size_t>(5, series.w.size() / 10);
        double w_inf = 0.0;
        for (std::size_t j = series.w.size() - nback; j < series.w.size(); ++j) w_inf += series.w[j];
        w_inf /= static_cast<double>(nback);
        if (w_inf > 0) ln_guard = std::log(opt.saturation_guard * w_inf);
    }
    LogPoints p;
    for (std::size_t j = 0; j < p_all.t.size(); ++j) {
        if (p_all.ln_w[j] > ln_guard) {
            p.t.push_back(p_all.t[j]);
            p.ln_w.push_back(p_all.ln_w[j]);
        }
    }
    if (p.t.size() < 8) {
        throw SaturationDominates("fit_decay: almost all samples sit at the saturation plateau");
    }

    // seed estimates: quadratic rate from the shallow end, exponential rate
    // from the deep end of the unsaturated decay
    std::vector<double> x0, y0, x1, y1;
    for (std::size_t j = 0; j < p.t.size(); ++j) {
        if (p.ln_w[j] > std::log(0.5)) {
            x0.push_back(p.t[j] * p.t[j]);
            y0.push_back(p.ln_w[j]);
        }
    }
    const double t_end = p.t.back();
    for (std::size_t j = 0; j < p.t.size(); ++j) {
        if (p.t[j] >= 0.7 * t_end) {
            x1.push_back(p.t[j]);
            y1.push_back(p.ln_w[j]);
        }
    }
    if (x0.size() < 3 || x1.size() < 3) {
        throw InsufficientRange("fit_decay: series does not cover both regimes");
    }
    double delta_sq = -fit_linear(x0, y0).slope;
    double gamma = -fit_linear(x1, y1).slope;
    if (!(delta_sq > 0) || !(gamma > 0)) {
        throw InsufficientRange("fit_decay: could not seed positive rates");
    }

    // range preconditions
    if (t_end * gamma < 5.0) {
        throw InsufficientRange("fit_decay: max(t) * gamma < 5, tail not covered");
    }
    if (p.t.front() > 0.3 / std::sqrt(delta_sq)) {
        throw InsufficientRange("fit_decay: earliest sample past the quadratic regime");
    }

    DecayFit fit;
    for (int pass = 0; pass < 2; ++pass) {
        const double t_c = gamma / delta_sq;
        fit.early_window = {0.0, 0.5 * t_c};
        fit.late_window = {2.0 * t_c, t_end};
        const LinearFit early = fit_window(p, fit.early_window.t_lo, fit.early_window.t_hi, true,
                                           -std::numeric_limits<double>::infinity(), "fit_decay[early]");
        const LinearFit late =
            fit_window(p, fit.late_window.t_lo, fit.late_window.t_hi, false, ln_guard, "fit_decay[late]");
        fit.delta_sq_fit = -early.slope;
        fit.gamma_fit = -late.slope;
        fit.prefactor_fit = std::exp(late.intercept);
        fit.early_rms = early.rms_residual;
        fit.late_rms = late.rms_residual;
        delta_sq = fit.delta_sq_fit;
        gamma = fit.gamma_fit;
        if (!(delta_sq > 0) || !(gamma > 0)) {
            throw InsufficientRange("fit_decay: window fit produced non-positive rates");
        }
    }
    fit.t_c = crossover_time(fit.gamma_fit, std::sqrt(fit.delta_sq_fit), fit.prefactor_fit);
    return fit;
}

} // namespace tbri
