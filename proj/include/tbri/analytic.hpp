#pragma once

#include <optional>
#include <variant>

#include "tbri/dynamics.hpp"
#include "tbri/fitting.hpp"
#include "tbri/quadrature.hpp"
#include "tbri/types.hpp"

namespace tbri {

// Closed-form strength-function families.
struct BreitWignerSF {
    double gamma;
    double center;
};

struct GaussianSF {
    double sigma;
    double center;
};

// Gaussian-enveloped Lorentzian; `norm` is fixed by normalization at
// construction (use make_hybrid).
struct HybridSF {
    double gamma;
    double sigma;
    double center;
    double norm;
};

using StrengthFunctionModel = std::variant<BreitWignerSF, GaussianSF, HybridSF>;

// Normalization constant B of the hybrid form, evaluated through the scaled
// complementary error function so that gamma >> sigma never overflows.
double hybrid_normalization(double gamma, double sigma);

// Second central moment Delta_E^2 of the hybrid form.
double hybrid_variance(double gamma, double sigma);

// Computes the norm and (by default) cross-checks it against adaptive
// quadrature of the density to 1e-6 relative.
HybridSF make_hybrid(double gamma, double sigma, double center, bool validate = true);

double evaluate_sf(const StrengthFunctionModel& model, double e);

// Fermi golden rule: 2 pi <|V_if|^2> rho_f.
double golden_rule_gamma(double mean_v_sq, double rho_f_at_e);

// |A(t)| of the hybrid model by oscillatory quadrature. Points whose
// estimated amplitude error exceeds 1e-10 + 1e-6 |A| are flagged in
// quad_abs_err (value kept); no exception. For strongly decayed amplitudes
// the integration contour is shifted off the real axis (exactly equivalent
// by Cauchy's theorem) to sidestep catastrophic cancellation.
SurvivalSeries hybrid_amplitude(const HybridSF& model, const TimeGrid& grid);
double hybrid_amplitude_at(const HybridSF& model, double t, QuadResult* diagnostics = nullptr);

// Accuracy-loss contract for hybrid-fourier points: flagged when the
// estimated amplitude error exceeds 1e-10 + 1e-6 |A|.
bool amplitude_accuracy_loss(const SurvivalSeries& series, std::size_t point);
std::size_t count_accuracy_loss(const SurvivalSeries& series);

// Three-term small-time series of |A(t)| for gamma << sigma:
// 1 - (gamma sigma / sqrt(2 pi)) t^2 / 2 + (gamma sigma^3 / sqrt(2 pi)) t^4 / 24.
double short_time_series(double gamma, double sigma, double t);

// Closed-form decay laws.
struct GaussianLaw {
    double delta_e;
};
struct ExponentialLaw {
    double gamma;
    double prefactor;
};
// exp(G^2/2D^2 - sqrt(G^4/4D^4 + G^2 t^2)): quadratic at small t,
// rate -G at large t.
struct InterpolationLaw {
    double gamma;
    double delta_e;
};
// (pi^2 G^2 / 8 D^2) exp(G^2/4D^2 - G t): the long-time tail with its
// exponentially large prefactor.
struct AsymptoticTailLaw {
    double gamma;
    double delta_e;
};

using DecayLaw = std::variant<GaussianLaw, ExponentialLaw, InterpolationLaw, AsymptoticTailLaw>;

double closed_form_w(const DecayLaw& law, double t);

struct CrossoverTimes {
    double order_of_magnitude = 0.0;        // gamma / delta_e^2
    std::optional<double> intersection;     // exp(-D^2 t^2) == C exp(-G t);
                                            // empty when the curves never meet
};

CrossoverTimes crossover_time(double gamma, double delta_e, double tail_prefactor);

struct FitWindow {
    double t_lo = 0.0;
    double t_hi = 0.0;
};

struct DecayFit {
    double delta_sq_fit = 0.0;   // Gaussian rate from the early window
    double gamma_fit = 0.0;      // exponential rate from the tail window
    double prefactor_fit = 0.0;  // tail intercept C
    CrossoverTimes t_c;
    FitWindow early_window;
    FitWindow late_window;
    double early_rms = 0.0;      // log-residual RMS per window
    double late_rms = 0.0;
};

struct FitDecayOptions {
    double saturation_guard = 10.0;  // exclude W < guard * W_inf (exact-spectral)
    double w_floor = 1e-290;         // representability floor (hybrid)
    double err_fraction = 0.05;      // skip points with |A| error above this fraction
};

// ln W vs t on [t_lo, t_hi] (slope = -gamma, exp(intercept) = prefactor).
LinearFit fit_exponential_tail(const SurvivalSeries& series, double t_lo, double t_hi,
                               const FitDecayOptions& opt = {});

// ln W vs t^2 on [t_lo, t_hi] (slope = -Delta_E^2).
LinearFit fit_gaussian_decay(const SurvivalSeries& series, double t_lo, double t_hi,
                             const FitDecayOptions& opt = {});

// Two-window fit: Gaussian rate on [0, 0.5 t_c], exponential rate and
// prefactor on [2 t_c, end], with t_c self-consistently re-estimated.
DecayFit fit_decay(const SurvivalSeries& series, const FitDecayOptions& opt = {});

} // namespace tbri
