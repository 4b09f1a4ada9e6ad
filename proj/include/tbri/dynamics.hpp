#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tbri/spectral.hpp"
#include "tbri/types.hpp"

namespace tbri {

// Sample times in units of 1/energy (hbar = 1).
struct TimeGrid {
    std::vector<double> t;

    static TimeGrid logarithmic(double t_min, double t_max, int points);
    static TimeGrid linear(double t_min, double t_max, int points);
    TimeGrid& append(const TimeGrid& other); // keeps strictly increasing order
    void validate() const;                   // t >= 0, strictly increasing
};

enum class Provenance { ExactSpectral, HybridFourier, ClosedForm };

std::string to_string(Provenance p);

struct SeriesMeta {
    double delta_e = 0.0;  // sqrt of strength-function variance
    double gamma0 = 0.0;   // golden-rule width
    double n_pc = 0.0;     // participation number of the initial state
    std::string model;     // free-form identifier
};

struct SurvivalSeries {
    TimeGrid grid;
    std::vector<double> w;
    Provenance provenance = Provenance::ExactSpectral;
    SeriesMeta meta;
    std::vector<double> quad_abs_err; // per-point |A| error (hybrid only)
};

// W_i(t) = |sum_k |C_i^(k)|^2 exp(-i E^(k) t)|^2, the exact finite sum.
SurvivalSeries survival_probability(const EigenDecomposition& d, Index i, const TimeGrid& grid);
double survival_probability_at(const EigenDecomposition& d, Index i, double t);

struct Populations {
    Vector w_f;     // per-basis-state populations at time t; sums to 1
    double npc_t;   // instantaneous participation (sum w_f^2)^-1
};

Populations component_populations(const EigenDecomposition& d, Index i, double t);

// N_pc(t) along a grid (batched matrix-vector products).
std::vector<double> participation_series(const EigenDecomposition& d, Index i, const TimeGrid& grid);

// Exact infinite-time averages from the diagonal ensemble.
double long_time_average_self(const EigenDecomposition& d, Index i);            // sum_k w_k^2
double long_time_average_cross(const EigenDecomposition& d, Index i, Index f);  // sum_k w_ik w_fk

struct ShellStats {
    double delta = 0.0;      // energy-shell half-width min(Gamma0, sigma)
    double w_inf = 0.0;      // long-time average of W_i over the window
    double n_pc = 0.0;       // envelope participation number (smoothed weights)
    double n_pc_ipr = 0.0;   // raw inverse participation ratio
    int n_c = 0;             // interaction classes spanned by the shell
    double mean_spacing = 0.0;
    double ratio = 0.0;      // w_inf * n_pc / 3
};

// Time average of W over [t_start, t_stop]. Demands >= min_samples points
// and, when period_hint > 0, a span of >= 10 * period_hint.
double saturation_value(const SurvivalSeries& series, double t_start, double t_stop,
                        double period_hint = 0.0, std::size_t min_samples = 20);

// Envelope participation number: fluctuation-free weights via a
// leave-one-out moving average over +-half_window neighbouring levels
// (E[w_k * avg_{j near k, j != k} w_j] = u_k^2 for independent |C|^2).
double envelope_participation(const EigenDecomposition& d, Index i, int half_window);

// Shell geometry of basis state i. n_c counts ceil(distance/2) up to the
// farthest determinant whose diagonal energy lies within +-delta of H_ii.
ShellStats compute_shell_stats(const EigenDecomposition& d, const HamiltonianMatrix& h,
                               Index i, double gamma0, double sigma_dos, int smooth_half_window);

enum class OscillationStatus { Ok, NoOscillationsDetected };

struct OscillationEstimate {
    OscillationStatus status = OscillationStatus::NoOscillationsDetected;
    double period = 0.0;
    std::size_t peaks = 0;
};

// Mean spacing of successive maxima of the detrended series.
OscillationEstimate estimate_oscillation_period(const TimeGrid& grid,
                                                const std::vector<double>& values,
                                                int detrend_half_window);

} // namespace tbri
