#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "tbri/analytic.hpp"
#include "tbri/dynamics.hpp"

namespace tbri::cli {

struct RealizationResult {
    std::uint64_t seed = 0;
    Index initial_state = 0;
    double h_ii = 0.0;
    double delta_sq_spectral = 0.0; // (H^2)_ii - H_ii^2
    double delta_sq_direct = 0.0;   // sum_{f != i} H_{if}^2 (identical by symmetry)
    double gamma0 = 0.0;
    std::optional<double> delta_i;
    double dos_sigma = 0.0;
    double mean_spacing = 0.0;
    double n_pc_ipr = 0.0;
    double n_pc_env = 0.0;
    double w_inf = 0.0;
    int n_c = 1;
    std::optional<double> oscillation_period;
    std::vector<double> w;     // on the shared grid
    std::vector<double> npc_t; // on the shared grid
    std::vector<double> sf_density;  // on the shared relative-energy grid
    std::vector<double> dos_density; // on the shared absolute-energy grid
};

struct EnsembleResult {
    ExperimentConfig config;
    std::string canonical_config;
    std::string config_sha;
    TimeGrid grid;
    double sat_window_start = 0.0;
    double sat_window_stop = 0.0;
    std::vector<RealizationResult> realizations;

    // pointwise ensemble means
    std::vector<double> w_mean;
    std::vector<double> npc_t_mean;
    std::vector<double> sf_energy; // relative to H_ii
    std::vector<double> sf_mean;
    std::vector<double> dos_energy;
    std::vector<double> dos_mean;

    double delta_sq_theory = 0.0;
    double delta_sq_mean = 0.0;
    double gamma0_mean = 0.0;
    double w_inf_mean = 0.0;
    double n_pc_env_mean = 0.0;
    double n_pc_ipr_mean = 0.0;
    double saturation_ratio = 0.0; // w_inf * n_pc_env / 3
    int n_c = 1;
    std::string regime; // trivial | breit-wigner | gaussian
    std::optional<DecayFit> fit;
    std::string fit_status;
    std::optional<double> oscillation_period_mean;
    double oscillation_ratio = 0.0; // period * Delta / n_c
};

// Full ensemble pipeline: realization 0 fixes the shared grids, the rest run
// on a worker pool, reduction is in index order.
EnsembleResult run_experiment(const ExperimentConfig& config);

// Writes dynamics.csv / strength_function.csv / density_of_states.csv and
// summary.json (per config.output.format) plus the manifest; returns the
// summary path.
std::string write_experiment_outputs(const EnsembleResult& result);

struct SweepPointResult {
    double v0 = 0.0;
    std::string status; // "ok" or the error message
    std::optional<EnsembleResult> ensemble;
};

struct SweepResult {
    std::vector<SweepPointResult> points;
    std::vector<double> duplicates_dropped;
};

SweepResult run_sweep(const ExperimentConfig& base, std::vector<double> v0_values);
std::string write_sweep_outputs(const SweepResult& result, const ExperimentConfig& base);

struct Figure1Spec {
    double gamma = 0.5;
    double delta_e = 1.2;
    double t_max = 4.0;
    int points = 400;
    std::string dir = "out";
    OutputFormat format = OutputFormat::Both;
};

// Schematic decay curves: gaussian law, interpolation, asymptotic tail with
// its prefactor, and the bare exponential, with both crossover-time markers.
std::string write_figure1(const Figure1Spec& spec);

// Re-hash every file recorded in the summary manifest. Returns the number of
// mismatches/missing files; prints one line per file.
int verify_manifest(const std::string& summary_path);

} // namespace tbri::cli
