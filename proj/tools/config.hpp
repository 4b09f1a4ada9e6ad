#pragma once

#include <string>

#include "tbri/tbri_model.hpp"

namespace tbri::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TimesSpec {
    // zero means "derive from the measured widths of realization 0"
    double log_start = 0.0;
    double log_stop = 0.0;
    int log_points = 160;
    double sat_start = 0.0;
    double sat_stop = 0.0;
    int sat_points = 400;
};

enum class SelectorKind { Mid, Index, Energy };

struct InitialStateSpec {
    SelectorKind kind = SelectorKind::Mid;
    Index index = 0;
    double energy = 0.0;
};

struct AnalysisSpec {
    double bandwidth_factor = 5.0; // strength-function smoothing, units of D
    double tail_guard = 10.0;      // exclude W below guard * W_inf in tail fits
    int dos_bins = 40;
    int sf_bins = 60;
    int coupling_bins = 24;
};

enum class OutputFormat { Csv, Json, Both };

struct OutputSpec {
    std::string dir = "out";
    OutputFormat format = OutputFormat::Both;
    bool dump_hamiltonian = false;
};

struct ExperimentConfig {
    ModelConfig model;
    int realizations = 20;
    int threads = 0; // 0 = hardware concurrency
    TimesSpec times;
    InitialStateSpec initial;
    AnalysisSpec analysis;
    OutputSpec output;

    void validate() const;
};

// Flat key/value sections; '#' starts a comment. Errors carry line numbers.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Fixed section/key order, %.17g doubles: parse(serialize(c)) == c and
// serialize is idempotent under reparse.
std::string serialize_config(const ExperimentConfig& c);

// TBRI_SEED, TBRI_OUT, TBRI_REALIZATIONS, TBRI_THREADS, TBRI_FORMAT.
void apply_env_overrides(ExperimentConfig& c);

std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& s);

} // namespace tbri::cli
