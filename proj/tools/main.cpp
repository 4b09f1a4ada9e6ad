#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "config.hpp"
#include "experiment.hpp"
#include "tbri/errors.hpp"

namespace {

// exit codes: 0 ok, 1 verification failure, 2 config, 3 numeric, 4 io
constexpr int exit_ok = 0;
constexpr int exit_verify = 1;
constexpr int exit_config = 2;
constexpr int exit_numeric = 3;
constexpr int exit_io = 4;

struct CommonFlags {
    std::string config_path;
    std::string out;
    std::string format;
    std::int64_t seed = -1;
    int realizations = 0;
    int threads = -1;

    void add_to(CLI::App* cmd, bool need_config) {
        auto* c = cmd->add_option("--config", config_path, "experiment config file (ini)");
        if (need_config) c->required();
        cmd->add_option("--seed", seed, "override the model seed");
        cmd->add_option("--out", out, "override the output directory");
        cmd->add_option("--realizations", realizations, "override the ensemble size");
        cmd->add_option("--threads", threads, "worker threads (0 = auto)");
        cmd->add_option("--format", format, "output format: csv|json|both");
    }

    void apply(tbri::cli::ExperimentConfig& cfg) const {
        tbri::cli::apply_env_overrides(cfg);
        if (seed >= 0) cfg.model.seed = static_cast<std::uint64_t>(seed);
        if (!out.empty()) cfg.output.dir = out;
        if (realizations > 0) cfg.realizations = realizations;
        if (threads >= 0) cfg.threads = threads;
        if (!format.empty()) cfg.output.format = tbri::cli::parse_format(format);
    }
};

std::vector<double> parse_v0_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tbri: exact decay of excited states under random two-body interactions"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    bool dump_h = false;
    auto* run_cmd = app.add_subcommand("run", "build the ensemble, evolve, fit, export");
    run_flags.add_to(run_cmd, true);
    run_cmd->add_flag("--dump-h", dump_h, "also dump realization 0's hamiltonian matrix");

    CommonFlags sweep_flags;
    std::string v0_list;
    auto* sweep_cmd = app.add_subcommand("sweep", "run the pipeline across interaction strengths");
    sweep_flags.add_to(sweep_cmd, true);
    sweep_cmd->add_option("--v0", v0_list, "comma-separated interaction strengths")->required();

    tbri::cli::Figure1Spec fig;
    std::string fig_format = "both";
    auto* fig_cmd = app.add_subcommand("figure1", "emit the schematic decay-law curves");
    fig_cmd->add_option("--gamma", fig.gamma, "exponential rate");
    fig_cmd->add_option("--delta-e", fig.delta_e, "gaussian rate (energy width)");
    fig_cmd->add_option("--t-max", fig.t_max, "largest time");
    fig_cmd->add_option("--points", fig.points, "samples per curve");
    fig_cmd->add_option("--out", fig.dir, "output directory");
    fig_cmd->add_option("--format", fig_format, "output format: csv|json|both");

    std::string summary_path;
    auto* verify_cmd = app.add_subcommand("verify", "re-hash the files recorded in a summary manifest");
    verify_cmd->add_option("summary", summary_path, "path to summary.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (run_cmd->parsed()) {
            tbri::cli::ExperimentConfig cfg = tbri::cli::parse_config_file(run_flags.config_path);
            run_flags.apply(cfg);
            if (dump_h) cfg.output.dump_hamiltonian = true;
            const tbri::cli::EnsembleResult result = tbri::cli::run_experiment(cfg);
            const std::string summary = tbri::cli::write_experiment_outputs(result);
            std::cout << "regime: " << result.regime << "\n";
            std::cout << "delta_sq theory/empirical: " << result.delta_sq_theory << " / "
                      << result.delta_sq_mean << "\n";
            std::cout << "summary: " << summary << "\n";
        } else if (sweep_cmd->parsed()) {
            tbri::cli::ExperimentConfig cfg = tbri::cli::parse_config_file(sweep_flags.config_path);
            sweep_flags.apply(cfg);
            const auto values = parse_v0_list(v0_list);
            const tbri::cli::SweepResult result = tbri::cli::run_sweep(cfg, values);
            const std::string summary = tbri::cli::write_sweep_outputs(result, cfg);
            int failures = 0;
            for (const auto& p : result.points) {
                if (p.status != "ok") {
                    ++failures;
                    std::cerr << "point v0=" << p.v0 << " failed: " << p.status << "\n";
                }
            }
            std::cout << "summary: " << summary << "\n";
            if (failures == static_cast<int>(result.points.size())) return exit_numeric;
        } else if (fig_cmd->parsed()) {
            fig.format = tbri::cli::parse_format(fig_format);
            const std::string summary = tbri::cli::write_figure1(fig);
            std::cout << "summary: " << summary << "\n";
        } else if (verify_cmd->parsed()) {
            const int problems = tbri::cli::verify_manifest(summary_path);
            if (problems > 0) {
                std::cout << problems << " problem(s) found\n";
                return exit_verify;
            }
            std::cout << "all hashes match\n";
        }
    } catch (const tbri::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return exit_io;
    } catch (const tbri::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    }
    return exit_ok;
}
