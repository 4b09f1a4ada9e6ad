#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "sha256.hpp"
#include "tbri/errors.hpp"
#include "tbri/rng.hpp"

namespace tbri::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

Index select_initial_state(const HamiltonianMatrix& h, const InitialStateSpec& spec) {
    const Index n = h.mat.rows();
    switch (spec.kind) {
        case SelectorKind::Index:
            if (spec.index < 0 || spec.index >= n) {
                throw IndexOutOfRange("initial state index out of range");
            }
            return spec.index;
        case SelectorKind::Energy:
        case SelectorKind::Mid: {
            double target = spec.energy;
            if (spec.kind == SelectorKind::Mid) {
                Vector sorted = h.mat.diagonal();
                std::sort(sorted.begin(), sorted.end());
                target = sorted(sorted.size() / 2);
            }
            Index best = 0;
            double best_d = std::abs(h.mat(0, 0) - target);
            for (Index i = 1; i < n; ++i) {
                const double d = std::abs(h.mat(i, i) - target);
                if (d < best_d) {
                    best = i;
                    best_d = d;
                }
            }
            return best;
        }
    }
    return 0;
}

struct SharedGrids {
    TimeGrid grid;
    double sat_start = 0.0;
    double sat_stop = 0.0;
    double period_hint = 0.0;
    std::vector<double> sf_edges;  // relative to H_ii
    std::vector<double> dos_edges; // absolute
};

struct RealizationScratch {
    RealizationResult res;
    double delta_shell = 0.0;
};

// Everything computed for one disorder realization on the shared grids.
RealizationScratch compute_realization(const ExperimentConfig& cfg, const FockBasis& basis,
                                       int realization, const SharedGrids* grids) {
    ModelConfig mc = cfg.model;
    mc.seed = derive_seed(cfg.model.seed, static_cast<std::uint64_t>(realization));
    const auto [sp, amps] = sample_model(mc);
    const HamiltonianMatrix h = build_hamiltonian(basis, sp, amps, mc);
    const EigenDecomposition dec = diagonalize(h);

    RealizationScratch out;
    RealizationResult& r = out.res;
    r.seed = mc.seed;
    r.initial_state = select_initial_state(h, cfg.initial);
    const Index i = r.initial_state;
    r.h_ii = h.mat(i, i);
    r.delta_sq_spectral = h.mat.row(i).squaredNorm() - r.h_ii * r.h_ii;

    const CouplingStats cs = direct_coupling_stats(h, i, cfg.analysis.coupling_bins);
    r.delta_sq_direct = cs.sum_sq;
    r.gamma0 = cs.gamma_at_ei;
    r.delta_i = cs.delta_i;

    const SpectralSummary dos = density_of_states(dec, cfg.analysis.dos_bins);
    r.dos_sigma = dos.sigma;
    r.mean_spacing = dos.mean_spacing;

    const int half_window = std::max(2, static_cast<int>(std::lround(cfg.analysis.bandwidth_factor / 2.0)));
    const ShellStats shell = compute_shell_stats(dec, h, i, r.gamma0, dos.sigma, half_window);
    r.n_pc_ipr = shell.n_pc_ipr;
    r.n_pc_env = shell.n_pc;
    r.n_c = shell.n_c;
    out.delta_shell = std::max(shell.delta, 1e-12);

    if (grids) {
        const SurvivalSeries series = survival_probability(dec, i, grids->grid);
        r.w = series.w;
        r.npc_t = participation_series(dec, i, grids->grid);
        r.w_inf = saturation_value(series, grids->sat_start, grids->sat_stop, grids->period_hint);

        // oscillations of N_pc(t) inside the saturation window
        TimeGrid sat_grid;
        std::vector<double> sat_npc;
        for (std::size_t j = 0; j < grids->grid.t.size(); ++j) {
            if (grids->grid.t[j] >= grids->sat_start && grids->grid.t[j] <= grids->sat_stop) {
                sat_grid.t.push_back(grids->grid.t[j]);
                sat_npc.push_back(r.npc_t[j]);
            }
        }
        if (sat_grid.t.size() > 8) {
            const double dt = sat_grid.t[1] - sat_grid.t[0];
            const int half =
                std::max(3, static_cast<int>(std::lround(1.5 * grids->period_hint / std::max(dt, 1e-12))));
            const OscillationEstimate osc = estimate_oscillation_period(sat_grid, sat_npc, half);
            if (osc.status == OscillationStatus::Ok) r.oscillation_period = osc.period;
        }

        // strength function on the shared relative grid
        const Index nb_sf = static_cast<Index>(grids->sf_edges.size()) - 1;
        r.sf_density.assign(static_cast<std::size_t>(nb_sf), 0.0);
        const double sf_lo = grids->sf_edges.front();
        const double sf_w = grids->sf_edges[1] - grids->sf_edges[0];
        const Vector weights = dec.components.row(i).array().square();
        for (Index k = 0; k < dec.size(); ++k) {
            const double e = dec.energies(k) - r.h_ii;
            int b = static_cast<int>((e - sf_lo) / sf_w);
            b = std::clamp(b, 0, static_cast<int>(nb_sf) - 1);
            r.sf_density[static_cast<std::size_t>(b)] += weights(k) / sf_w;
        }
        // density of states on the shared absolute grid
        const Index nb_dos = static_cast<Index>(grids->dos_edges.size()) - 1;
        r.dos_density.assign(static_cast<std::size_t>(nb_dos), 0.0);
        const double dos_lo = grids->dos_edges.front();
        const double dos_w = grids->dos_edges[1] - grids->dos_edges[0];
        for (Index k = 0; k < dec.size(); ++k) {
            int b = static_cast<int>((dec.energies(k) - dos_lo) / dos_w);
            b = std::clamp(b, 0, static_cast<int>(nb_dos) - 1);
            r.dos_density[static_cast<std::size_t>(b)] += 1.0 / dos_w;
        }
    }
    return out;
}

SharedGrids make_grids(const ExperimentConfig& cfg, const RealizationScratch& first) {
    SharedGrids g;
    const double delta_e = std::sqrt(std::max(first.res.delta_sq_spectral, 0.0));
    const double gamma0 = first.res.gamma0;
    const double delta_shell = first.delta_shell;
    g.period_hint = static_cast<double>(first.res.n_c) / delta_shell;

    double log_start = cfg.times.log_start;
    double log_stop = cfg.times.log_stop;
    if (log_start <= 0) log_start = delta_e > 0 ? 1e-3 / delta_e : 1e-3;
    if (log_stop <= 0) {
        log_stop = (delta_e > 0 && gamma0 > 0) ? 10.0 * gamma0 / (delta_e * delta_e) : 10.0;
    }
    if (log_stop <= 10.0 * log_start) log_stop = 1e4 * log_start;

    double sat_start = cfg.times.sat_start;
    double sat_stop = cfg.times.sat_stop;
    if (sat_start <= 0) {
        sat_start = std::max({log_stop * 1.05, 15.0 * g.period_hint});
    }
    if (sat_stop <= sat_start) sat_stop = sat_start + 20.0 * g.period_hint;

    g.grid = TimeGrid::logarithmic(log_start, log_stop, cfg.times.log_points);
    g.grid.append(TimeGrid::linear(sat_start, sat_stop, cfg.times.sat_points));
    g.grid.t.insert(g.grid.t.begin(), 0.0);
    g.grid.validate();
    g.sat_start = sat_start;
    g.sat_stop = sat_stop;

    const double sf_span = 5.0 * std::max(delta_e, 1e-6);
    g.sf_edges.resize(static_cast<std::size_t>(cfg.analysis.sf_bins) + 1);
    for (int b = 0; b <= cfg.analysis.sf_bins; ++b) {
        g.sf_edges[static_cast<std::size_t>(b)] =
            -sf_span + 2.0 * sf_span * b / cfg.analysis.sf_bins;
    }

    // absolute-energy window from the non-interacting extremes, padded for
    // interaction broadening
    double e_lo = 0.0, e_hi = 0.0;
    {
        ModelConfig mc = cfg.model;
        mc.seed = derive_seed(cfg.model.seed, 0);
        const auto [sp, amps] = sample_model(mc);
        for (int s = 0; s < cfg.model.n; ++s) e_lo += sp.eps(s);
        for (int s = cfg.model.m - cfg.model.n; s < cfg.model.m; ++s) e_hi += sp.eps(s);
    }
    const double pad = 4.0 * std::max(delta_e, 1e-6) + 0.05 * (e_hi - e_lo);
    g.dos_edges.resize(static_cast<std::size_t>(cfg.analysis.dos_bins) + 1);
    for (int b = 0; b <= cfg.analysis.dos_bins; ++b) {
        g.dos_edges[static_cast<std::size_t>(b)] =
            (e_lo - pad) + (e_hi - e_lo + 2 * pad) * b / cfg.analysis.dos_bins;
    }
    return g;
}

template <typename Get>
std::vector<double> pointwise_mean(const std::vector<RealizationResult>& rs, Get get) {
    std::vector<double> mean;
    if (rs.empty()) return mean;
    mean.assign(get(rs[0]).size(), 0.0);
    for (const auto& r : rs) {
        const auto& v = get(r);
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += v[j];
    }
    for (double& x : mean) x /= static_cast<double>(rs.size());
    return mean;
}

} // namespace

EnsembleResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    EnsembleResult out;
    out.config = config;
    out.canonical_config = serialize_config(config);
    out.config_sha = Sha256::of_string(out.canonical_config);
    out.delta_sq_theory = delta_e_squared_theory(config.model);

    const FockBasis basis =
        enumerate_basis(config.model.n, config.model.m, config.model.basis_cap);

    // realization 0 fixes the shared grids
    RealizationScratch first = compute_realization(config, basis, 0, nullptr);
    const SharedGrids grids = make_grids(config, first);
    out.grid = grids.grid;
    out.sat_window_start = grids.sat_start;
    out.sat_window_stop = grids.sat_stop;

    std::vector<RealizationScratch> all(static_cast<std::size_t>(config.realizations));
    parallel_for(config.realizations, config.threads, [&](int r) {
        all[static_cast<std::size_t>(r)] = compute_realization(config, basis, r, &grids);
    });

    out.realizations.reserve(all.size());
    double delta_shell_mean = 0.0;
    for (const auto& s : all) {
        out.realizations.push_back(s.res);
        delta_shell_mean += s.delta_shell;
    }
    delta_shell_mean /= static_cast<double>(all.size());

    out.w_mean = pointwise_mean(out.realizations, [](const RealizationResult& r) -> const std::vector<double>& { return r.w; });
    out.npc_t_mean = pointwise_mean(out.realizations, [](const RealizationResult& r) -> const std::vector<double>& { return r.npc_t; });
    out.sf_mean = pointwise_mean(out.realizations, [](const RealizationResult& r) -> const std::vector<double>& { return r.sf_density; });
    out.dos_mean = pointwise_mean(out.realizations, [](const RealizationResult& r) -> const std::vector<double>& { return r.dos_density; });
    out.sf_energy.resize(out.sf_mean.size());
    for (std::size_t b = 0; b < out.sf_mean.size(); ++b) {
        out.sf_energy[b] = 0.5 * (grids.sf_edges[b] + grids.sf_edges[b + 1]);
    }
    out.dos_energy.resize(out.dos_mean.size());
    for (std::size_t b = 0; b < out.dos_mean.size(); ++b) {
        out.dos_energy[b] = 0.5 * (grids.dos_edges[b] + grids.dos_edges[b + 1]);
    }

    int detected = 0;
    double period_acc = 0.0;
    for (const auto& r : out.realizations) {
        out.delta_sq_mean += r.delta_sq_spectral / static_cast<double>(out.realizations.size());
        out.gamma0_mean += r.gamma0 / static_cast<double>(out.realizations.size());
        out.w_inf_mean += r.w_inf / static_cast<double>(out.realizations.size());
        out.n_pc_env_mean += r.n_pc_env / static_cast<double>(out.realizations.size());
        out.n_pc_ipr_mean += r.n_pc_ipr / static_cast<double>(out.realizations.size());
        out.n_c = std::max(out.n_c, r.n_c);
        if (r.oscillation_period) {
            period_acc += *r.oscillation_period;
            ++detected;
        }
    }
    out.saturation_ratio = out.w_inf_mean * out.n_pc_env_mean / 3.0;
    if (detected > 0) {
        out.oscillation_period_mean = period_acc / detected;
        out.oscillation_ratio =
            *out.oscillation_period_mean * delta_shell_mean / static_cast<double>(out.n_c);
    }

    const double delta_e_mean = std::sqrt(std::max(out.delta_sq_mean, 0.0));
    if (config.model.v0 == 0.0) {
        out.regime = "trivial";
    } else if (out.gamma0_mean >= delta_e_mean) {
        out.regime = "gaussian";
    } else {
        out.regime = "breit-wigner";
    }

    if (config.model.v0 > 0.0) {
        SurvivalSeries mean_series;
        mean_series.grid = out.grid;
        mean_series.w = out.w_mean;
        mean_series.provenance = Provenance::ExactSpectral;
        mean_series.meta.delta_e = delta_e_mean;
        mean_series.meta.gamma0 = out.gamma0_mean;
        FitDecayOptions opt;
        opt.saturation_guard = config.analysis.tail_guard;
        try {
            out.fit = fit_decay(mean_series, opt);
            out.fit_status = "ok";
        } catch (const Error& e) {
            out.fit_status = e.what();
        }
    } else {
        out.fit_status = "skipped: non-interacting model";
    }
    return out;
}

namespace {

void write_csv_header(std::ostream& os, const std::string& name, const std::string& sha,
                      const std::string& columns) {
    os << "# tbri " << name << " v1\n";
    os << "# config_sha256: " << sha << "\n";
    os << "# columns: " << columns << "\n";
}

json realization_json(const RealizationResult& r) {
    json j;
    j["seed"] = r.seed;
    j["initial_state"] = r.initial_state;
    j["h_ii"] = r.h_ii;
    j["delta_sq_spectral"] = r.delta_sq_spectral;
    j["delta_sq_direct"] = r.delta_sq_direct;
    j["gamma0"] = r.gamma0;
    if (r.delta_i) j["delta_i"] = *r.delta_i;
    j["dos_sigma"] = r.dos_sigma;
    j["mean_spacing"] = r.mean_spacing;
    j["n_pc_ipr"] = r.n_pc_ipr;
    j["n_pc_env"] = r.n_pc_env;
    j["w_inf"] = r.w_inf;
    j["n_c"] = r.n_c;
    if (r.oscillation_period) j["oscillation_period"] = *r.oscillation_period;
    return j;
}

json fit_json(const DecayFit& f) {
    json j;
    j["delta_sq_fit"] = f.delta_sq_fit;
    j["gamma_fit"] = f.gamma_fit;
    j["prefactor_fit"] = f.prefactor_fit;
    j["t_c_order_of_magnitude"] = f.t_c.order_of_magnitude;
    if (f.t_c.intersection) j["t_c_intersection"] = *f.t_c.intersection;
    j["early_window"] = {f.early_window.t_lo, f.early_window.t_hi};
    j["late_window"] = {f.late_window.t_lo, f.late_window.t_hi};
    j["early_rms"] = f.early_rms;
    j["late_rms"] = f.late_rms;
    return j;
}

} // namespace

std::string write_experiment_outputs(const EnsembleResult& result) {
    const OutputSpec& spec = result.config.output;
    fs::create_directories(spec.dir);
    std::map<std::string, std::string> manifest;

    const bool want_csv = spec.format != OutputFormat::Json;
    const double delta_e = std::sqrt(std::max(result.delta_sq_mean, 0.0));
    const double gamma0 = result.gamma0_mean;

    if (want_csv) {
        {
            std::ofstream os(fs::path(spec.dir) / "dynamics.csv");
            write_csv_header(os, "dynamics", result.config_sha,
                             "t [1/energy], w_exact_mean [prob], w_gauss_law [prob], "
                             "w_interp [prob], w_exp_tail [prob], n_pc_t_mean [count]");
            const bool laws = delta_e > 0 && gamma0 > 0;
            for (std::size_t j = 0; j < result.grid.t.size(); ++j) {
                const double t = result.grid.t[j];
                const double wg = laws ? closed_form_w(GaussianLaw{delta_e}, t) : 1.0;
                const double wi = laws ? closed_form_w(InterpolationLaw{gamma0, delta_e}, t) : 1.0;
                const double wt = laws ? closed_form_w(AsymptoticTailLaw{gamma0, delta_e}, t) : 1.0;
                os << fmt(t) << ',' << fmt(result.w_mean[j]) << ',' << fmt(wg) << ',' << fmt(wi)
                   << ',' << fmt(wt) << ',' << fmt(result.npc_t_mean[j]) << '\n';
            }
        }
        {
            std::ofstream os(fs::path(spec.dir) / "strength_function.csv");
            write_csv_header(os, "strength_function", result.config_sha,
                             "e_rel [energy], p_mean [1/energy]");
            for (std::size_t b = 0; b < result.sf_energy.size(); ++b) {
                os << fmt(result.sf_energy[b]) << ',' << fmt(result.sf_mean[b]) << '\n';
            }
        }
        {
            std::ofstream os(fs::path(spec.dir) / "density_of_states.csv");
            write_csv_header(os, "density_of_states", result.config_sha,
                             "e [energy], rho_mean [1/energy]");
            for (std::size_t b = 0; b < result.dos_energy.size(); ++b) {
                os << fmt(result.dos_energy[b]) << ',' << fmt(result.dos_mean[b]) << '\n';
            }
        }
        for (const char* name : {"dynamics.csv", "strength_function.csv", "density_of_states.csv"}) {
            manifest[name] = Sha256::of_file((fs::path(spec.dir) / name).string());
        }
    }
    if (spec.dump_hamiltonian) {
        ModelConfig mc = result.config.model;
        mc.seed = derive_seed(result.config.model.seed, 0);
        const FockBasis basis = enumerate_basis(mc.n, mc.m, mc.basis_cap);
        const auto [sp, amps] = sample_model(mc);
        const HamiltonianMatrix h = build_hamiltonian(basis, sp, amps, mc);
        const std::string name = "hamiltonian_000.txt";
        std::ofstream os(fs::path(spec.dir) / name);
        write_hamiltonian_text(h, os);
        os.close();
        manifest[name] = Sha256::of_file((fs::path(spec.dir) / name).string());
    }

    const std::string summary_path = (fs::path(spec.dir) / "summary.json").string();
    if (spec.format != OutputFormat::Csv) {
        json j;
        j["canonical_config"] = result.canonical_config;
        j["config_sha256"] = result.config_sha;
        json ens;
        ens["delta_sq_theory"] = result.delta_sq_theory;
        ens["delta_sq_mean"] = result.delta_sq_mean;
        ens["delta_e_mean"] = delta_e;
        ens["gamma0_mean"] = result.gamma0_mean;
        ens["regime"] = result.regime;
        ens["gamma0_over_delta_e"] = delta_e > 0 ? result.gamma0_mean / delta_e : 0.0;
        ens["w_inf_mean"] = result.w_inf_mean;
        ens["n_pc_env_mean"] = result.n_pc_env_mean;
        ens["n_pc_ipr_mean"] = result.n_pc_ipr_mean;
        ens["w_inf_n_pc_over_3"] = result.saturation_ratio;
        ens["n_c"] = result.n_c;
        ens["sat_window"] = {result.sat_window_start, result.sat_window_stop};
        if (result.oscillation_period_mean) {
            ens["oscillation_period_mean"] = *result.oscillation_period_mean;
            ens["oscillation_period_delta_over_n_c"] = result.oscillation_ratio;
        }
        ens["fit_status"] = result.fit_status;
        if (result.fit) ens["fit"] = fit_json(*result.fit);
        j["ensemble"] = ens;
        json reals = json::array();
        for (const auto& r : result.realizations) reals.push_back(realization_json(r));
        j["realizations"] = reals;
        json files;
        for (const auto& [name, sha] : manifest) files[name] = sha;
        j["files"] = files;
        std::ofstream os(summary_path);
        os << j.dump(2) << '\n';
    }
    return summary_path;
}

SweepResult run_sweep(const ExperimentConfig& base, std::vector<double> v0_values) {
    if (v0_values.size() < 2) {
        throw ConfigError("sweep needs at least 2 interaction strengths");
    }
    SweepResult out;
    std::vector<double> unique_values;
    for (double v : v0_values) {
        if (std::find(unique_values.begin(), unique_values.end(), v) != unique_values.end()) {
            out.duplicates_dropped.push_back(v);
            continue;
        }
        unique_values.push_back(v);
    }
    for (double v : out.duplicates_dropped) {
        std::cerr << "warning: duplicate sweep value v0=" << v << " dropped\n";
    }

    out.points.resize(unique_values.size());
    // points are independent tasks; each runs its realizations serially
    parallel_for(static_cast<int>(unique_values.size()), base.threads, [&](int p) {
        const auto up = static_cast<std::size_t>(p);
        SweepPointResult& point = out.points[up];
        point.v0 = unique_values[up];
        ExperimentConfig cfg = base;
        cfg.model.v0 = point.v0;
        cfg.threads = 1;
        char sub[32];
        std::snprintf(sub, sizeof sub, "point_%02d", p);
        cfg.output.dir = (fs::path(base.output.dir) / sub).string();
        try {
            EnsembleResult ens = run_experiment(cfg);
            write_experiment_outputs(ens);
            point.ensemble = std::move(ens);
            point.status = "ok";
        } catch (const std::exception& e) {
            point.status = e.what();
        }
    });
    return out;
}

std::string write_sweep_outputs(const SweepResult& result, const ExperimentConfig& base) {
    fs::create_directories(base.output.dir);
    const fs::path dir(base.output.dir);
    const std::string agg_path = (dir / "sweep.csv").string();
    {
        std::ofstream os(agg_path);
        os << "# tbri sweep v1\n";
        os << "# columns: v0, gamma0, delta_e, gamma0_over_delta_e, gamma_fit, "
              "delta_sq_fit, prefactor_fit, w_inf_n_pc_over_3, regime, status\n";
        for (const auto& p : result.points) {
            os << fmt(p.v0) << ',';
            if (p.ensemble) {
                const EnsembleResult& e = *p.ensemble;
                const double de = std::sqrt(std::max(e.delta_sq_mean, 0.0));
                os << fmt(e.gamma0_mean) << ',' << fmt(de) << ','
                   << fmt(de > 0 ? e.gamma0_mean / de : 0.0) << ',';
                if (e.fit) {
                    os << fmt(e.fit->gamma_fit) << ',' << fmt(e.fit->delta_sq_fit) << ','
                       << fmt(e.fit->prefactor_fit) << ',';
                } else {
                    os << "nan,nan,nan,";
                }
                os << fmt(e.saturation_ratio) << ',' << e.regime << ',' << "ok" << '\n';
            } else {
                os << "nan,nan,nan,nan,nan,nan,nan,," << p.status << '\n';
            }
        }
    }
    json j;
    json points = json::array();
    for (const auto& p : result.points) {
        json pj;
        pj["v0"] = p.v0;
        pj["status"] = p.status;
        if (p.ensemble) {
            pj["summary"] = (fs::path(p.ensemble->config.output.dir) / "summary.json").string();
            pj["regime"] = p.ensemble->regime;
        }
        points.push_back(pj);
    }
    j["points"] = points;
    json dupes = json::array();
    for (double v : result.duplicates_dropped) dupes.push_back(v);
    j["duplicates_dropped"] = dupes;
    json files;
    files["sweep.csv"] = Sha256::of_file(agg_path);
    j["files"] = files;
    const std::string sum_path = (dir / "sweep_summary.json").string();
    std::ofstream os(sum_path);
    os << j.dump(2) << '\n';
    return sum_path;
}

std::string write_figure1(const Figure1Spec& spec) {
    if (!(spec.gamma > 0) || !(spec.delta_e > 0)) {
        throw ConfigError("figure1: gamma and delta_e must be > 0");
    }
    if (!(spec.t_max > 0)) throw ConfigError("figure1: t_max must be > 0");
    if (spec.points < 2) throw ConfigError("figure1: need at least 2 points");

    const double g = spec.gamma;
    const double d = spec.delta_e;
    const double d2 = d * d;
    const double tc_order = g / d2;
    const double tc_caption = g / (2.0 * d2);
    const double c22 = closed_form_w(AsymptoticTailLaw{g, d}, 0.0);
    const CrossoverTimes cross = crossover_time(g, d, c22);
    const std::string note =
        "the quadratic-to-linear handover time is gamma/delta_e^2 by the "
        "matching argument but gamma/(2 delta_e^2) at the curves' closest "
        "approach; the two differ by a factor of 2 and both are reported";

    fs::create_directories(spec.dir);
    const fs::path dir(spec.dir);
    std::map<std::string, std::string> manifest;
    if (spec.format != OutputFormat::Json) {
        std::ofstream os(dir / "figure1.csv");
        os << "# tbri figure1 v1\n";
        os << "# gamma: " << fmt(g) << ", delta_e: " << fmt(d) << "\n";
        os << "# t_c (gamma/delta_e^2): " << fmt(tc_order) << "\n";
        os << "# t_c (gamma/(2 delta_e^2), closest approach): " << fmt(tc_caption) << "\n";
        if (cross.intersection) {
            os << "# gaussian-tail intersection: " << fmt(*cross.intersection) << "\n";
        }
        os << "# note: " << note << "\n";
        os << "# columns: t [1/energy], w_gauss [prob], w_interp [prob], "
              "w_tail [prob], w_exp [prob]\n";
        for (int k = 0; k < spec.points; ++k) {
            const double t = spec.t_max * k / (spec.points - 1);
            os << fmt(t) << ',' << fmt(closed_form_w(GaussianLaw{d}, t)) << ','
               << fmt(closed_form_w(InterpolationLaw{g, d}, t)) << ','
               << fmt(closed_form_w(AsymptoticTailLaw{g, d}, t)) << ','
               << fmt(std::exp(-g * t)) << '\n';
        }
        os.close();
        manifest["figure1.csv"] = Sha256::of_file((dir / "figure1.csv").string());
    }
    const std::string sum_path = (dir / "figure1.json").string();
    if (spec.format != OutputFormat::Csv) {
        json j;
        j["gamma"] = g;
        j["delta_e"] = d;
        j["t_c_order_of_magnitude"] = tc_order;
        j["t_c_closest_approach"] = tc_caption;
        if (cross.intersection) j["t_c_intersection"] = *cross.intersection;
        j["tail_prefactor"] = c22;
        j["note"] = note;
        json files;
        for (const auto& [name, sha] : manifest) files[name] = sha;
        j["files"] = files;
        std::ofstream os(sum_path);
        os << j.dump(2) << '\n';
    }
    return sum_path;
}

int verify_manifest(const std::string& summary_path) {
    std::ifstream in(summary_path);
    if (!in) throw std::ios_base::failure("cannot open " + summary_path);
    json j;
    in >> j;
    if (!j.contains("files")) {
        std::cout << "no manifest in " << summary_path << "\n";
        return 1;
    }
    const fs::path dir = fs::path(summary_path).parent_path();
    int problems = 0;
    for (const auto& [name, sha] : j.at("files").items()) {
        const fs::path p = dir / name;
        if (!fs::exists(p)) {
            std::cout << "MISSING   " << name << "\n";
            ++problems;
            continue;
        }
        const std::string actual = Sha256::of_file(p.string());
        if (actual == sha.get<std::string>()) {
            std::cout << "OK        " << name << "\n";
        } else {
            std::cout << "MISMATCH  " << name << "\n";
            ++problems;
        }
    }
    if (j.contains("canonical_config") && j.contains("config_sha256")) {
        const std::string sha = Sha256::of_string(j.at("canonical_config").get<std::string>());
        if (sha == j.at("config_sha256").get<std::string>()) {
            std::cout << "OK        config_sha256\n";
        } else {
            std::cout << "MISMATCH  config_sha256\n";
            ++problems;
        }
    }
    return problems;
}

} // namespace tbri::cli
