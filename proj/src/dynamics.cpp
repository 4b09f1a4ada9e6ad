#include "tbri/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "tbri/errors.hpp"
#include "tbri/fitting.hpp"

namespace tbri {

TimeGrid TimeGrid::logarithmic(double t_min, double t_max, int points) {
    if (!(t_min > 0) || !(t_max > t_min) || points < 2) {
        throw InvalidDimensions("TimeGrid::logarithmic: need 0 < t_min < t_max, points >= 2");
    }
    TimeGrid g;
    g.t.resize(static_cast<std::size_t>(points));
    const double step = std::log(t_max / t_min) / (points - 1);
    for (int k = 0; k < points; ++k) {
        g.t[static_cast<std::size_t>(k)] = t_min * std::exp(step * k);
    }
    g.t.back() = t_max;
    return g;
}

TimeGrid TimeGrid::linear(double t_min, double t_max, int points) {
    if (t_min < 0 || !(t_max > t_min) || points < 2) {
        throw InvalidDimensions("TimeGrid::linear: need 0 <= t_min < t_max, points >= 2");
    }
    TimeGrid g;
    g.t.resize(static_cast<std::size_t>(points));
    const double step = (t_max - t_min) / (points - 1);
    for (int k = 0; k < points; ++k) g.t[static_cast<std::size_t>(k)] = t_min + step * k;
    g.t.back() = t_max;
    return g;
}

TimeGrid& TimeGrid::append(const TimeGrid& other) {
    for (double v : other.t) {
        if (t.empty() || v > t.back()) t.push_back(v);
    }
    return *this;
}

void TimeGrid::validate() const {
    if (t.empty()) throw InvalidDimensions("TimeGrid: empty");
    if (t.front() < 0) throw InvalidDimensions("TimeGrid: times must be >= 0");
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (!(t[k] > t[k - 1])) throw InvalidDimensions("TimeGrid: not strictly increasing");
    }
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::ExactSpectral: return "exact-spectral";
        case Provenance::HybridFourier: return "hybrid-fourier";
        case Provenance::ClosedForm: return "closed-form";
    }
    return "unknown";
}

namespace {

double survival_from_weights(const Vector& w, const Vector& energies, double t) {
    double re = 0.0, im = 0.0;
    for (Index k = 0; k < w.size(); ++k) {
        re += w(k) * std::cos(energies(k) * t);
        im -= w(k) * std::sin(energies(k) * t);
    }
    return re * re + im * im;
}

} // namespace

SurvivalSeries survival_probability(const EigenDecomposition& d, Index i, const TimeGrid& grid) {
    if (i < 0 || i >= d.size()) throw IndexOutOfRange("survival_probability: bad state index");
    grid.validate();
    const Vector w = d.components.row(i).array().square();
    SurvivalSeries out;
    out.grid = grid;
    out.provenance = Provenance::ExactSpectral;
    out.w.resize(grid.t.size());
    for (std::size_t j = 0; j < grid.t.size(); ++j) {
        out.w[j] = survival_from_weights(w, d.energies, grid.t[j]);
    }
    out.meta.delta_e = std::sqrt((w.array() * (d.energies.array() -
                                  (w.array() * d.energies.array()).sum()).square()).sum());
    out.meta.n_pc = 1.0 / w.array().square().sum();
    return out;
}

double survival_probability_at(const EigenDecomposition& d, Index i, double t) {
    if (i < 0 || i >= d.size()) throw IndexOutOfRange("survival_probability_at: bad state index");
    const Vector w = d.components.row(i).array().square();
    return survival_from_weights(w, d.energies, t);
}

Populations component_populations(const EigenDecomposition& d, Index i, double t) {
    if (i < 0 || i >= d.size()) throw IndexOutOfRange("component_populations: bad state index");
    const Index n = d.size();
    Vector cre(n), cim(n);
    for (Index k = 0; k < n; ++k) {
        const double c = d.components(i, k);
        cre(k) = c * std::cos(d.energies(k) * t);
        cim(k) = -c * std::sin(d.energies(k) * t);
    }
    const Vector are = d.components * cre;
    const Vector aim = d.components * cim;
    Populations p;
    p.w_f = are.array().square() + aim.array().square();
    p.npc_t = 1.0 / p.w_f.array().square().sum();
    return p;
}

std::vector<double> participation_series(const EigenDecomposition& d, Index i, const TimeGrid& grid) {
    grid.validate();
    std::vector<double> out(grid.t.size());
    for (std::size_t j = 0; j < grid.t.size(); ++j) {
        out[j] = component_populations(d, i, grid.t[j]).npc_t;
    }
    return out;
}

double long_time_average_self(const EigenDecomposition& d, Index i) {
    const Vector w = d.components.row(i).array().square();
    return w.array().square().sum();
}

double long_time_average_cross(const EigenDecomposition& d, Index i, Index f) {
    const Vector wi = d.components.row(i).array().square();
    const Vector wf = d.components.row(f).array().square();
    return (wi.array() * wf.array()).sum();
}

double saturation_value(const SurvivalSeries& series, double t_start, double t_stop,
                        double period_hint, std::size_t min_samples) {
    if (!(t_stop > t_start)) throw WindowTooShort("saturation_value: empty window");
    if (period_hint > 0 && (t_stop - t_start) < 10.0 * period_hint) {
        throw WindowTooShort("saturation_value: window spans fewer than 10 oscillation periods");
    }
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < series.grid.t.size(); ++j) {
        const double t = series.grid.t[j];
        if (t >= t_start && t <= t_stop) {
            acc += series.w[j];
            ++count;
        }
    }
    if (count < min_samples) {
        throw WindowTooShort("saturation_value: only " + std::to_string(count) + " samples in window");
    }
    return acc / static_cast<double>(count);
}

double envelope_participation(const EigenDecomposition& d, Index i, int half_window) {
    const Index n = d.size();
    if (i < 0 || i >= n) throw IndexOutOfRange("envelope_participation: bad state index");
    const int half = std::max(1, half_window);
    const Vector w = d.components.row(i).array().square();
    double overlap = 0.0;
    for (Index k = 0; k < n; ++k) {
        const Index lo = std::max<Index>(0, k - half);
        const Index hi = std::min<Index>(n - 1, k + half);
        double acc = 0.0;
        int cnt = 0;
        for (Index j = lo; j <= hi; ++j) {
            if (j == k) continue;
            acc += w(j);
            ++cnt;
        }
        if (cnt > 0) overlap += w(k) * (acc / cnt);
    }
    if (overlap <= 0) return static_cast<double>(n);
    return 1.0 / overlap;
}

ShellStats compute_shell_stats(const EigenDecomposition& d, const HamiltonianMatrix& h,
                               Index i, double gamma0, double sigma_dos, int smooth_half_window) {
    ShellStats st;
    st.delta = std::min(gamma0, sigma_dos);
    st.n_pc_ipr = participation_number(d, i);
    st.n_pc = envelope_participation(d, i, smooth_half_window);
    const Index n = d.size();
    const double e_i = h.mat(i, i);
    int n_c = 1;
    for (Index f = 0; f < n; ++f) {
        if (f == i) continue;
        if (std::abs(h.mat(f, f) - e_i) <= st.delta) {
            const int dist = orbital_distance(h.basis->state_at(i), h.basis->state_at(f));
            n_c = std::max(n_c, (dist + 1) / 2);
        }
    }
    st.n_c = n_c;
    return st;
}

OscillationEstimate estimate_oscillation_period(const TimeGrid& grid,
                                                const std::vector<double>& values,
                                                int detrend_half_window) {
    OscillationEstimate est;
    if (values.size() != grid.t.size() || values.size() < 7) return est;
    const std::vector<double> trend = moving_average(values, detrend_half_window);
    std::vector<double> detrended(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) detrended[j] = values[j] - trend[j];
    const std::vector<std::size_t> peaks = local_maxima(detrended);
    std::vector<double> peak_times;
    for (std::size_t p : peaks) {
        if (detrended[p] > 0) peak_times.push_back(grid.t[p]);
    }
    if (peak_times.size() < 3) return est;
    double acc = 0.0;
    for (std::size_t k = 1; k < peak_times.size(); ++k) acc += peak_times[k] - peak_times[k - 1];
    est.status = OscillationStatus::Ok;
    est.period = acc / static_cast<double>(peak_times.size() - 1);
    est.peaks = peak_times.size();
    return est;
}

} // namespace tbri
