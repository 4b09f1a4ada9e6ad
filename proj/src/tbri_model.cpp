#include "tbri/tbri_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "tbri/errors.hpp"
#include "tbri/rng.hpp"

namespace tbri {

void ModelConfig::validate() const {
    if (n <= 0 || m <= 0 || n > m) {
        throw InvalidDimensions("ModelConfig: need 0 < n <= m");
    }
    if (v0 < 0) throw InvalidDimensions("ModelConfig: v0 must be >= 0");
    if (d0 <= 0) throw InvalidDimensions("ModelConfig: d0 must be > 0");
    if (jitter < 0) throw InvalidDimensions("ModelConfig: jitter must be >= 0");
}

std::pair<SingleParticleSpectrum, TwoBodyAmplitudes> sample_model(const ModelConfig& config) {
    config.validate();

    SingleParticleSpectrum sp;
    sp.eps.resize(config.m);
    std::mt19937_64 eng(derive_seed(config.seed, 0x5350u)); // single-particle stream
    for (int s = 0; s < config.m; ++s) {
        double e = config.d0 * static_cast<double>(s);
        if (config.spectrum == SpectrumKind::Jittered && config.jitter > 0) {
            const double u = static_cast<double>((eng() >> 11)) * 0x1.0p-53; // [0, 1)
            e += config.d0 * config.jitter * (2.0 * u - 1.0);
        }
        sp.eps(s) = e;
    }
    std::sort(sp.eps.begin(), sp.eps.end());

    const int npairs = config.m * (config.m - 1) / 2;
    const std::size_t nvals = static_cast<std::size_t>(npairs) * (npairs + 1) / 2;
    std::vector<double> values(nvals, 0.0);
    if (config.v0 > 0) {
        GaussianSampler gauss(derive_seed(config.seed, 0x5642u)); // two-body stream
        for (auto& v : values) v = config.v0 * gauss.next();
    }
    return {std::move(sp), TwoBodyAmplitudes(config.m, std::move(values))};
}

HamiltonianMatrix build_hamiltonian(const FockBasis& basis,
                                    const SingleParticleSpectrum& spectrum,
                                    const TwoBodyAmplitudes& amplitudes,
                                    const ModelConfig& config) {
    if (spectrum.eps.size() != basis.orbitals() || amplitudes.orbitals() != basis.orbitals() ||
        basis.particles() != config.n || basis.orbitals() != config.m) {
        throw DimensionMismatch("build_hamiltonian: inconsistent basis/spectrum/amplitudes");
    }
    const Index n_states = basis.size();
    const int m = basis.orbitals();

    HamiltonianMatrix h;
    h.basis = &basis;
    h.config = config;
    h.mat = Matrix::Zero(n_states, n_states);

    // Each matrix element is accumulated from exactly one column pass and
    // mirrored afterwards, so H is symmetric by shared value, not by luck.
    for (Index i = 0; i < n_states; ++i) {
        const OrbitalSet state = basis.state_at(i);
        const auto occ = state.indices();
        for (std::size_t ri = 0; ri < occ.size(); ++ri) {
            for (std::size_t si = ri + 1; si < occ.size(); ++si) {
                const int r = occ[ri];
                const int s = occ[si];
                // orbitals available after annihilating r and s
                const std::uint64_t holes = ~(state.mask & ~((1ull << r) | (1ull << s)));
                std::vector<int> empty;
                empty.reserve(static_cast<std::size_t>(m - basis.particles() + 2));
                for (int x = 0; x < m; ++x) {
                    if ((holes >> x) & 1ull) empty.push_back(x);
                }
                for (std::size_t pi = 0; pi < empty.size(); ++pi) {
                    for (std::size_t qi = pi + 1; qi < empty.size(); ++qi) {
                        const int p = empty[pi];
                        const int q = empty[qi];
                        const auto res = apply_pair_operator(state, p, q, r, s, m);
                        if (!res) continue;
                        const Index f = basis.index_of(res->state);
                        if (f < i) continue; // filled from column f's pass
                        h.mat(f, i) += res->sign * amplitudes(p, q, r, s);
                    }
                }
            }
        }
        double e0 = 0.0;
        for (int x : occ) e0 += spectrum.eps(x);
        h.mat(i, i) += e0;
    }

    for (Index r = 0; r < n_states; ++r) {
        for (Index c = r + 1; c < n_states; ++c) h.mat(r, c) = h.mat(c, r);
    }
    return h;
}

double delta_e_squared_theory(const ModelConfig& config) {
    config.validate();
    const double n = config.n;
    const double m = config.m;
    return 0.25 * config.v0 * config.v0 * n * (n - 1.0) * (m - n) * (m - n + 3.0);
}

CouplingStats direct_coupling_stats(const HamiltonianMatrix& h, Index i, int bins,
                                    double denom_floor_factor) {
    const Index n_states = h.mat.rows();
    if (i < 0 || i >= n_states) throw IndexOutOfRange("direct_coupling_stats: bad state index");
    if (bins < 1) throw InvalidDimensions("direct_coupling_stats: need bins >= 1");

    CouplingStats st;
    std::vector<double> energies;
    std::vector<double> strengths;
    const double floor = denom_floor_factor * h.config.d0;
    double shift = 0.0;
    bool shift_ok = true;
    for (Index f = 0; f < n_states; ++f) {
        if (f == i) continue;
        const double v = h.mat(i, f);
        if (v == 0.0) continue;
        st.sum_sq += v * v;
        energies.push_back(h.mat(f, f));
        strengths.push_back(v * v);
        const double denom = h.mat(i, i) - h.mat(f, f);
        if (std::abs(denom) < floor) {
            shift_ok = false;
        } else {
            shift += v * v / denom;
        }
    }
    st.coupled_count = energies.size();
    if (shift_ok && !energies.empty()) st.delta_i = shift;

    if (energies.empty()) return st; // v0 = 0: everything stays zero/empty

    const double e_min = *std::min_element(energies.begin(), energies.end());
    const double e_max = *std::max_element(energies.begin(), energies.end());
    const double pad = std::max(1e-12, 1e-9 * (std::abs(e_min) + std::abs(e_max)));
    const double lo = e_min - pad;
    const double width = std::max((e_max + pad) - lo, 1e-12) / bins;

    st.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) st.bin_edges[static_cast<std::size_t>(b)] = lo + width * b;
    std::vector<double> count(static_cast<std::size_t>(bins), 0.0);
    std::vector<double> vsq(static_cast<std::size_t>(bins), 0.0);
    for (std::size_t k = 0; k < energies.size(); ++k) {
        int b = static_cast<int>((energies[k] - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        count[static_cast<std::size_t>(b)] += 1.0;
        vsq[static_cast<std::size_t>(b)] += strengths[k];
    }
    st.rho_f.resize(static_cast<std::size_t>(bins));
    st.mean_v_sq.resize(static_cast<std::size_t>(bins));
    st.gamma_of_e.resize(static_cast<std::size_t>(bins));
    constexpr double two_pi = 6.28318530717958648;
    for (int b = 0; b < bins; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        st.rho_f[ub] = count[ub] / width;
        st.mean_v_sq[ub] = count[ub] > 0 ? vsq[ub] / count[ub] : 0.0;
        st.gamma_of_e[ub] = two_pi * st.mean_v_sq[ub] * st.rho_f[ub];
    }
    const double ei = h.mat(i, i);
    int bi = static_cast<int>((ei - lo) / width);
    bi = std::clamp(bi, 0, bins - 1);
    st.gamma_at_ei = st.gamma_of_e[static_cast<std::size_t>(bi)];
    return st;
}

void write_hamiltonian_text(const HamiltonianMatrix& h, std::ostream& os) {
    const Index n_states = h.mat.rows();
    os << "# tbri hamiltonian v1\n";
    os << "# n m v0 d0 seed N\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", h.config.v0);
    os << h.config.n << ' ' << h.config.m << ' ' << buf << ' ';
    std::snprintf(buf, sizeof buf, "%.17g", h.config.d0);
    os << buf << ' ' << h.config.seed << ' ' << n_states << '\n';
    for (Index r = 0; r < n_states; ++r) {
        for (Index c = 0; c < n_states; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", h.mat(r, c));
            os << buf << (c + 1 == n_states ? '\n' : ' ');
        }
    }
}

HamiltonianMatrix read_hamiltonian_text(std::istream& is, const FockBasis& basis) {
    std::string line;
    std::getline(is, line);
    if (line != "# tbri hamiltonian v1") throw Error("read_hamiltonian_text: bad magic");
    std::getline(is, line); // column comment
    HamiltonianMatrix h;
    h.basis = &basis;
    Index n_states = 0;
    is >> h.config.n >> h.config.m >> h.config.v0 >> h.config.d0 >> h.config.seed >> n_states;
    if (h.config.n != basis.particles() || h.config.m != basis.orbitals() || n_states != basis.size()) {
        throw DimensionMismatch("read_hamiltonian_text: header does not match basis");
    }
    h.mat.resize(n_states, n_states);
    for (Index r = 0; r < n_states; ++r) {
        for (Index c = 0; c < n_states; ++c) {
            if (!(is >> h.mat(r, c))) throw Error("read_hamiltonian_text: truncated matrix");
        }
    }
    return h;
}

} // namespace tbri
