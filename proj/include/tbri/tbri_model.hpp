#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "tbri/fock_basis.hpp"
#include "tbri/types.hpp"

namespace tbri {

enum class SpectrumKind { EquallySpaced, Jittered };

struct ModelConfig {
    int n = 0;                 // particles
    int m = 0;                 // orbitals
    double v0 = 0.0;           // interaction strength (std dev of amplitudes)
    double d0 = 1.0;           // mean single-particle level spacing
    std::uint64_t seed = 0;
    SpectrumKind spectrum = SpectrumKind::EquallySpaced;
    double jitter = 0.0;       // uniform jitter amplitude in units of d0
    std::uint64_t basis_cap = 1'000'000;

    void validate() const;
};

struct SingleParticleSpectrum {
    Vector eps; // ascending, length m
};

// Antisymmetrized two-body amplitudes v_{pq,rs}, stored once per unordered
// pair-of-pairs ((p<q) <= (r<s) in pair-rank order), each drawn i.i.d.
// N(0, v0^2). Symmetric by construction: v(pq,rs) == v(rs,pq).
class TwoBodyAmplitudes {
public:
    TwoBodyAmplitudes(int m, std::vector<double> values)
        : m_(m), npairs_(m * (m - 1) / 2), values_(std::move(values)) {}

    int orbitals() const { return m_; }
    int pair_count() const { return npairs_; }

    // rank of the unordered pair {p, q} with p < q, lexicographic
    int pair_rank(int p, int q) const {
        if (p > q) std::swap(p, q);
        return p * (2 * m_ - p - 1) / 2 + (q - p - 1);
    }

    double operator()(int p, int q, int r, int s) const {
        return at(pair_rank(p, q), pair_rank(r, s));
    }

    double at(int a, int b) const { return values_[tri_index(a, b)]; }
    double& at(int a, int b) { return values_[tri_index(a, b)]; }

    std::size_t value_count() const { return values_.size(); }

private:
    std::size_t tri_index(int a, int b) const {
        if (a > b) std::swap(a, b);
        return static_cast<std::size_t>(a) * (2 * npairs_ - a - 1) / 2 + static_cast<std::size_t>(b);
    }

    int m_;
    int npairs_;
    std::vector<double> values_;
};

struct HamiltonianMatrix {
    Matrix mat;                    // dense symmetric N x N
    const FockBasis* basis = nullptr;
    ModelConfig config;
};

// Deterministic function of config.seed: single-particle energies first,
// then all two-body amplitudes in pair-rank order.
std::pair<SingleParticleSpectrum, TwoBodyAmplitudes> sample_model(const ModelConfig& config);

// H = H0 + V with V = sum_{p<q, r<s} v_{pq,rs} a+_p a+_q a_s a_r.
// One-particle moves pick up spectator sums; H_{if} = 0 beyond distance 2.
HamiltonianMatrix build_hamiltonian(const FockBasis& basis,
                                    const SingleParticleSpectrum& spectrum,
                                    const TwoBodyAmplitudes& amplitudes,
                                    const ModelConfig& config);

// 1/4 V0^2 n (n-1) (m-n) (m-n+3): the expected off-diagonal strength
// sum_{f != i} H_{if}^2 for any basis state of the model.
double delta_e_squared_theory(const ModelConfig& config);

struct CouplingStats {
    double sum_sq = 0.0;                  // sum_{f != i} H_{if}^2
    std::vector<double> bin_edges;        // histogram over H_{ff} of coupled states
    std::vector<double> rho_f;            // density of directly coupled states
    std::vector<double> mean_v_sq;        // mean H_{if}^2 per bin
    std::vector<double> gamma_of_e;       // 2 pi * mean_v_sq * rho_f per bin
    double gamma_at_ei = 0.0;             // golden-rule width evaluated at E = H_{ii}
    std::optional<double> delta_i;        // second-order shift; empty when a
                                          // denominator falls below the floor
    std::size_t coupled_count = 0;
};

// Golden-rule statistics of the states directly coupled to basis state i.
// v0 = 0 yields sum_sq = 0 and an empty histogram rather than an error.
CouplingStats direct_coupling_stats(const HamiltonianMatrix& h, Index i, int bins,
                                    double denom_floor_factor = 1e-9);

// Text dump (self-describing header, row-major) for external verification.
void write_hamiltonian_text(const HamiltonianMatrix& h, std::ostream& os);
HamiltonianMatrix read_hamiltonian_text(std::istream& is, const FockBasis& basis);

} // namespace tbri
