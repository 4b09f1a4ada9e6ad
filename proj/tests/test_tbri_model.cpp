#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracle_helpers.hpp"
#include "tbri/errors.hpp"
#include "tbri/rng.hpp"
#include "tbri/tbri_model.hpp"

using namespace tbri;

namespace {

ModelConfig cfg(int n, int m, double v0, std::uint64_t seed) {
    ModelConfig c;
    c.n = n;
    c.m = m;
    c.v0 = v0;
    c.seed = seed;
    return c;
}

HamiltonianMatrix build(const ModelConfig& c, const FockBasis& basis) {
    const auto [sp, amps] = sample_model(c);
    return build_hamiltonian(basis, sp, amps, c);
}

} // namespace

TEST_CASE("v0 = 0 leaves the diagonal H0") {
    const ModelConfig c = cfg(3, 6, 0.0, 1);
    const FockBasis basis = enumerate_basis(3, 6);
    const HamiltonianMatrix h = build(c, basis);
    for (Index i = 0; i < basis.size(); ++i) {
        for (Index f = 0; f < basis.size(); ++f) {
            if (i == f) continue;
            CHECK(h.mat(i, f) == 0.0);
        }
    }
    // diagonal = sum of occupied single-particle energies
    const auto [sp, amps] = sample_model(c);
    for (Index i = 0; i < basis.size(); ++i) {
        double e0 = 0;
        for (int x : basis.state_at(i).indices()) e0 += sp.eps(x);
        CHECK(h.mat(i, i) == doctest::Approx(e0).epsilon(1e-15));
    }
}

TEST_CASE("one particle feels no two-body interaction") {
    const ModelConfig c = cfg(1, 6, 1.0, 3);
    const FockBasis basis = enumerate_basis(1, 6);
    const HamiltonianMatrix h = build(c, basis);
    const auto [sp, amps] = sample_model(c);
    Matrix h0 = Matrix::Zero(6, 6);
    for (Index i = 0; i < 6; ++i) h0(i, i) = sp.eps(basis.state_at(i).indices()[0]);
    CHECK((h.mat - h0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("same seed reproduces the matrix bit for bit") {
    const ModelConfig c = cfg(3, 8, 0.7, 42);
    const FockBasis basis = enumerate_basis(3, 8);
    const HamiltonianMatrix a = build(c, basis);
    const HamiltonianMatrix b = build(c, basis);
    CHECK((a.mat.array() == b.mat.array()).all());
    const HamiltonianMatrix other = build(cfg(3, 8, 0.7, 43), basis);
    CHECK_FALSE((a.mat.array() == other.mat.array()).all());
}

TEST_CASE("exact storage symmetry") {
    const FockBasis basis = enumerate_basis(3, 8);
    const HamiltonianMatrix h = build(cfg(3, 8, 0.5, 5), basis);
    CHECK((h.mat.array() == h.mat.transpose().array()).all());
}

TEST_CASE("a distance-2 element is a single signed amplitude") {
    const ModelConfig c = cfg(2, 4, 1.0, 9);
    const FockBasis basis = enumerate_basis(2, 4);
    const auto [sp, amps] = sample_model(c);
    const HamiltonianMatrix h = build_hamiltonian(basis, sp, amps, c);
    const Index i01 = basis.index_of(OrbitalSet::from_indices({0, 1}));
    const Index i23 = basis.index_of(OrbitalSet::from_indices({2, 3}));
    // <{2,3}| V |{0,1}> = v_{(2,3),(0,1)} with sign +1 (oracle-checked)
    const auto sym = oracle::pair_operator({0, 1}, 2, 3, 0, 1);
    REQUIRE(sym.has_value());
    CHECK(sym->sign == 1);
    CHECK(h.mat(i23, i01) == doctest::Approx(amps(2, 3, 0, 1)).epsilon(1e-15));
}

TEST_CASE("selection rule: no coupling beyond distance 2") {
    const FockBasis basis = enumerate_basis(3, 8);
    const HamiltonianMatrix h = build(cfg(3, 8, 1.0, 17), basis);
    for (Index i = 0; i < basis.size(); ++i) {
        for (Index f = 0; f < basis.size(); ++f) {
            if (orbital_distance(basis.state_at(i), basis.state_at(f)) > 2) {
                CHECK(h.mat(i, f) == 0.0);
            }
        }
    }
}

TEST_CASE("amplitude sampler statistics") {
    // 10^4 draws of one fixed amplitude across derived seeds
    const double v0 = 0.8;
    const int draws = 10000;
    double sum = 0, sum_sq = 0;
    for (int k = 0; k < draws; ++k) {
        ModelConfig c = cfg(2, 4, v0, derive_seed(123, static_cast<std::uint64_t>(k)));
        const auto [sp, amps] = sample_model(c);
        const double v = amps(0, 1, 2, 3);
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / draws;
    const double var = sum_sq / draws - mean * mean;
    // chi-squared standard error of a variance estimate: v0^2 sqrt(2/n)
    const double se = v0 * v0 * std::sqrt(2.0 / draws);
    CHECK(std::abs(var - v0 * v0) < 3.0 * se);
}

TEST_CASE("theory variance formula") {
    CHECK(delta_e_squared_theory(cfg(2, 4, 1.0, 0)) == doctest::Approx(5.0));
    CHECK(delta_e_squared_theory(cfg(6, 12, 1.0, 0)) == doctest::Approx(405.0));
    CHECK(delta_e_squared_theory(cfg(1, 6, 2.0, 0)) == 0.0);  // single particle
    CHECK(delta_e_squared_theory(cfg(6, 6, 2.0, 0)) == 0.0);  // filled shell
}

TEST_CASE("ensemble oracle for the off-diagonal strength sum") {
    // mean over realizations of sum_{f != i} H_{if}^2 must reproduce
    // 1/4 v0^2 n(n-1)(m-n)(m-n+3) for every i
    const double v0 = 0.3;
    const ModelConfig base = cfg(3, 8, v0, 2024);
    const FockBasis basis = enumerate_basis(3, 8);
    const double theory = delta_e_squared_theory(base);
    CHECK(theory == doctest::Approx(0.25 * v0 * v0 * 3 * 2 * 5 * 8));

    const int reps = 300;
    double acc = 0;
    for (int k = 0; k < reps; ++k) {
        ModelConfig c = base;
        c.seed = derive_seed(base.seed, static_cast<std::uint64_t>(k));
        const HamiltonianMatrix h = build(c, basis);
        const Index i = basis.size() / 2;
        acc += h.mat.row(i).squaredNorm() - h.mat(i, i) * h.mat(i, i);
    }
    const double mean = acc / reps;
    CHECK(mean == doctest::Approx(theory).epsilon(0.05));
}

TEST_CASE("strength sum scales as v0 squared") {
    const FockBasis basis = enumerate_basis(3, 8);
    const int reps = 120;
    double acc1 = 0, acc2 = 0;
    for (int k = 0; k < reps; ++k) {
        const std::uint64_t seed = derive_seed(77, static_cast<std::uint64_t>(k));
        const HamiltonianMatrix h1 = build(cfg(3, 8, 0.2, seed), basis);
        const HamiltonianMatrix h2 = build(cfg(3, 8, 0.4, seed), basis);
        const Index i = 10;
        acc1 += h1.mat.row(i).squaredNorm() - h1.mat(i, i) * h1.mat(i, i);
        acc2 += h2.mat.row(i).squaredNorm() - h2.mat(i, i) * h2.mat(i, i);
    }
    CHECK(acc2 / acc1 == doctest::Approx(4.0).epsilon(1e-9)); // same draws, scaled
}

TEST_CASE("trace depends only on diagonal-relevant amplitudes") {
    const ModelConfig c = cfg(3, 8, 0.6, 31);
    const FockBasis basis = enumerate_basis(3, 8);
    auto [sp, amps] = sample_model(c);
    const HamiltonianMatrix h = build_hamiltonian(basis, sp, amps, c);

    // independent combinatorial evaluation of the trace
    double expected = 0;
    for (Index i = 0; i < basis.size(); ++i) {
        const auto occ = basis.state_at(i).indices();
        for (int x : occ) expected += sp.eps(x);
        for (std::size_t a = 0; a < occ.size(); ++a) {
            for (std::size_t b = a + 1; b < occ.size(); ++b) {
                expected += amps(occ[a], occ[b], occ[a], occ[b]);
            }
        }
    }
    CHECK(h.mat.trace() == doctest::Approx(expected).epsilon(1e-12));

    // redraw every off-diagonal amplitude; the trace must not move
    GaussianSampler redraw(999);
    for (int a = 0; a < amps.pair_count(); ++a) {
        for (int b = a + 1; b < amps.pair_count(); ++b) {
            amps.at(a, b) = 0.6 * redraw.next();
        }
    }
    const HamiltonianMatrix h2 = build_hamiltonian(basis, sp, amps, c);
    CHECK(h2.mat.trace() == h.mat.trace());
}

TEST_CASE("direct coupling statistics") {
    SUBCASE("v0 = 0 degenerates gracefully") {
        const FockBasis basis = enumerate_basis(3, 6);
        const HamiltonianMatrix h = build(cfg(3, 6, 0.0, 4), basis);
        const CouplingStats st = direct_coupling_stats(h, 2, 10);
        CHECK(st.sum_sq == 0.0);
        CHECK(st.coupled_count == 0);
        CHECK(st.gamma_at_ei == 0.0);
        CHECK_FALSE(st.delta_i.has_value());
    }
    SUBCASE("golden-rule width is positive and sums match") {
        const FockBasis basis = enumerate_basis(3, 8);
        const HamiltonianMatrix h = build(cfg(3, 8, 0.4, 8), basis);
        const Index i = basis.size() / 2;
        const CouplingStats st = direct_coupling_stats(h, i, 12);
        CHECK(st.gamma_at_ei > 0.0);
        const double direct = h.mat.row(i).squaredNorm() - h.mat(i, i) * h.mat(i, i);
        CHECK(st.sum_sq == doctest::Approx(direct).epsilon(1e-12));
        // gamma bins consistent with their definition
        for (std::size_t b = 0; b < st.gamma_of_e.size(); ++b) {
            CHECK(st.gamma_of_e[b] ==
                  doctest::Approx(2 * 3.14159265358979323846 * st.mean_v_sq[b] * st.rho_f[b]));
        }
    }
    SUBCASE("degenerate unperturbed energies suppress the shift estimate") {
        // equal spacing makes e.g. {0,3} and {1,2} exactly degenerate
        const FockBasis basis = enumerate_basis(2, 4);
        ModelConfig c = cfg(2, 4, 0.0, 5);
        const auto [sp, amps] = sample_model(c);
        const HamiltonianMatrix h = build_hamiltonian(basis, sp, amps, c);
        // force one off-diagonal coupling between the degenerate pair
        const Index a = basis.index_of(OrbitalSet::from_indices({0, 3}));
        const Index b = basis.index_of(OrbitalSet::from_indices({1, 2}));
        HamiltonianMatrix hh = h;
        hh.mat(a, b) = hh.mat(b, a) = 0.1;
        const CouplingStats st = direct_coupling_stats(hh, a, 4);
        CHECK(st.sum_sq > 0.0);
        CHECK_FALSE(st.delta_i.has_value());
    }
}

TEST_CASE("hamiltonian text dump round-trips") {
    const FockBasis basis = enumerate_basis(3, 6);
    const HamiltonianMatrix h = build(cfg(3, 6, 0.4, 77), basis);
    std::stringstream ss;
    write_hamiltonian_text(h, ss);
    const HamiltonianMatrix back = read_hamiltonian_text(ss, basis);
    CHECK((h.mat.array() == back.mat.array()).all());
    CHECK(back.config.seed == h.config.seed);
}
