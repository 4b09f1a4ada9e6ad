#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "tbri/types.hpp"

namespace tbri {

// Occupation bitmask over m <= 63 orbitals. Canonical creation-operator
// order is ascending orbital index: |f> = a+_{f1} a+_{f2} ... a+_{fn} |0>
// with f1 < f2 < ... < fn; every fermionic sign below follows from it.
struct OrbitalSet {
    std::uint64_t mask = 0;

    int count() const { return std::popcount(mask); }
    bool occupied(int s) const { return (mask >> s) & 1ull; }

    std::vector<int> indices() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(count()));
        std::uint64_t w = mask;
        while (w) {
            out.push_back(std::countr_zero(w));
            w &= w - 1;
        }
        return out;
    }

    static OrbitalSet from_indices(std::initializer_list<int> idx) {
        OrbitalSet s;
        for (int i : idx) s.mask |= 1ull << i;
        return s;
    }

    friend bool operator==(OrbitalSet a, OrbitalSet b) { return a.mask == b.mask; }
    friend auto operator<=>(OrbitalSet a, OrbitalSet b) { return a.mask <=> b.mask; }
};

struct PairOpResult {
    OrbitalSet state;
    int sign; // +1 or -1
};

// The n-fermion, m-orbital Slater-determinant basis in strictly increasing
// lexicographic (bitmask) order. Immutable after construction.
class FockBasis {
public:
    FockBasis(int n, int m, std::vector<OrbitalSet> states)
        : n_(n), m_(m), states_(std::move(states)) {}

    int particles() const { return n_; }
    int orbitals() const { return m_; }
    Index size() const { return static_cast<Index>(states_.size()); }

    const OrbitalSet& state_at(Index i) const { return states_[static_cast<std::size_t>(i)]; }
    const std::vector<OrbitalSet>& states() const { return states_; }

    // Position of s in the basis; throws IndexOutOfRange if absent.
    Index index_of(OrbitalSet s) const;

private:
    int n_;
    int m_;
    std::vector<OrbitalSet> states_;
};

std::uint64_t binomial(int m, int n);

// All C(m, n) determinants, lexicographic by mask. Refuses N > cap.
FockBasis enumerate_basis(int n, int m, std::uint64_t cap = 1'000'000);

// a+_p a+_q a_s a_r |state>  (rightmost operator acts first).
// Empty optional when an annihilated orbital is vacant or a created orbital
// is already filled; otherwise the resulting determinant and its sign.
std::optional<PairOpResult> apply_pair_operator(OrbitalSet state, int p, int q, int r, int s, int m);

// Number of orbitals occupied in a but not in b. Symmetric; two-body matrix
// elements vanish whenever this exceeds 2.
int orbital_distance(OrbitalSet a, OrbitalSet b);

} // namespace tbri
