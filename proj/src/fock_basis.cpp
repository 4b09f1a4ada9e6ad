#include "tbri/fock_basis.hpp"

#include <algorithm>
#include <string>

#include "tbri/errors.hpp"

namespace tbri {

std::uint64_t binomial(int m, int n) {
    if (n < 0 || n > m) return 0;
    n = std::min(n, m - n);
    std::uint64_t c = 1;
    for (int k = 1; k <= n; ++k) {
        c = c * static_cast<std::uint64_t>(m - n + k) / static_cast<std::uint64_t>(k);
    }
    return c;
}

Index FockBasis::index_of(OrbitalSet s) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), s);
    if (it == states_.end() || !(*it == s)) {
        throw IndexOutOfRange("state not in basis (mask=" + std::to_string(s.mask) + ")");
    }
    return static_cast<Index>(it - states_.begin());
}

FockBasis enumerate_basis(int n, int m, std::uint64_t cap) {
    if (n < 0 || m < 0 || n > m || m > 63) {
        throw InvalidDimensions("enumerate_basis: need 0 <= n <= m <= 63, got n=" +
                                std::to_string(n) + " m=" + std::to_string(m));
    }
    const std::uint64_t count = binomial(m, n);
    if (count > cap) {
        throw BasisTooLarge("enumerate_basis: N=" + std::to_string(count) +
                            " exceeds cap " + std::to_string(cap));
    }
    std::vector<OrbitalSet> states;
    states.reserve(count);
    if (n == 0) {
        states.push_back(OrbitalSet{0});
    } else {
        // Gosper's hack walks n-bit masks in increasing numeric order,
        // which is exactly the lexicographic order the basis contract wants.
        std::uint64_t v = (1ull << n) - 1;
        const std::uint64_t limit = 1ull << m;
        while (v < limit) {
            states.push_back(OrbitalSet{v});
            const std::uint64_t t = v | (v - 1);
            v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
        }
    }
    return FockBasis(n, m, std::move(states));
}

namespace {

// Parity of the number of occupied orbitals below s: the sign picked up by
// moving a_s (or a+_s) past the canonical creation string.
inline int phase_below(std::uint64_t mask, int s) {
    const std::uint64_t below = mask & ((1ull << s) - 1);
    return (std::popcount(below) & 1) ? -1 : 1;
}

} // namespace

std::optional<PairOpResult> apply_pair_operator(OrbitalSet state, int p, int q, int r, int s, int m) {
    if (p < 0 || q < 0 || r < 0 || s < 0 || p >= m || q >= m || r >= m || s >= m) {
        throw IndexOutOfRange("apply_pair_operator: orbital index out of [0, m)");
    }
    if (p == q || r == s) {
        throw IndexOutOfRange("apply_pair_operator: need p != q and r != s");
    }
    std::uint64_t mask = state.mask;
    int sign = 1;
    // a+_p a+_q a_s a_r: rightmost first
    for (int x : {r, s}) {
        if (!((mask >> x) & 1ull)) return std::nullopt;
        sign *= phase_below(mask, x);
        mask &= ~(1ull << x);
    }
    for (int x : {q, p}) {
        if ((mask >> x) & 1ull) return std::nullopt;
        sign *= phase_below(mask, x);
        mask |= 1ull << x;
    }
    return PairOpResult{OrbitalSet{mask}, sign};
}

int orbital_distance(OrbitalSet a, OrbitalSet b) {
    return std::popcount(a.mask & ~b.mask);
}

} // namespace tbri
