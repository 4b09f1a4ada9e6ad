#pragma once

#include <cstdint>
#include <random>

namespace tbri {

// SplitMix64 finalizer; used to decorrelate derived seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Per-realization seed: independent stream keyed by (base seed, task index).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base ^ splitmix64(index + 1));
}

// Deterministic standard-normal sampler. std::normal_distribution is
// implementation-defined, so we roll Box-Muller over the fully specified
// mt19937_64 stream to keep realizations reproducible across toolchains.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    // in (0, 1]: log() never sees zero
    double uniform01() {
        const std::uint64_t x = eng_();
        return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
    }

    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace tbri
