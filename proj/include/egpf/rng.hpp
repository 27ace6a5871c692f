#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "egpf/error.hpp"

namespace egpf {

// Deterministic random source used everywhere randomness is needed.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard, and all derived draws (uniform doubles, categorical samples)
// are built here from raw 64-bit words. No std::*_distribution is used,
// so identical seeds produce identical streams on every platform.
class StableRng {
public:
    explicit StableRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard exponential via inverse CDF; uniform() < 1 so the log is finite.
    double exponential() { return -std::log(1.0 - uniform()); }

    // Index draw by CDF inversion; the final bucket absorbs rounding slack.
    int categorical(std::span<const double> probs) {
        if (probs.empty()) throw Error("categorical: empty distribution");
        const double u = uniform();
        double cum = 0.0;
        for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
            cum += probs[i];
            if (u < cum) return static_cast<int>(i);
        }
        return static_cast<int>(probs.size()) - 1;
    }

    int categorical(const std::vector<double>& probs) {
        return categorical(std::span<const double>(probs));
    }

    // Decorrelated per-stream seed (SplitMix64 finalizer over seed + stream id).
    // Replication r of a run seeded with s uses derive_stream(s, r).
    static std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace egpf
