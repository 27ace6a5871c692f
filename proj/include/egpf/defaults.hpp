#pragma once

#include <cstdint>

namespace egpf::defaults {

// Engagement-model defaults. These are the tuned operating points used by
// scenario files unless overridden.
inline constexpr double kRationality = 3.0;       // QRE tau
inline constexpr int kNumTypes = 5;               // default K for sampled type sets
inline constexpr int kDriftWindow = 30;           // sliding window W
inline constexpr double kDriftThreshold = 0.15;   // tau_drift, bits
inline constexpr double kInfoGainWeight = 0.3;    // omega in the pharma utility
inline constexpr double kRenyiAlpha = 2.0;        // alternate drift detector order

// Numeric tolerances shared across modules.
inline constexpr double kSimplexTol = 1e-9;       // distribution sum tolerance
inline constexpr double kQreSumTol = 1e-12;       // softmax normalization check
inline constexpr double kCapacityTol = 1e-9;      // Blahut-Arimoto bound gap
inline constexpr int kCapacityMaxIters = 10000;

// Type-space sampling box. The four influence weights live on the simplex;
// the remaining coordinates are sampled uniformly from these ranges.
inline constexpr double kBetaMax = 5.0;
inline constexpr double kKappaMax = 5.0;
inline constexpr double kDeltaMin = 0.1;
inline constexpr int kSampleRetryBudget = 10000;

inline constexpr std::uint64_t kDefaultSeed = 20240613ULL;

} // namespace egpf::defaults
