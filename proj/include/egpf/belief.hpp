#pragma once

#include <cstdint>
#include <vector>

#include "egpf/core.hpp"
#include "egpf/info.hpp"

namespace egpf {

struct InteractionRecord {
    int action = 0;
    int response = 0;
    std::int64_t time = 0;
};

// Ordered engagement log; timestamps must be strictly increasing.
struct InteractionHistory {
    std::vector<InteractionRecord> records;

    void append(int action, int response, std::int64_t time);
    std::size_t size() const { return records.size(); }
};

// Posterior ∝ prior × likelihood, renormalized. `likelihoods[k]` is
// P(observation | theta_k). Throws Error("zero evidence") when every
// product vanishes.
Belief bayes_update(const Belief& mu, const std::vector<double>& likelihoods);

// Renyi entropy H_alpha in bits; alpha = 1 is the Shannon limit.
double entropy(const Belief& mu, double alpha = 1.0);

// Renyi divergence D_alpha(p || q) in bits; alpha = 1 is KL. Throws
// Error("absolute continuity violated") when q has a zero where p > 0
// and alpha >= 1.
double divergence(const std::vector<double>& p, const std::vector<double>& q,
                  double alpha = 1.0);

// Total variation distance ||p - q||_1 / 2.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

struct DriftReport {
    double statistic = 0.0; // bits
    double threshold = 0.0;
    bool triggered = false;
    int window = 0;
};

// Compares the last `window` observed responses against the belief-mixture
// channel prediction. Empirical histograms are conditioned per action,
// Laplace-smoothed by 1/window, and the per-action divergences are pooled
// weighted by each action's frequency in the window.
DriftReport drift_detect(const InteractionHistory& history, const TypeChannels& model,
                         const Belief& mu, int window,
                         double tau_drift = defaults::kDriftThreshold,
                         double alpha = 1.0);

} // namespace egpf
