#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "egpf/belief.hpp"
#include "egpf/core.hpp"
#include "egpf/game.hpp"
#include "egpf/info.hpp"
#include "egpf/rng.hpp"

namespace egpf {

// Complete description of one simulated engagement run.
struct ScenarioConfig {
    GameSpec game;
    // Hidden type of the simulated physician; kSampleTrueTypeFromPrior draws
    // it from the prior independently per replication.
    int true_type_index = 0;
    int horizon = 50;
    double tau_explore = 1.0; // entropy threshold (bits) for the exploration branch
    double tau_drift = defaults::kDriftThreshold;
    int drift_window = defaults::kDriftWindow;
    bool recalibrate_on_drift = true;
    double divergence_alpha = 1.0; // drift detector order
    std::uint64_t seed = defaults::kDefaultSeed;
    int replications = 1;
    // Scripted environment responses for worked-example replays; sampling
    // resumes once the script is exhausted.
    std::vector<int> forced_responses;
    std::string name = "scenario";

    static constexpr int kSampleTrueTypeFromPrior = -1;
};

ValidationReport validate_scenario(const ScenarioConfig& config);

enum class Policy { kEgpf, kGreedy, kRandom };
std::string policy_name(Policy p);

// Exploration mixing weight min(1, sqrt(K*ln(t+1)/t)); the +1 shift keeps
// exploration alive at t=1 while preserving the decay rate.
double epsilon_schedule(int t, std::size_t num_types);

enum class EvidenceDensity { kLow, kMedium, kHigh };
std::string evidence_density_name(EvidenceDensity d);

// Deterministic content planner standing in for the generative layer.
struct ContentPlan {
    int action = 0;
    EvidenceDensity evidence_density = EvidenceDensity::kMedium;
    int length_words = 200;
    std::string tone = "balanced";
    bool hedging = false;           // set when belief entropy exceeds 1 bit
    bool fair_balance = true;       // compliance flags
    bool indication_specific = true;
};

// Builds the plan from the posterior-mean evidence sensitivity (tercile ->
// density), the channel capacity estimate (length), and belief entropy
// (hedging). Deterministic.
ContentPlan content_plan(int action, const Belief& mu, const GameSpec& game,
                         double capacity_bits);

// Flags-only stand-in for the compliance filter.
bool compliance_filter(const ContentPlan& plan);

struct RewardWeights {
    double relevance = 1.0;
    double accuracy = 1.0;
    double compliance = 1.0;
    double bias = 1.0;      // enters negatively
    double alignment = 1.0;
};

// Five-component content reward; the alignment term is 1 iff the plan
// executes the equilibrium action. Component scorers are deterministic
// heuristics documented in the README.
double reward_score(const ContentPlan& plan, const TypeVector& theta,
                    int equilibrium_action, const RewardWeights& w);

// Samples a physician response from the QRE model of the hidden type.
int simulate_response(const GameSpec& game, int action, int true_type, StableRng& rng);

// Mutable state of one engagement loop.
struct LoopState {
    Policy policy = Policy::kEgpf;
    int true_type = 0;
    Belief mu;
    InteractionHistory history;
    int t = 0; // completed steps
    double cumulative_regret = 0.0;
    int steps_to_90 = -1; // first step reaching 90% confidence on the true type
    long drift_triggers = 0;
    long recalibrations = 0;
    StableRng rng;

    // Per-scenario caches.
    TypeChannels channels;
    std::vector<double> type_capacity_bits;
    double optimal_payoff = 0.0; // max_a u_P(a, BR(a, theta*), theta*)

    LoopState() : rng(0) {}
};

// Everything recorded about one loop iteration.
struct StepRecord {
    int t = 0;
    int action = 0;
    int response = 0;
    bool explored = false;
    double epsilon = 0.0;
    double entropy_bits = 0.0;        // H(mu) entering the step
    double predicted_info_gain = 0.0; // IG(a | mu) of the chosen action, bits
    double realized_log_gain = 0.0;   // log2 mu'(theta*) - log2 mu(theta*)
    double instantaneous_regret = 0.0;
    double cumulative_regret = 0.0;
    double log_loss_true_type = 0.0;  // -log2 mu_t(theta*) after the step
    double drift_statistic = 0.0;
    bool drift_triggered = false;
    bool recalibrated = false;
    ContentPlan plan;
    bool compliance_ok = true;
    Belief posterior;
};

// Initializes loop state for one replication (independent seeded stream;
// the hidden type is drawn from the prior when configured to).
LoopState init_loop(const ScenarioConfig& config, Policy policy, int replication);

// One iteration of the engagement loop: action selection (exploration
// scoring above the entropy threshold, commitment solving below), content
// planning, response, Bayes update, drift check, metrics.
StepRecord egpf_step(LoopState& state, const ScenarioConfig& config);

struct CurveSummary {
    std::vector<double> mean;
    std::vector<double> half_width; // 95% CI half-width
};

struct PolicyMetrics {
    Policy policy = Policy::kEgpf;
    CurveSummary cumulative_regret; // indexed by step
    CurveSummary log_loss;          // -log2 mu_t(theta*)
    CurveSummary log_loss_step;     // paired per-step change in log loss
    std::vector<double> steps_to_90_mean_by_type; // censored at horizon
    std::vector<int> replications_by_type;
    std::vector<int> converged_by_type;
    double exploration_regret_mean = 0.0;  // regret incurred on exploration steps
    double exploitation_regret_mean = 0.0;
    double mean_realized_log_gain = 0.0;
    double mean_predicted_info_gain = 0.0;
    double gain_gap_se = 0.0; // SE of mean(realized - predicted)
    long drift_triggers = 0;
    long recalibrations = 0;
};

struct RunMetrics {
    std::vector<PolicyMetrics> policies;
    std::vector<StepRecord> trace; // replication 0 of the primary policy
    const PolicyMetrics& for_policy(Policy p) const;
};

// Runs the scenario for `replications` independent streams under the
// primary policy plus the random and greedy baselines. Aggregation is an
// ordered reduction over replication index, so parallel and serial
// execution produce identical results. `workers` = 0 picks the hardware
// concurrency; 1 forces serial execution.
RunMetrics run_experiment(const ScenarioConfig& config, int replications,
                          unsigned workers = 0);

} // namespace egpf
