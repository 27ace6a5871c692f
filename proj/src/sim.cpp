#include "egpf/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace egpf {

namespace {

// Separate stream domains so the hidden-type draw, the loop stream and any
// future consumers never overlap.
constexpr std::uint64_t kTypeStreamSalt = 0x7479706573616C74ULL;

int pick_true_type(const ScenarioConfig& config, int replication) {
    if (config.true_type_index != ScenarioConfig::kSampleTrueTypeFromPrior)
        return config.true_type_index;
    StableRng rng(StableRng::derive_stream(config.seed ^ kTypeStreamSalt,
                                           static_cast<std::uint64_t>(replication)));
    return rng.categorical(config.game.prior.weights);
}

std::uint64_t loop_stream(const ScenarioConfig& config, Policy policy, int replication) {
    const auto policy_index = static_cast<std::uint64_t>(policy);
    return StableRng::derive_stream(config.seed,
                                    (policy_index << 32) | static_cast<std::uint64_t>(replication));
}

} // namespace

ValidationReport validate_scenario(const ScenarioConfig& config) {
    ValidationReport report = validate_game(config.game);
    if (config.horizon < 1) report.fail("horizon must be >= 1");
    if (config.tau_explore < 0.0) report.fail("tau_explore must be >= 0");
    if (config.tau_drift < 0.0) report.fail("tau_drift must be >= 0");
    if (config.drift_window < 1) report.fail("drift window must be >= 1");
    if (config.replications < 1) report.fail("replications must be >= 1");
    if (config.true_type_index != ScenarioConfig::kSampleTrueTypeFromPrior &&
        (config.true_type_index < 0 ||
         config.true_type_index >= static_cast<int>(config.game.num_types())))
        report.fail("true_type_index out of range");
    for (int r : config.forced_responses)
        if (r < 0 || r >= static_cast<int>(config.game.num_responses()))
            report.fail("forced response out of range");
    return report;
}

std::string policy_name(Policy p) {
    switch (p) {
        case Policy::kEgpf: return "egpf";
        case Policy::kGreedy: return "greedy";
        case Policy::kRandom: return "random";
    }
    return "unknown";
}

double epsilon_schedule(int t, std::size_t num_types) {
    if (t < 1) throw Error("epsilon_schedule: t must be >= 1");
    const double k = static_cast<double>(num_types);
    return std::min(1.0, std::sqrt(k * std::log(static_cast<double>(t) + 1.0) /
                                   static_cast<double>(t)));
}

std::string evidence_density_name(EvidenceDensity d) {
    switch (d) {
        case EvidenceDensity::kLow: return "low";
        case EvidenceDensity::kMedium: return "medium";
        case EvidenceDensity::kHigh: return "high";
    }
    return "unknown";
}

ContentPlan content_plan(int action, const Belief& mu, const GameSpec& game,
                         double capacity_bits) {
    if (capacity_bits < 0.0) throw Error("content_plan: capacity must be >= 0");
    if (mu.size() != game.num_types())
        throw Error("content_plan: belief length != number of types");

    double mean_evidence = 0.0;
    double min_evidence = 1.0, max_evidence = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
        const double ae = game.type_set.types[k].alpha_e;
        mean_evidence += mu[k] * ae;
        min_evidence = std::min(min_evidence, ae);
        max_evidence = std::max(max_evidence, ae);
    }
    // Tercile position within the type set's evidence-sensitivity range, so
    // "high" is reachable whenever the posterior leans on the most
    // evidence-sensitive archetype present.
    const double span = max_evidence - min_evidence;
    const double position = span > 0.0 ? (mean_evidence - min_evidence) / span : 0.5;

    ContentPlan plan;
    plan.action = action;
    if (position < 1.0 / 3.0)
        plan.evidence_density = EvidenceDensity::kLow;
    else if (position < 2.0 / 3.0)
        plan.evidence_density = EvidenceDensity::kMedium;
    else
        plan.evidence_density = EvidenceDensity::kHigh;
    plan.length_words =
        static_cast<int>(std::lround(200.0 + 1000.0 * std::min(capacity_bits, 1.0)));
    plan.hedging = entropy(mu, 1.0) > 1.0;
    switch (plan.evidence_density) {
        case EvidenceDensity::kLow: plan.tone = "narrative"; break;
        case EvidenceDensity::kMedium: plan.tone = "balanced"; break;
        case EvidenceDensity::kHigh: plan.tone = "data_centric"; break;
    }
    return plan;
}

bool compliance_filter(const ContentPlan& plan) {
    return plan.fair_balance && plan.indication_specific && plan.length_words > 0;
}

double reward_score(const ContentPlan& plan, const TypeVector& theta,
                    int equilibrium_action, const RewardWeights& w) {
    double density_mid = 0.5;
    switch (plan.evidence_density) {
        case EvidenceDensity::kLow: density_mid = 1.0 / 6.0; break;
        case EvidenceDensity::kMedium: density_mid = 0.5; break;
        case EvidenceDensity::kHigh: density_mid = 5.0 / 6.0; break;
    }
    const double relevance = 1.0 - std::abs(density_mid - theta.alpha_e);
    const double accuracy = 1.0; // deterministic planner emits faithful content
    const double compliance = compliance_filter(plan) ? 1.0 : 0.0;
    const double bias = 0.0;
    const double alignment = (plan.action == equilibrium_action) ? 1.0 : 0.0;
    return w.relevance * relevance + w.accuracy * accuracy + w.compliance * compliance -
           w.bias * bias + w.alignment * alignment;
}

int simulate_response(const GameSpec& game, int action, int true_type, StableRng& rng) {
    return rng.categorical(qre_distribution(game, action, true_type));
}

LoopState init_loop(const ScenarioConfig& config, Policy policy, int replication) {
    require_valid(validate_scenario(config), "init_loop");

    LoopState state;
    state.policy = policy;
    state.true_type = pick_true_type(config, replication);
    state.mu = config.game.prior;
    state.rng = StableRng(loop_stream(config, policy, replication));
    state.channels = qre_channels(config.game);

    state.type_capacity_bits.resize(config.game.num_types());
    for (std::size_t k = 0; k < config.game.num_types(); ++k)
        state.type_capacity_bits[k] =
            channel_capacity(state.channels.per_type[k]).capacity_bits;

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < config.game.num_actions(); ++a) {
        const int d = best_response(config.game, static_cast<int>(a), state.true_type);
        best = std::max(best, config.game.u_pharma(a, d, state.true_type));
    }
    state.optimal_payoff = best;
    return state;
}

namespace {

int choose_action(LoopState& state, const ScenarioConfig& config, StepRecord& record) {
    const GameSpec& game = config.game;
    switch (state.policy) {
        case Policy::kRandom: {
            const std::vector<double> uniform(game.num_actions(),
                                              1.0 / static_cast<double>(game.num_actions()));
            return state.rng.categorical(uniform);
        }
        case Policy::kGreedy:
            return solve_stackelberg(game, state.mu).action;
        case Policy::kEgpf:
            break;
    }
    if (record.entropy_bits > config.tau_explore) {
        record.explored = true;
        record.epsilon = epsilon_schedule(record.t, game.num_types());
        int best_action = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < game.num_actions(); ++a) {
            const double exploit = expected_pharma_utility(
                game, static_cast<int>(a), state.mu, Responder::kBestResponse);
            const double explore =
                information_gain(state.mu, static_cast<int>(a), state.channels);
            const double score =
                (1.0 - record.epsilon) * exploit + record.epsilon * explore;
            if (score > best_score) {
                best_score = score;
                best_action = static_cast<int>(a);
            }
        }
        return best_action;
    }
    return solve_stackelberg(game, state.mu).action;
}

} // namespace

StepRecord egpf_step(LoopState& state, const ScenarioConfig& config) {
    const GameSpec& game = config.game;

    StepRecord record;
    record.t = state.t + 1;
    record.entropy_bits = entropy(state.mu, 1.0);
    record.action = choose_action(state, config, record);
    record.predicted_info_gain = information_gain(state.mu, record.action, state.channels);
    record.plan =
        content_plan(record.action, state.mu, game, state.type_capacity_bits[state.mu.argmax()]);
    record.compliance_ok = compliance_filter(record.plan);

    if (record.t - 1 < static_cast<int>(config.forced_responses.size()))
        record.response = config.forced_responses[record.t - 1];
    else
        record.response = simulate_response(game, record.action, state.true_type, state.rng);
    state.history.append(record.action, record.response, record.t);

    std::vector<double> likelihood(game.num_types());
    for (std::size_t k = 0; k < game.num_types(); ++k)
        likelihood[k] = state.channels.per_type[k](record.action, record.response);
    const Belief posterior = bayes_update(state.mu, likelihood);
    record.realized_log_gain =
        std::log2(posterior[state.true_type]) - std::log2(state.mu[state.true_type]);
    state.mu = posterior;

    if (state.history.size() >= static_cast<std::size_t>(config.drift_window)) {
        const DriftReport drift =
            drift_detect(state.history, state.channels, state.mu, config.drift_window,
                         config.tau_drift, config.divergence_alpha);
        record.drift_statistic = drift.statistic;
        record.drift_triggered = drift.triggered;
        if (drift.triggered) {
            ++state.drift_triggers;
            if (config.recalibrate_on_drift) {
                state.mu = game.prior;
                record.recalibrated = true;
                ++state.recalibrations;
            }
        }
    }

    const double realized = game.u_pharma(record.action, record.response, state.true_type);
    record.instantaneous_regret = std::max(0.0, state.optimal_payoff - realized);
    state.cumulative_regret += record.instantaneous_regret;
    record.cumulative_regret = state.cumulative_regret;
    record.log_loss_true_type = -std::log2(state.mu[state.true_type]);
    record.posterior = state.mu;

    if (state.steps_to_90 < 0) {
        const double confidence = state.mu[state.true_type];
        bool strict_max = confidence >= 0.9;
        for (std::size_t k = 0; strict_max && k < state.mu.size(); ++k)
            if (static_cast<int>(k) != state.true_type && state.mu[k] >= confidence)
                strict_max = false; // ties count as not converged
        if (strict_max) state.steps_to_90 = record.t;
    }

    state.t = record.t;
    return record;
}

namespace {

struct RepResult {
    int true_type = 0;
    int steps_to_90 = -1;
    std::vector<double> cumulative_regret;
    std::vector<double> log_loss;
    double exploration_regret = 0.0;
    double exploitation_regret = 0.0;
    double sum_realized = 0.0;
    double sum_predicted = 0.0;
    long drift_triggers = 0;
    long recalibrations = 0;
    std::vector<StepRecord> trace; // kept for replication 0 only
};

RepResult run_replication(const ScenarioConfig& config, Policy policy, int replication,
                          bool keep_trace) {
    LoopState state = init_loop(config, policy, replication);
    RepResult result;
    result.true_type = state.true_type;
    result.cumulative_regret.reserve(config.horizon);
    result.log_loss.reserve(config.horizon);
    for (int t = 0; t < config.horizon; ++t) {
        const StepRecord record = egpf_step(state, config);
        result.cumulative_regret.push_back(record.cumulative_regret);
        result.log_loss.push_back(record.log_loss_true_type);
        if (record.explored)
            result.exploration_regret += record.instantaneous_regret;
        else
            result.exploitation_regret += record.instantaneous_regret;
        result.sum_realized += record.realized_log_gain;
        result.sum_predicted += record.predicted_info_gain;
        if (keep_trace) result.trace.push_back(record);
    }
    result.steps_to_90 = state.steps_to_90;
    result.drift_triggers = state.drift_triggers;
    result.recalibrations = state.recalibrations;
    return result;
}

class Accumulator {
public:
    explicit Accumulator(std::size_t n) : sum_(n, 0.0), sum_sq_(n, 0.0) {}

    void add(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            sum_[i] += values[i];
            sum_sq_[i] += values[i] * values[i];
        }
        ++count_;
    }

    CurveSummary summary() const {
        CurveSummary s;
        s.mean.resize(sum_.size());
        s.half_width.resize(sum_.size());
        const double n = static_cast<double>(count_);
        for (std::size_t i = 0; i < sum_.size(); ++i) {
            s.mean[i] = sum_[i] / n;
            const double var =
                std::max(0.0, sum_sq_[i] / n - s.mean[i] * s.mean[i]) * n / std::max(1.0, n - 1.0);
            s.half_width[i] = count_ > 1 ? 1.96 * std::sqrt(var / n) : 0.0;
        }
        return s;
    }

private:
    std::vector<double> sum_, sum_sq_;
    long count_ = 0;
};

PolicyMetrics aggregate(const ScenarioConfig& config, Policy policy,
                        const std::vector<RepResult>& reps) {
    const std::size_t t = static_cast<std::size_t>(config.horizon);
    const std::size_t k = config.game.num_types();

    Accumulator regret(t), loss(t), loss_step(t > 1 ? t - 1 : 0);
    PolicyMetrics metrics;
    metrics.policy = policy;
    metrics.steps_to_90_mean_by_type.assign(k, 0.0);
    metrics.replications_by_type.assign(k, 0);
    metrics.converged_by_type.assign(k, 0);

    double gap_sum = 0.0, gap_sq = 0.0;
    long n_reps = 0;
    for (const auto& rep : reps) {
        regret.add(rep.cumulative_regret);
        loss.add(rep.log_loss);
        if (t > 1) {
            std::vector<double> diff(t - 1);
            for (std::size_t i = 0; i + 1 < t; ++i)
                diff[i] = rep.log_loss[i + 1] - rep.log_loss[i];
            loss_step.add(diff);
        }
        const int censored = rep.steps_to_90 > 0 ? rep.steps_to_90 : config.horizon;
        metrics.steps_to_90_mean_by_type[rep.true_type] += censored;
        metrics.replications_by_type[rep.true_type] += 1;
        if (rep.steps_to_90 > 0) metrics.converged_by_type[rep.true_type] += 1;
        metrics.exploration_regret_mean += rep.exploration_regret;
        metrics.exploitation_regret_mean += rep.exploitation_regret;
        const double gap = (rep.sum_realized - rep.sum_predicted) / static_cast<double>(t);
        gap_sum += gap;
        gap_sq += gap * gap;
        metrics.mean_realized_log_gain += rep.sum_realized / static_cast<double>(t);
        metrics.mean_predicted_info_gain += rep.sum_predicted / static_cast<double>(t);
        metrics.drift_triggers += rep.drift_triggers;
        metrics.recalibrations += rep.recalibrations;
        ++n_reps;
    }

    metrics.cumulative_regret = regret.summary();
    metrics.log_loss = loss.summary();
    if (t > 1) metrics.log_loss_step = loss_step.summary();
    const double n = static_cast<double>(n_reps);
    for (std::size_t i = 0; i < k; ++i)
        if (metrics.replications_by_type[i] > 0)
            metrics.steps_to_90_mean_by_type[i] /= metrics.replications_by_type[i];
    metrics.exploration_regret_mean /= n;
    metrics.exploitation_regret_mean /= n;
    metrics.mean_realized_log_gain /= n;
    metrics.mean_predicted_info_gain /= n;
    const double gap_mean = gap_sum / n;
    const double gap_var =
        n > 1 ? std::max(0.0, gap_sq / n - gap_mean * gap_mean) * n / (n - 1.0) : 0.0;
    metrics.gain_gap_se = std::sqrt(gap_var / n);
    return metrics;
}

} // namespace

const PolicyMetrics& RunMetrics::for_policy(Policy p) const {
    for (const auto& m : policies)
        if (m.policy == p) return m;
    throw Error("RunMetrics: policy not present");
}

RunMetrics run_experiment(const ScenarioConfig& config, int replications,
                          unsigned workers) {
    require_valid(validate_scenario(config), "run_experiment");
    if (replications < 1) throw Error("run_experiment: replications must be >= 1");
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, static_cast<unsigned>(replications));

    RunMetrics metrics;
    const Policy policies[] = {Policy::kEgpf, Policy::kGreedy, Policy::kRandom};
    for (Policy policy : policies) {
        std::vector<RepResult> reps(static_cast<std::size_t>(replications));
        if (workers > 1 && replications > 1) {
            std::vector<std::future<void>> futures;
            futures.reserve(workers);
            std::atomic<int> next{0};
            for (unsigned w = 0; w < workers; ++w) {
                futures.push_back(std::async(std::launch::async, [&] {
                    for (int r = next.fetch_add(1); r < replications; r = next.fetch_add(1))
                        reps[static_cast<std::size_t>(r)] = run_replication(
                            config, policy, r, policy == Policy::kEgpf && r == 0);
                }));
            }
            for (auto& f : futures) f.get();
        } else {
            for (int r = 0; r < replications; ++r)
                reps[static_cast<std::size_t>(r)] =
                    run_replication(config, policy, r, policy == Policy::kEgpf && r == 0);
        }
        // Ordered reduction over replication index keeps output identical
        // across worker counts.
        metrics.policies.push_back(aggregate(config, policy, reps));
        if (policy == Policy::kEgpf && !reps.empty()) metrics.trace = reps[0].trace;
    }
    return metrics;
}

} // namespace egpf
