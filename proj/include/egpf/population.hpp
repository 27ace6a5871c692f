#pragma once

#include <functional>
#include <string>
#include <vector>

#include "egpf/core.hpp"
#include "egpf/game.hpp"

namespace egpf {

// Fraction of physicians of each type at a point in time.
struct PopulationState {
    std::vector<double> shares;
    double time = 0.0;

    std::size_t size() const { return shares.size(); }
};

ValidationReport validate_population(const PopulationState& x);

struct FitnessResult {
    std::vector<double> per_type;
    double average = 0.0;
};

// Per-type fitness under a (possibly mixed) pharma strategy: the
// best-response physician payoff, mixed linearly over actions. Also
// returns the share-weighted population average.
FitnessResult fitness(const PopulationState& x, const GameSpec& game,
                      const std::vector<double>& pharma_strategy);
FitnessResult fitness(const PopulationState& x, const GameSpec& game, int pharma_action);

// One explicit Euler step of the replicator equation
//   x_k <- x_k + dt * x_k * (f_k - f_bar)
// followed by renormalization. Extinct shares stay exactly zero. Throws
// Error("step too large") if any share would go negative.
PopulationState replicator_step(const PopulationState& x,
                                const std::vector<double>& fitness_vec, double dt);

// Payoff-tensor patch applied when a scenario event fires.
struct PayoffPatch {
    enum class Tensor { kPharma, kPhysician };
    Tensor tensor = Tensor::kPhysician;
    int action = 0;
    int response = 0;
    int type = 0;
    double value = 0.0;
};

struct ScenarioEvent {
    double time = 0.0;
    std::string id;
    std::vector<PayoffPatch> patches;
};

struct TrajectoryEvent {
    double time = 0.0;
    std::string id;
};

struct Trajectory {
    std::vector<PopulationState> states; // strictly increasing times
    std::vector<TrajectoryEvent> events;
};

// Pharma strategy as a function of time and the current population mix.
using PopulationPolicy =
    std::function<std::vector<double>(double, const PopulationState&, const GameSpec&)>;

PopulationPolicy fixed_action_policy(int action);
// Recomputes the commitment action against the current shares each step.
PopulationPolicy stackelberg_policy();

// Integrates the replicator dynamics over [0, horizon] with step dt,
// applying each event's payoff patches when its timestamp is reached.
Trajectory integrate_replicator(const PopulationState& x0, GameSpec game,
                                const PopulationPolicy& policy, double horizon,
                                double dt, std::vector<ScenarioEvent> events = {});

struct EssConditionSlack {
    int index = 0;      // type index (equilibrium) or mutant index (stability)
    double slack = 0.0; // >= 0 (or > 0 for stability) when satisfied
    bool ok = true;
};

struct EssReport {
    std::vector<EssConditionSlack> equilibrium; // per supported type
    std::vector<EssConditionSlack> stability;   // per supplied mutant
    bool equilibrium_ok = true;
    bool stability_ok = true;
};

// Audits the two stability conditions at a candidate rest point: no
// supported type exceeds the average fitness, and every supplied mutant
// mix does strictly worse than the population average.
EssReport ess_audit(const PopulationState& x_star, const GameSpec& game, int sigma_star,
                    const std::vector<PopulationState>& mutants, double tolerance = 1e-12);

} // namespace egpf
