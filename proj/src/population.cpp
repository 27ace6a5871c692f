#include "egpf/population.hpp"

#include <algorithm>
#include <cmath>

namespace egpf {

ValidationReport validate_population(const PopulationState& x) {
    ValidationReport report;
    double sum = 0.0;
    for (double s : x.shares) {
        if (s < 0.0) report.fail("negative share");
        sum += s;
    }
    if (std::abs(sum - 1.0) > defaults::kSimplexTol)
        report.fail("shares sum to " + std::to_string(sum));
    return report;
}

FitnessResult fitness(const PopulationState& x, const GameSpec& game,
                      const std::vector<double>& pharma_strategy) {
    if (x.size() != game.num_types())
        throw Error("fitness: population size != number of types");
    if (pharma_strategy.size() != game.num_actions())
        throw Error("fitness: strategy length != number of actions");

    FitnessResult result;
    result.per_type.assign(game.num_types(), 0.0);
    for (std::size_t a = 0; a < game.num_actions(); ++a) {
        if (pharma_strategy[a] == 0.0) continue;
        for (std::size_t k = 0; k < game.num_types(); ++k) {
            const int d = best_response(game, static_cast<int>(a), static_cast<int>(k));
            result.per_type[k] += pharma_strategy[a] * game.u_physician(a, d, k);
        }
    }
    for (std::size_t k = 0; k < game.num_types(); ++k)
        result.average += x.shares[k] * result.per_type[k];
    return result;
}

FitnessResult fitness(const PopulationState& x, const GameSpec& game, int pharma_action) {
    std::vector<double> pure(game.num_actions(), 0.0);
    pure.at(pharma_action) = 1.0;
    return fitness(x, game, pure);
}

PopulationState replicator_step(const PopulationState& x,
                                const std::vector<double>& fitness_vec, double dt) {
    if (!(dt > 0.0)) throw Error("replicator_step: dt must be > 0");
    if (fitness_vec.size() != x.size())
        throw Error("replicator_step: fitness length != population size");

    double average = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) average += x.shares[k] * fitness_vec[k];

    PopulationState next;
    next.time = x.time + dt;
    next.shares.resize(x.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x.shares[k] == 0.0) {
            next.shares[k] = 0.0; // extinct types never revive
            continue;
        }
        const double updated = x.shares[k] * (1.0 + dt * (fitness_vec[k] - average));
        if (updated < 0.0) throw Error("step too large");
        next.shares[k] = updated;
        sum += updated;
    }
    if (sum <= 0.0) throw Error("step too large");
    for (auto& s : next.shares) s /= sum;
    return next;
}

PopulationPolicy fixed_action_policy(int action) {
    return [action](double, const PopulationState&, const GameSpec& game) {
        std::vector<double> strategy(game.num_actions(), 0.0);
        strategy.at(action) = 1.0;
        return strategy;
    };
}

PopulationPolicy stackelberg_policy() {
    return [](double, const PopulationState& x, const GameSpec& game) {
        const auto solution = solve_stackelberg(game, Belief(x.shares));
        std::vector<double> strategy(game.num_actions(), 0.0);
        strategy[solution.action] = 1.0;
        return strategy;
    };
}

Trajectory integrate_replicator(const PopulationState& x0, GameSpec game,
                                const PopulationPolicy& policy, double horizon,
                                double dt, std::vector<ScenarioEvent> events) {
    require_valid(validate_population(x0), "integrate_replicator: x0");
    if (!(dt > 0.0) || !(horizon >= 0.0))
        throw Error("integrate_replicator: need dt > 0 and horizon >= 0");
    std::sort(events.begin(), events.end(),
              [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.time < b.time; });

    Trajectory trajectory;
    PopulationState state = x0;
    trajectory.states.push_back(state);

    std::size_t next_event = 0;
    const auto steps = static_cast<long>(std::llround(horizon / dt));
    for (long i = 0; i < steps; ++i) {
        while (next_event < events.size() && events[next_event].time <= state.time) {
            for (const auto& patch : events[next_event].patches) {
                Tensor3& tensor = patch.tensor == PayoffPatch::Tensor::kPharma
                                      ? game.u_pharma
                                      : game.u_physician;
                tensor(patch.action, patch.response, patch.type) = patch.value;
            }
            trajectory.events.push_back({state.time, events[next_event].id});
            ++next_event;
        }
        const auto strategy = policy(state.time, state, game);
        const auto fit = fitness(state, game, strategy);
        state = replicator_step(state, fit.per_type, dt);
        trajectory.states.push_back(state);
    }
    return trajectory;
}

EssReport ess_audit(const PopulationState& x_star, const GameSpec& game, int sigma_star,
                    const std::vector<PopulationState>& mutants, double tolerance) {
    require_valid(validate_population(x_star), "ess_audit: x_star");
    const auto fit = fitness(x_star, game, sigma_star);

    EssReport report;
    for (std::size_t k = 0; k < x_star.size(); ++k) {
        if (x_star.shares[k] <= 0.0) continue;
        const double slack = fit.average - fit.per_type[k];
        const bool ok = slack >= -tolerance;
        report.equilibrium.push_back({static_cast<int>(k), slack, ok});
        report.equilibrium_ok = report.equilibrium_ok && ok;
    }
    for (std::size_t i = 0; i < mutants.size(); ++i) {
        require_valid(validate_population(mutants[i]), "ess_audit: mutant");
        double mutant_average = 0.0;
        for (std::size_t k = 0; k < x_star.size(); ++k)
            mutant_average += mutants[i].shares[k] * fit.per_type[k];
        const double slack = fit.average - mutant_average;
        const bool ok = slack > tolerance;
        report.stability.push_back({static_cast<int>(i), slack, ok});
        report.stability_ok = report.stability_ok && ok;
    }
    return report;
}

} // namespace egpf
