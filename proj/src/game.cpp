#include "egpf/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace egpf {

double physician_utility(const UtilityFeatures& f, int response, int prev_response,
                         const TypeVector& theta) {
    if (!(theta.delta > 0.0)) throw Error("physician_utility: delta must be > 0");
    const double switch_cost = (response != prev_response) ? 1.0 : 0.0;
    return theta.alpha_e * f.evidence + theta.alpha_p * f.peer +
           theta.alpha_o * f.outcome + theta.alpha_f * f.access -
           theta.beta * f.variance - theta.gamma * switch_cost -
           f.load / theta.delta;
}

double pharma_utility(double revenue, double cost, double ltv, double reg_risk,
                      double info_gain, const PharmaWeights& w) {
    return revenue - cost + w.ltv * ltv - w.regulatory * reg_risk +
           w.info_gain * info_gain;
}

std::vector<double> qre_distribution(const GameSpec& game, int action, int type_index) {
    const std::size_t l = game.num_responses();
    std::vector<double> logits(l);
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d < l; ++d) {
        logits[d] = game.tau * game.u_physician(action, d, type_index);
        max_logit = std::max(max_logit, logits[d]);
    }
    double z = 0.0;
    for (std::size_t d = 0; d < l; ++d) {
        logits[d] = std::exp(logits[d] - max_logit);
        z += logits[d];
    }
    for (auto& p : logits) p /= z;
    return logits;
}

int best_response(const GameSpec& game, int action, int type_index) {
    int best = 0;
    for (std::size_t d = 1; d < game.num_responses(); ++d)
        if (game.u_physician(action, d, type_index) >
            game.u_physician(action, best, type_index))
            best = static_cast<int>(d);
    return best;
}

double expected_pharma_utility(const GameSpec& game, int action, const Belief& mu,
                               Responder responder) {
    double value = 0.0;
    for (std::size_t k = 0; k < game.num_types(); ++k) {
        if (responder == Responder::kBestResponse) {
            const int d = best_response(game, action, static_cast<int>(k));
            value += mu[k] * game.u_pharma(action, d, k);
        } else {
            const auto q = qre_distribution(game, action, static_cast<int>(k));
            double per_type = 0.0;
            for (std::size_t d = 0; d < q.size(); ++d)
                per_type += q[d] * game.u_pharma(action, d, k);
            value += mu[k] * per_type;
        }
    }
    return value;
}

StrategyProfile solve_bne(const GameSpec& game) {
    const std::size_t m = game.num_actions();
    const std::size_t k = game.num_types();

    StrategyProfile profile;
    profile.physician_strategy.resize(m);
    for (std::size_t a = 0; a < m; ++a) {
        profile.physician_strategy[a].resize(k);
        for (std::size_t t = 0; t < k; ++t) {
            std::vector<double> dist(game.num_responses(), 0.0);
            dist[best_response(game, static_cast<int>(a), static_cast<int>(t))] = 1.0;
            profile.physician_strategy[a][t] = std::move(dist);
        }
    }

    std::vector<double> values(m);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < m; ++a) {
        values[a] = expected_pharma_utility(game, static_cast<int>(a), game.prior,
                                            Responder::kBestResponse);
        best = std::max(best, values[a]);
    }
    std::vector<std::size_t> maximizers;
    for (std::size_t a = 0; a < m; ++a)
        if (values[a] == best) maximizers.push_back(a);

    profile.pharma_strategy.assign(m, 0.0);
    for (std::size_t a : maximizers)
        profile.pharma_strategy[a] = 1.0 / static_cast<double>(maximizers.size());
    return profile;
}

double leader_payoff(const GameSpec& game, const StrategyProfile& profile) {
    double value = 0.0;
    for (std::size_t a = 0; a < game.num_actions(); ++a) {
        if (profile.pharma_strategy[a] == 0.0) continue;
        value += profile.pharma_strategy[a] *
                 expected_pharma_utility(game, static_cast<int>(a), game.prior,
                                         Responder::kBestResponse);
    }
    return value;
}

StackelbergSolution solve_stackelberg(const GameSpec& game, const Belief& mu) {
    StackelbergSolution solution;
    solution.payoff = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < game.num_actions(); ++a) {
        const double v =
            expected_pharma_utility(game, static_cast<int>(a), mu, Responder::kBestResponse);
        if (v > solution.payoff) {
            solution.payoff = v;
            solution.action = static_cast<int>(a);
        }
    }
    return solution;
}

namespace {

// Best-response continuation utility of a true type facing action `a`.
double allocated_utility(const GameSpec& game, int a, int true_type) {
    const int d = best_response(game, a, true_type);
    return game.u_physician(a, d, true_type);
}

} // namespace

MechanismAudit audit_mechanism(const GameSpec& game, const Mechanism& mech,
                               double tolerance) {
    const std::size_t k = game.num_types();
    if (mech.allocation.size() != k)
        throw Error("audit_mechanism: allocation must cover every type");
    if (mech.transfers.size() != k || mech.outside_option.size() != k)
        throw Error("audit_mechanism: transfers/outside options must cover every type");

    for (std::size_t t = 0; t < k; ++t)
        if (!std::isfinite(mech.transfers[t]) || !std::isfinite(mech.outside_option[t]))
            throw Error("audit_mechanism: transfers and outside options must be finite");

    MechanismAudit audit;
    for (std::size_t t = 0; t < k; ++t) {
        const double truthful =
            allocated_utility(game, mech.allocation[t], static_cast<int>(t)) +
            mech.transfers[t];
        for (std::size_t r = 0; r < k; ++r) {
            if (r == t) continue;
            const double misreport =
                allocated_utility(game, mech.allocation[r], static_cast<int>(t)) +
                mech.transfers[r];
            const double slack = truthful - misreport;
            if (slack < -tolerance)
                audit.ic_violations.push_back(
                    {static_cast<int>(t), static_cast<int>(r), slack});
        }
        const double ir_slack = truthful - mech.outside_option[t];
        if (ir_slack < -tolerance)
            audit.ir_violations.push_back({static_cast<int>(t), ir_slack});
    }
    audit.passed = audit.ic_violations.empty() && audit.ir_violations.empty();
    return audit;
}

std::vector<double> derive_transfers(const GameSpec& game,
                                     const std::vector<int>& allocation,
                                     double base_transfer) {
    const std::size_t k = game.num_types();
    if (allocation.size() != k)
        throw Error("derive_transfers: allocation must cover every type");
    if (!game.type_set.sorted_by_evidence())
        throw Error("derive_transfers: type set not sorted by alpha_E");

    // Each increment leaves type j indifferent between its own allocation and
    // the next type's, so upward misreports never pay and single crossing
    // closes the remaining constraints.
    std::vector<double> transfers(k, base_transfer);
    double running = base_transfer;
    for (std::size_t j = 0; j + 1 < k; ++j) {
        running -= allocated_utility(game, allocation[j + 1], static_cast<int>(j)) -
                   allocated_utility(game, allocation[j], static_cast<int>(j));
        transfers[j + 1] = running;
    }
    return transfers;
}

GameSpec build_game(const TypeSet& types, const std::vector<UtilityFeatures>& action_features,
                    const PharmaFeatures& pharma, const Belief& prior, double tau,
                    int baseline_response) {
    const std::size_t m = action_features.size();
    const std::size_t l = pharma.revenue.size();
    const std::size_t k = types.size();

    GameSpec game;
    game.type_set = types;
    game.prior = prior;
    game.tau = tau;
    game.pharma_actions.resize(m);
    game.physician_responses.resize(l);
    for (std::size_t a = 0; a < m; ++a) game.pharma_actions[a] = "a" + std::to_string(a + 1);
    for (std::size_t d = 0; d < l; ++d) game.physician_responses[d] = "d" + std::to_string(d + 1);

    game.u_pharma = Tensor3(m, l, k);
    game.u_physician = Tensor3(m, l, k);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t d = 0; d < l; ++d) {
            const double ig = pharma.exploration_value.empty()
                                  ? 0.0
                                  : pharma.exploration_value[a][d];
            for (std::size_t t = 0; t < k; ++t) {
                game.u_physician(a, d, t) =
                    physician_utility(action_features[a], static_cast<int>(d),
                                      baseline_response, types.types[t]);
                const double ltv =
                    pharma.lifetime_value.empty() ? 0.0 : pharma.lifetime_value[d][t];
                game.u_pharma(a, d, t) =
                    pharma_utility(pharma.revenue[d], pharma.cost[a], ltv,
                                   pharma.regulatory_risk[a], ig, pharma.weights);
            }
        }
    }
    require_valid(validate_game(game), "build_game");
    return game;
}

LikelihoodFamily qre_family(std::function<std::vector<double>(const TypeVector&)> utilities,
                            double tau) {
    return [utilities = std::move(utilities), tau](const TypeVector& theta) {
        std::vector<double> u = utilities(theta);
        double max_u = -std::numeric_limits<double>::infinity();
        for (double v : u) max_u = std::max(max_u, tau * v);
        double z = 0.0;
        for (auto& v : u) {
            v = std::exp(tau * v - max_u);
            z += v;
        }
        for (auto& v : u) v /= z;
        return u;
    };
}

} // namespace egpf
