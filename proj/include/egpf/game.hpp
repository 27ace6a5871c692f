#pragma once

#include <functional>
#include <vector>

#include "egpf/core.hpp"

namespace egpf {

// --- Utility primitives ----------------------------------------------------

// Type-dependent physician utility:
//   alpha_E*E + alpha_P*P + alpha_O*O + alpha_F*F
//     - beta*Var - gamma*S(d, d_prev) - (1/delta)*L
// where S is 1 iff the response switches away from the previous one.
double physician_utility(const UtilityFeatures& f, int response, int prev_response,
                         const TypeVector& theta);

struct PharmaWeights {
    double ltv = 1.0;        // lambda
    double regulatory = 1.0; // psi
    double info_gain = defaults::kInfoGainWeight; // omega
};

// Pharma-side utility: R - C + lambda*LTV - psi*Reg + omega*I_gain.
double pharma_utility(double revenue, double cost, double ltv, double reg_risk,
                      double info_gain, const PharmaWeights& w);

// --- Quantal / best response -----------------------------------------------

// Softmax response model P(d | a, theta_k) at rationality tau, computed with
// max-subtraction. Output sums to 1 within 1e-12.
std::vector<double> qre_distribution(const GameSpec& game, int action, int type_index);

// Exact argmax response for (action, type); ties break to the lowest index.
int best_response(const GameSpec& game, int action, int type_index);

enum class Responder { kBestResponse, kQuantal };

// Expected pharma payoff of `action` under belief mu, with the physician
// either best-responding per type or sampled from the QRE distribution.
double expected_pharma_utility(const GameSpec& game, int action, const Belief& mu,
                               Responder responder = Responder::kBestResponse);

// --- Equilibrium solving ----------------------------------------------------

// Mixed pharma strategy plus the per-(action,type) physician response
// distributions. The physician side of an equilibrium profile is the exact
// best response (a point mass per action/type).
struct StrategyProfile {
    std::vector<double> pharma_strategy;                         // over M actions
    std::vector<std::vector<std::vector<double>>> physician_strategy; // [a][k] -> dist over L
};

// Enumerates the pharma action set against exact per-type best responses.
// Returns a pure maximizer when unique, uniform over the maximizer set
// otherwise.
StrategyProfile solve_bne(const GameSpec& game);

// Leader payoff of a pharma strategy against best-responding physicians.
double leader_payoff(const GameSpec& game, const StrategyProfile& profile);

struct StackelbergSolution {
    int action = 0;
    double payoff = 0.0;
};

// Commitment solution: argmax_a sum_k mu_k u_P(a, BR(a,theta_k), theta_k),
// ties to the lowest action index.
StackelbergSolution solve_stackelberg(const GameSpec& game, const Belief& mu);

// --- Mechanism design --------------------------------------------------------

// Direct mechanism: per-type allocation g, transfers t and outside options.
struct Mechanism {
    std::vector<int> allocation;        // type index -> action index
    std::vector<double> transfers;      // type index -> value transfer
    std::vector<double> outside_option; // type index -> reservation utility
};

struct IcViolation {
    int true_type = 0;
    int reported_type = 0;
    double slack = 0.0; // negative slack = violated margin
};
struct IrViolation {
    int type = 0;
    double slack = 0.0;
};

struct MechanismAudit {
    std::vector<IcViolation> ic_violations;
    std::vector<IrViolation> ir_violations;
    bool passed = true;
};

// Evaluates all K^2 truth-telling constraints and K participation
// constraints with best-response continuation utilities.
MechanismAudit audit_mechanism(const GameSpec& game, const Mechanism& mech,
                               double tolerance = 1e-9);

// Envelope transfers pinned down by the allocation rule up to the base
// transfer, telescoping along the evidence-sensitivity order:
//   t_{k+1} = t_k - [u(theta_k; g(theta_{k+1})) - u(theta_k; g(theta_k))]
// so each type is indifferent to the adjacent upward misreport. Requires
// the type set sorted ascending by alpha_E.
std::vector<double> derive_transfers(const GameSpec& game,
                                     const std::vector<int>& allocation,
                                     double base_transfer);

// --- Tensor construction from features ---------------------------------------

// Pharma-side reduced-form inputs: revenue per response, cost and regulatory
// risk per action, lifetime value per (response, type), exploration value
// per (action, response).
struct PharmaFeatures {
    std::vector<double> revenue;
    std::vector<double> cost;
    std::vector<std::vector<double>> lifetime_value;
    std::vector<double> regulatory_risk;
    std::vector<std::vector<double>> exploration_value;
    PharmaWeights weights;
};

// Fills both payoff tensors from feature scores: the physician side via
// physician_utility with `baseline_response` as the status quo, the pharma
// side via pharma_utility.
GameSpec build_game(const TypeSet& types, const std::vector<UtilityFeatures>& action_features,
                    const PharmaFeatures& pharma, const Belief& prior, double tau,
                    int baseline_response = 0);

// theta -> response distribution, the pluggable likelihood family used by
// Fisher-information code.
using LikelihoodFamily = std::function<std::vector<double>(const TypeVector&)>;

// Softmax family over caller-supplied response utilities of theta.
LikelihoodFamily qre_family(std::function<std::vector<double>(const TypeVector&)> utilities,
                            double tau);

} // namespace egpf
