#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "egpf/defaults.hpp"
#include "egpf/error.hpp"

namespace egpf {

// Physician archetype vector.
//
// The four influence weights (evidence, peer, outcome, formulary) live on
// the probability simplex; beta is risk aversion, gamma switching inertia,
// delta the information-processing bandwidth in (0,1], kappa the temporal
// discount. Construction does not validate; run validate_type_vector to
// check the invariants. Finite-difference code evaluates likelihoods
// slightly off the simplex, so off-simplex vectors must be representable.
struct TypeVector {
    double alpha_e = 0.25;
    double alpha_p = 0.25;
    double alpha_o = 0.25;
    double alpha_f = 0.25;
    double beta = 1.0;
    double gamma = 0.5;
    double delta = 1.0;
    double kappa = 1.0;

    static constexpr std::size_t kDim = 8;

    std::array<double, kDim> as_array() const {
        return {alpha_e, alpha_p, alpha_o, alpha_f, beta, gamma, delta, kappa};
    }
    static TypeVector from_array(const std::array<double, kDim>& v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
    }
};

double distance(const TypeVector& a, const TypeVector& b);

// Outcome of a validation pass: ok, or the list of violated constraints,
// each naming the constraint and the measured residual.
struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;

    void fail(std::string message) {
        ok = false;
        violations.push_back(std::move(message));
    }
};

ValidationReport validate_type_vector(const TypeVector& theta);

// Probability distribution over a finite type set, index-aligned to the
// owning TypeSet ordering.
struct Belief {
    std::vector<double> weights;

    Belief() = default;
    explicit Belief(std::vector<double> w) : weights(std::move(w)) {}

    std::size_t size() const { return weights.size(); }
    double operator[](std::size_t k) const { return weights[k]; }
    double& operator[](std::size_t k) { return weights[k]; }

    static Belief uniform(std::size_t k);
    static Belief point_mass(std::size_t k, std::size_t index);

    int argmax() const; // lowest index on ties
};

ValidationReport validate_belief(const Belief& mu);

// Finite epsilon-separated set of archetypes. `separation` is the epsilon
// the set was built to satisfy, not the realized minimum distance.
struct TypeSet {
    std::vector<TypeVector> types;
    double separation = 0.0;

    std::size_t size() const { return types.size(); }
    double min_pairwise_distance() const;
    // Ascending evidence-sensitivity order (ties by peer weight), the
    // ordering required by the transfer-derivation formula.
    bool sorted_by_evidence() const;
};

ValidationReport validate_type_set(const TypeSet& set);

// Rejection-samples K types from the parameter box until all pairwise
// distances exceed epsilon, then sorts them into canonical order
// (ascending alpha_E, then alpha_P). Deterministic for a fixed seed.
// Throws Error("separation infeasible") once the retry budget is spent.
TypeSet sample_type_set(std::size_t k, double epsilon, std::uint64_t seed,
                        int retry_budget = defaults::kSampleRetryBudget);

// Dense M x L x K tensor indexed (action, response, type).
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(std::size_t m, std::size_t l, std::size_t k, double fill = 0.0)
        : m_(m), l_(l), k_(k), data_(m * l * k, fill) {}

    double operator()(std::size_t a, std::size_t d, std::size_t t) const {
        return data_[(a * l_ + d) * k_ + t];
    }
    double& operator()(std::size_t a, std::size_t d, std::size_t t) {
        return data_[(a * l_ + d) * k_ + t];
    }

    std::size_t num_actions() const { return m_; }
    std::size_t num_responses() const { return l_; }
    std::size_t num_types() const { return k_; }
    const std::vector<double>& flat() const { return data_; }
    std::vector<double>& flat() { return data_; }

private:
    std::size_t m_ = 0, l_ = 0, k_ = 0;
    std::vector<double> data_;
};

// Complete reduced-form game: finite action/response sets, payoff tensors
// for both sides, a common prior over the type set and the QRE rationality
// parameter tau.
struct GameSpec {
    TypeSet type_set;
    std::vector<std::string> pharma_actions;
    std::vector<std::string> physician_responses;
    Tensor3 u_pharma;    // u_P(a, d, theta)
    Tensor3 u_physician; // u_D(a, d, theta)
    Belief prior;
    double tau = defaults::kRationality;

    std::size_t num_actions() const { return pharma_actions.size(); }
    std::size_t num_responses() const { return physician_responses.size(); }
    std::size_t num_types() const { return type_set.size(); }
};

ValidationReport validate_game(const GameSpec& game);

// Throws Error listing every violation when the report is not ok.
void require_valid(const ValidationReport& report, const std::string& what);

// Per-action content scores feeding the physician utility: evidence
// quality E, peer validation P, outcome orientation O, formulary
// favorability F (all in [0,1]), evidence uncertainty Var >= 0 and
// cognitive load L >= 0. Switching cost is response-pair data and enters
// separately.
struct UtilityFeatures {
    double evidence = 0.0;
    double peer = 0.0;
    double outcome = 0.0;
    double access = 0.0;
    double variance = 0.0;
    double load = 0.0;
};

ValidationReport validate_features(const UtilityFeatures& f);

} // namespace egpf
