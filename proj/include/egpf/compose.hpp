#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "egpf/belief.hpp"
#include "egpf/core.hpp"

namespace egpf {

// A likelihood vector viewed as a morphism Belief -> Belief via Bayes
// updating. Nonnegative and not identically zero.
struct BeliefUpdateMap {
    std::vector<double> likelihoods;
};

ValidationReport validate_update_map(const BeliefUpdateMap& f, std::size_t k);

struct FunctorLawReport {
    double identity_residual = 0.0;    // TV(update(mu, 1), mu)
    double composition_residual = 0.0; // TV(g after f, update with f.g elementwise)
};

// Measures the functor laws on Bayes updating: the all-ones likelihood must
// act as the identity, and staged updates must equal the single update with
// the elementwise product of likelihoods.
FunctorLawReport functor_law_check(const Belief& mu, const BeliefUpdateMap& f,
                                   const BeliefUpdateMap& g);

// Unit object of the behavior tensor: uniform influence weights, no risk
// aversion or inertia, full bandwidth, neutral discount.
TypeVector tensor_unit();

// Context-weighted behavior mixture w*theta1 + (1-w)*theta2, componentwise.
// Convexity keeps the result inside the type-space invariants.
TypeVector tensor_compose(const TypeVector& theta1, const TypeVector& theta2, double w);
TypeVector tensor_compose(const TypeVector& theta1, const TypeVector& theta2,
                          const std::function<double(double)>& weight_fn, double context);

// Row-stochastic map from source-domain beliefs (length rows) to
// destination-domain beliefs (length cols).
struct TransferMap {
    std::size_t src_types = 0;
    std::size_t dst_types = 0;
    std::vector<double> m; // row-major

    static TransferMap identity(std::size_t k);
};

ValidationReport validate_transfer(const TransferMap& eta);

Belief apply_transfer(const TransferMap& eta, const Belief& mu);

// Commutativity defect of the domain-transfer square:
//   || eta(update_src(mu)) - update_dst(eta(mu)) ||_TV
// Zero means transfer-then-update equals update-then-transfer for this input.
double naturality_residual(const TransferMap& eta, const BeliefUpdateMap& src_update,
                           const BeliefUpdateMap& dst_update, const Belief& mu);

// Totally ordered temporal scales (fine to coarse) with per-pair
// restriction maps carrying coarse-scale beliefs down to finer scales.
// Registration validates the composition law rho_{U,W} = rho_{V,W} o
// rho_{U,V} on every chain.
class ScalePoset {
public:
    explicit ScalePoset(std::vector<std::string> scales_fine_to_coarse);

    static ScalePoset standard(); // interaction <= weekly <= monthly <= quarterly

    const std::vector<std::string>& scales() const { return scales_; }
    bool leq(const std::string& fine, const std::string& coarse) const;

    // Registers the restriction from `coarse` down to `fine`. Unregistered
    // pairs compose through the registered adjacent maps (identity by
    // default); explicit long-range maps must agree with that composition.
    void set_restriction(const std::string& coarse, const std::string& fine,
                         TransferMap map, double composition_tol = 1e-9);
    Belief restrict(const std::string& coarse, const std::string& fine,
                    const Belief& mu) const;

private:
    int index_of(const std::string& scale) const;
    void check_composition(double tol) const;

    std::vector<std::string> scales_;
    std::map<std::pair<int, int>, TransferMap> restrictions_; // (coarse, fine)
    std::size_t belief_dim_ = 0;
};

// Squared-TV mismatch between restricted coarse beliefs and fine beliefs,
// summed over all strictly comparable scale pairs. Zero iff every
// restriction equation holds.
double sheaf_loss(const std::map<std::string, Belief>& beliefs, const ScalePoset& poset);

// Per-pair diagnostics backing the sheaf loss.
struct SheafPairResidual {
    std::string coarse;
    std::string fine;
    double tv = 0.0;
};
std::vector<SheafPairResidual> sheaf_residuals(const std::map<std::string, Belief>& beliefs,
                                               const ScalePoset& poset);

} // namespace egpf
