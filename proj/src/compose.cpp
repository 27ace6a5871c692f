#include "egpf/compose.hpp"

#include <algorithm>
#include <cmath>

namespace egpf {

ValidationReport validate_update_map(const BeliefUpdateMap& f, std::size_t k) {
    ValidationReport report;
    if (f.likelihoods.size() != k) report.fail("likelihood length != K");
    double sum = 0.0;
    for (double v : f.likelihoods) {
        if (v < 0.0) report.fail("negative likelihood");
        sum += v;
    }
    if (sum <= 0.0) report.fail("identically zero likelihood");
    return report;
}

FunctorLawReport functor_law_check(const Belief& mu, const BeliefUpdateMap& f,
                                   const BeliefUpdateMap& g) {
    require_valid(validate_update_map(f, mu.size()), "functor_law_check: f");
    require_valid(validate_update_map(g, mu.size()), "functor_law_check: g");

    FunctorLawReport report;
    const Belief identity =
        bayes_update(mu, std::vector<double>(mu.size(), 1.0));
    report.identity_residual = total_variation(identity.weights, mu.weights);

    const Belief staged = bayes_update(bayes_update(mu, f.likelihoods), g.likelihoods);
    std::vector<double> product(mu.size());
    for (std::size_t k = 0; k < mu.size(); ++k)
        product[k] = f.likelihoods[k] * g.likelihoods[k];
    const Belief batched = bayes_update(mu, product);
    report.composition_residual = total_variation(staged.weights, batched.weights);
    return report;
}

TypeVector tensor_unit() {
    TypeVector unit;
    unit.alpha_e = unit.alpha_p = unit.alpha_o = unit.alpha_f = 0.25;
    unit.beta = 0.0;
    unit.gamma = 0.0;
    unit.delta = 1.0;
    unit.kappa = 1.0;
    return unit;
}

TypeVector tensor_compose(const TypeVector& theta1, const TypeVector& theta2, double w) {
    if (w < 0.0 || w > 1.0) throw Error("tensor_compose: weight must be in [0,1]");
    const auto a = theta1.as_array();
    const auto b = theta2.as_array();
    std::array<double, TypeVector::kDim> out{};
    for (std::size_t i = 0; i < TypeVector::kDim; ++i)
        out[i] = w * a[i] + (1.0 - w) * b[i];
    return TypeVector::from_array(out);
}

TypeVector tensor_compose(const TypeVector& theta1, const TypeVector& theta2,
                          const std::function<double(double)>& weight_fn, double context) {
    return tensor_compose(theta1, theta2, weight_fn(context));
}

TransferMap TransferMap::identity(std::size_t k) {
    TransferMap eta;
    eta.src_types = eta.dst_types = k;
    eta.m.assign(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) eta.m[i * k + i] = 1.0;
    return eta;
}

ValidationReport validate_transfer(const TransferMap& eta) {
    ValidationReport report;
    if (eta.m.size() != eta.src_types * eta.dst_types) {
        report.fail("matrix size != src x dst");
        return report;
    }
    for (std::size_t i = 0; i < eta.src_types; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < eta.dst_types; ++j) {
            const double v = eta.m[i * eta.dst_types + j];
            if (v < 0.0) report.fail("negative entry in row " + std::to_string(i));
            sum += v;
        }
        if (std::abs(sum - 1.0) > defaults::kSimplexTol)
            report.fail("row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
    return report;
}

Belief apply_transfer(const TransferMap& eta, const Belief& mu) {
    if (mu.size() != eta.src_types)
        throw Error("apply_transfer: belief length != transfer rows");
    std::vector<double> out(eta.dst_types, 0.0);
    for (std::size_t i = 0; i < eta.src_types; ++i)
        for (std::size_t j = 0; j < eta.dst_types; ++j)
            out[j] += mu[i] * eta.m[i * eta.dst_types + j];
    return Belief(std::move(out));
}

double naturality_residual(const TransferMap& eta, const BeliefUpdateMap& src_update,
                           const BeliefUpdateMap& dst_update, const Belief& mu) {
    if (mu.size() != eta.src_types || src_update.likelihoods.size() != eta.src_types ||
        dst_update.likelihoods.size() != eta.dst_types)
        throw Error("naturality_residual: dimension mismatch");
    const Belief update_then_transfer =
        apply_transfer(eta, bayes_update(mu, src_update.likelihoods));
    const Belief transfer_then_update =
        bayes_update(apply_transfer(eta, mu), dst_update.likelihoods);
    return total_variation(update_then_transfer.weights, transfer_then_update.weights);
}

ScalePoset::ScalePoset(std::vector<std::string> scales_fine_to_coarse)
    : scales_(std::move(scales_fine_to_coarse)) {
    if (scales_.empty()) throw Error("ScalePoset: empty scale list");
}

ScalePoset ScalePoset::standard() {
    return ScalePoset({"interaction", "weekly", "monthly", "quarterly"});
}

int ScalePoset::index_of(const std::string& scale) const {
    for (std::size_t i = 0; i < scales_.size(); ++i)
        if (scales_[i] == scale) return static_cast<int>(i);
    throw Error("ScalePoset: unknown scale '" + scale + "'");
}

bool ScalePoset::leq(const std::string& fine, const std::string& coarse) const {
    return index_of(fine) <= index_of(coarse);
}

void ScalePoset::set_restriction(const std::string& coarse, const std::string& fine,
                                 TransferMap map, double composition_tol) {
    const int u = index_of(coarse);
    const int v = index_of(fine);
    if (v >= u) throw Error("ScalePoset: restriction requires fine < coarse");
    require_valid(validate_transfer(map), "ScalePoset restriction");
    if (map.src_types != map.dst_types)
        throw Error("ScalePoset: restriction must preserve belief dimension");
    if (belief_dim_ == 0) belief_dim_ = map.src_types;
    if (map.src_types != belief_dim_)
        throw Error("ScalePoset: inconsistent belief dimension");
    restrictions_[{u, v}] = std::move(map);
    check_composition(composition_tol);
}

Belief ScalePoset::restrict(const std::string& coarse, const std::string& fine,
                            const Belief& mu) const {
    const int u = index_of(coarse);
    const int v = index_of(fine);
    if (v > u) throw Error("ScalePoset: restriction requires fine <= coarse");

    // Explicit map when registered; otherwise step down one scale at a time,
    // so long-range restrictions are the composition of the registered
    // adjacent maps (identity by default).
    Belief current = mu;
    int level = u;
    while (level > v) {
        const auto direct = restrictions_.find({level, v});
        if (direct != restrictions_.end())
            return apply_transfer(direct->second, current);
        const auto step = restrictions_.find({level, level - 1});
        if (step != restrictions_.end()) current = apply_transfer(step->second, current);
        --level;
    }
    return current;
}

void ScalePoset::check_composition(double tol) const {
    if (belief_dim_ == 0) return;
    // Probe each registered chain W <= V <= U on the vertex beliefs; for
    // linear maps agreement on a basis is agreement everywhere.
    const int n = static_cast<int>(scales_.size());
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < u; ++v)
            for (int w = 0; w < v; ++w) {
                for (std::size_t basis = 0; basis < belief_dim_; ++basis) {
                    const Belief e = Belief::point_mass(belief_dim_, basis);
                    const Belief direct = restrict(scales_[u], scales_[w], e);
                    const Belief staged =
                        restrict(scales_[v], scales_[w], restrict(scales_[u], scales_[v], e));
                    if (total_variation(direct.weights, staged.weights) > tol)
                        throw Error("ScalePoset: restriction composition law violated on " +
                                    scales_[u] + " -> " + scales_[v] + " -> " + scales_[w]);
                }
            }
}

std::vector<SheafPairResidual> sheaf_residuals(const std::map<std::string, Belief>& beliefs,
                                               const ScalePoset& poset) {
    const auto& scales = poset.scales();
    for (const auto& s : scales)
        if (beliefs.find(s) == beliefs.end())
            throw Error("sheaf_loss: missing belief for scale '" + s + "'");

    std::vector<SheafPairResidual> residuals;
    for (std::size_t u = 0; u < scales.size(); ++u)
        for (std::size_t v = 0; v < u; ++v) {
            const Belief restricted =
                poset.restrict(scales[u], scales[v], beliefs.at(scales[u]));
            residuals.push_back(
                {scales[u], scales[v],
                 total_variation(restricted.weights, beliefs.at(scales[v]).weights)});
        }
    return residuals;
}

double sheaf_loss(const std::map<std::string, Belief>& beliefs, const ScalePoset& poset) {
    double loss = 0.0;
    for (const auto& r : sheaf_residuals(beliefs, poset)) loss += r.tv * r.tv;
    return loss;
}

} // namespace egpf
