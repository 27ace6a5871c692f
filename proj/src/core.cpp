#include "egpf/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "egpf/rng.hpp"

namespace egpf {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

} // namespace

double distance(const TypeVector& a, const TypeVector& b) {
    const auto va = a.as_array();
    const auto vb = b.as_array();
    double s = 0.0;
    for (std::size_t i = 0; i < TypeVector::kDim; ++i) {
        const double d = va[i] - vb[i];
        s += d * d;
    }
    return std::sqrt(s);
}

ValidationReport validate_type_vector(const TypeVector& theta) {
    ValidationReport report;
    const double sum = theta.alpha_e + theta.alpha_p + theta.alpha_o + theta.alpha_f;
    if (std::abs(sum - 1.0) > defaults::kSimplexTol)
        report.fail("simplex sum = " + fmt(sum));
    for (auto [name, v] : {std::pair{"alpha_E", theta.alpha_e},
                           {"alpha_P", theta.alpha_p},
                           {"alpha_O", theta.alpha_o},
                           {"alpha_F", theta.alpha_f}}) {
        if (!in_unit_interval(v))
            report.fail(std::string(name) + " out of [0,1]: " + fmt(v));
    }
    if (theta.beta < 0.0) report.fail("beta negative: " + fmt(theta.beta));
    if (theta.kappa < 0.0) report.fail("kappa negative: " + fmt(theta.kappa));
    if (!in_unit_interval(theta.gamma))
        report.fail("gamma out of [0,1]: " + fmt(theta.gamma));
    if (!(theta.delta > 0.0 && theta.delta <= 1.0))
        report.fail("delta out of (0,1]: " + fmt(theta.delta));
    return report;
}

Belief Belief::uniform(std::size_t k) {
    return Belief(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

Belief Belief::point_mass(std::size_t k, std::size_t index) {
    std::vector<double> w(k, 0.0);
    w.at(index) = 1.0;
    return Belief(std::move(w));
}

int Belief::argmax() const {
    int best = 0;
    for (std::size_t i = 1; i < weights.size(); ++i)
        if (weights[i] > weights[best]) best = static_cast<int>(i);
    return best;
}

ValidationReport validate_belief(const Belief& mu) {
    ValidationReport report;
    if (mu.size() == 0) {
        report.fail("empty belief");
        return report;
    }
    double sum = 0.0;
    for (double w : mu.weights) {
        if (w < 0.0) report.fail("negative weight: " + fmt(w));
        sum += w;
    }
    if (std::abs(sum - 1.0) > defaults::kSimplexTol)
        report.fail("sum != 1: " + fmt(sum));
    return report;
}

double TypeSet::min_pairwise_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < types.size(); ++i)
        for (std::size_t j = i + 1; j < types.size(); ++j)
            best = std::min(best, distance(types[i], types[j]));
    return best;
}

bool TypeSet::sorted_by_evidence() const {
    return std::is_sorted(types.begin(), types.end(),
                          [](const TypeVector& a, const TypeVector& b) {
                              if (a.alpha_e != b.alpha_e) return a.alpha_e < b.alpha_e;
                              return a.alpha_p < b.alpha_p;
                          });
}

ValidationReport validate_type_set(const TypeSet& set) {
    ValidationReport report;
    if (set.types.empty()) {
        report.fail("empty type set");
        return report;
    }
    for (std::size_t i = 0; i < set.types.size(); ++i) {
        auto r = validate_type_vector(set.types[i]);
        for (const auto& v : r.violations)
            report.fail("type " + std::to_string(i) + ": " + v);
    }
    if (set.types.size() > 1) {
        const double d = set.min_pairwise_distance();
        if (!(d > set.separation))
            report.fail("pairwise separation " + fmt(d) + " <= epsilon " +
                        fmt(set.separation));
    }
    return report;
}

TypeSet sample_type_set(std::size_t k, double epsilon, std::uint64_t seed,
                        int retry_budget) {
    if (k < 1) throw Error("sample_type_set: K must be >= 1");
    if (!(epsilon > 0.0)) throw Error("sample_type_set: epsilon must be > 0");

    StableRng rng(seed);
    auto draw = [&rng]() {
        // Influence weights via normalized exponential spacings (uniform on
        // the simplex); remaining coordinates uniform on the sampling box.
        std::array<double, 4> e{};
        double total = 0.0;
        for (auto& x : e) {
            x = rng.exponential();
            total += x;
        }
        TypeVector t;
        t.alpha_e = e[0] / total;
        t.alpha_p = e[1] / total;
        t.alpha_o = e[2] / total;
        t.alpha_f = 1.0 - t.alpha_e - t.alpha_p - t.alpha_o;
        t.beta = rng.uniform(0.0, defaults::kBetaMax);
        t.gamma = rng.uniform();
        t.delta = rng.uniform(defaults::kDeltaMin, 1.0);
        t.kappa = rng.uniform(0.0, defaults::kKappaMax);
        return t;
    };

    TypeSet set;
    set.separation = epsilon;
    set.types.reserve(k);
    int rejections = 0;
    while (set.types.size() < k) {
        TypeVector candidate = draw();
        bool separated = true;
        for (const auto& t : set.types) {
            if (distance(candidate, t) <= epsilon) {
                separated = false;
                break;
            }
        }
        if (separated) {
            set.types.push_back(candidate);
        } else if (++rejections >= retry_budget) {
            throw Error("separation infeasible");
        }
    }
    std::sort(set.types.begin(), set.types.end(),
              [](const TypeVector& a, const TypeVector& b) {
                  if (a.alpha_e != b.alpha_e) return a.alpha_e < b.alpha_e;
                  return a.alpha_p < b.alpha_p;
              });
    return set;
}

ValidationReport validate_game(const GameSpec& game) {
    ValidationReport report = validate_type_set(game.type_set);
    const std::size_t m = game.num_actions();
    const std::size_t l = game.num_responses();
    const std::size_t k = game.num_types();
    if (m == 0) report.fail("no pharma actions");
    if (l == 0) report.fail("no physician responses");
    for (auto [name, t] : {std::pair{"u_P", &game.u_pharma}, {"u_D", &game.u_physician}}) {
        if (t->num_actions() != m || t->num_responses() != l || t->num_types() != k)
            report.fail(std::string(name) + " dimensions != " + std::to_string(m) + "x" +
                        std::to_string(l) + "x" + std::to_string(k));
        for (double v : t->flat())
            if (!std::isfinite(v)) {
                report.fail(std::string(name) + " has non-finite entry");
                break;
            }
    }
    if (game.prior.size() != k) report.fail("prior length != K");
    auto pr = validate_belief(game.prior);
    for (const auto& v : pr.violations) report.fail("prior: " + v);
    if (!(game.tau > 0.0)) report.fail("tau must be > 0: " + fmt(game.tau));
    return report;
}

void require_valid(const ValidationReport& report, const std::string& what) {
    if (report.ok) return;
    std::string msg = what + ":";
    for (const auto& v : report.violations) msg += " [" + v + "]";
    throw Error(msg);
}

ValidationReport validate_features(const UtilityFeatures& f) {
    ValidationReport report;
    for (auto [name, v] : {std::pair{"E", f.evidence},
                           {"P", f.peer},
                           {"O", f.outcome},
                           {"F", f.access}}) {
        if (!in_unit_interval(v))
            report.fail(std::string(name) + " out of [0,1]: " + fmt(v));
    }
    if (f.variance < 0.0) report.fail("Var negative: " + fmt(f.variance));
    if (f.load < 0.0) report.fail("L negative: " + fmt(f.load));
    return report;
}

} // namespace egpf
