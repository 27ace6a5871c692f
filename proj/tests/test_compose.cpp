#include <doctest.h>

#include <cmath>

#include "egpf/compose.hpp"
#include "egpf/io.hpp"
#include "egpf/rng.hpp"

using namespace egpf;

namespace {

// Random belief whose in-order sum is exactly 1.0 as a double, so the
// identity update's normalizer is exactly one.
Belief random_belief(StableRng& rng, std::size_t k) {
    for (;;) {
        std::vector<double> w(k);
        double z = 0.0;
        for (auto& v : w) {
            v = rng.uniform(1e-3, 1.0);
            z += v;
        }
        for (auto& v : w) v /= z;
        double partial = 0.0;
        for (std::size_t i = 0; i + 1 < k; ++i) partial += w[i];
        w[k - 1] = 1.0 - partial;
        if (w[k - 1] <= 0.0) continue;
        double total = 0.0;
        for (double v : w) total += v;
        if (total == 1.0) return Belief(std::move(w));
    }
}

} // namespace

TEST_CASE("functor identity law is exact") {
    const Belief mu({0.35, 0.45, 0.20});
    const BeliefUpdateMap ones{{1.0, 1.0, 1.0}};
    const auto report = functor_law_check(mu, ones, ones);
    CHECK_EQ(report.identity_residual, 0.0);
}

TEST_CASE("functor composition law on the worked-example likelihoods") {
    const Belief mu({0.35, 0.45, 0.20});
    const BeliefUpdateMap f{{0.65, 0.20, 0.40}};
    const BeliefUpdateMap g{{0.3, 0.3, 0.9}};
    const auto report = functor_law_check(mu, f, g);
    CHECK(report.composition_residual < 1e-12);
}

TEST_CASE("functor laws hold over 1000 randomized triples") {
    StableRng rng(67);
    double worst_comp = 0.0, worst_id = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = 2 + trial % 7;
        const Belief mu = random_belief(rng, k);
        BeliefUpdateMap f, g;
        f.likelihoods.resize(k);
        g.likelihoods.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            f.likelihoods[i] = rng.uniform(1e-3, 1.0);
            g.likelihoods[i] = rng.uniform(1e-3, 1.0);
        }
        const auto report = functor_law_check(mu, f, g);
        worst_comp = std::max(worst_comp, report.composition_residual);
        worst_id = std::max(worst_id, report.identity_residual);
    }
    CHECK_EQ(worst_id, 0.0);
    CHECK(worst_comp < 1e-12);
}

TEST_CASE("update map validation") {
    CHECK_FALSE(validate_update_map(BeliefUpdateMap{{0.0, 0.0}}, 2).ok);
    CHECK_FALSE(validate_update_map(BeliefUpdateMap{{-0.1, 0.5}}, 2).ok);
    CHECK(validate_update_map(BeliefUpdateMap{{0.1, 0.5}}, 2).ok);
}

TEST_CASE("tensor composition") {
    StableRng rng(71);
    const TypeSet set = sample_type_set(3, 0.05, 73);
    const TypeVector t1 = set.types[0], t2 = set.types[1], t3 = set.types[2];

    SUBCASE("unit weight returns the first operand exactly") {
        CHECK_EQ(tensor_compose(t1, t2, 1.0).as_array(), t1.as_array());
        CHECK_EQ(tensor_compose(t1, tensor_unit(), 0.0).as_array(), tensor_unit().as_array());
    }
    SUBCASE("composition preserves the type-space invariants") {
        for (int trial = 0; trial < 100; ++trial) {
            const TypeVector mixed = tensor_compose(t1, t2, rng.uniform());
            CHECK(validate_type_vector(mixed).ok);
        }
    }
    SUBCASE("associativity with reassociated weights") {
        // (t1 x t2)_0.5 x t3 at 0.5 = weights (0.25, 0.25, 0.5); match the
        // right-associated form with outer 0.25 and inner 1/3.
        const TypeVector left = tensor_compose(tensor_compose(t1, t2, 0.5), t3, 0.5);
        const TypeVector right = tensor_compose(t1, tensor_compose(t2, t3, 1.0 / 3.0), 0.25);
        const auto a = left.as_array(), b = right.as_array();
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK_EQ(a[i], doctest::Approx(b[i]).epsilon(1e-12));
    }
    SUBCASE("unit object has uniform influence weights") {
        const TypeVector unit = tensor_unit();
        CHECK_EQ(unit.alpha_e, 0.25);
        CHECK_EQ(unit.alpha_p, 0.25);
        CHECK_EQ(unit.alpha_o, 0.25);
        CHECK_EQ(unit.alpha_f, 0.25);
        CHECK(validate_type_vector(unit).ok);
    }
    SUBCASE("weight function overload") {
        const auto w = [](double x) { return x * x; };
        const TypeVector via_fn = tensor_compose(t1, t2, w, 0.5);
        const TypeVector direct = tensor_compose(t1, t2, 0.25);
        CHECK_EQ(via_fn.as_array(), direct.as_array());
    }
    SUBCASE("out-of-range weight rejected") {
        CHECK_THROWS_AS(tensor_compose(t1, t2, 1.5), Error);
    }
}

TEST_CASE("naturality residual") {
    const Belief mu({0.35, 0.45, 0.20});
    const BeliefUpdateMap f{{0.65, 0.20, 0.40}};

    SUBCASE("identity transfer with identical likelihoods commutes") {
        CHECK_EQ(naturality_residual(TransferMap::identity(3), f, f, mu),
                 doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("identity transfer with different likelihoods measures the posterior gap") {
        const BeliefUpdateMap g{{0.3, 0.3, 0.9}};
        const double residual = naturality_residual(TransferMap::identity(3), f, g, mu);
        const double expected = total_variation(bayes_update(mu, f.likelihoods).weights,
                                                bayes_update(mu, g.likelihoods).weights);
        CHECK_EQ(residual, doctest::Approx(expected).epsilon(1e-15));
        CHECK(residual > 0.0);
    }
    SUBCASE("permutation transfer with permuted likelihoods commutes") {
        TransferMap perm;
        perm.src_types = perm.dst_types = 3;
        perm.m = {0, 1, 0, 0, 0, 1, 1, 0, 0}; // 0->1, 1->2, 2->0
        const BeliefUpdateMap permuted{{0.40, 0.65, 0.20}}; // dst[j] = src[perm^-1(j)]
        CHECK(naturality_residual(perm, f, permuted, mu) < 1e-12);
    }
    SUBCASE("dimension mismatch rejected") {
        CHECK_THROWS_AS(
            naturality_residual(TransferMap::identity(2), f, f, mu), Error);
    }
}

TEST_CASE("scale poset") {
    SUBCASE("standard chain ordering") {
        const auto poset = ScalePoset::standard();
        CHECK(poset.leq("interaction", "weekly"));
        CHECK(poset.leq("weekly", "quarterly"));
        CHECK_FALSE(poset.leq("monthly", "weekly"));
        CHECK_THROWS_AS((void)poset.leq("daily", "weekly"), Error);
    }
    SUBCASE("restriction composition law validated at registration") {
        ScalePoset poset({"fine", "mid", "coarse"});
        TransferMap swap;
        swap.src_types = swap.dst_types = 2;
        swap.m = {0, 1, 1, 0};
        poset.set_restriction("coarse", "mid", swap);
        poset.set_restriction("mid", "fine", swap);
        // coarse->fine must equal the two-step composition (identity here).
        CHECK_THROWS_AS(poset.set_restriction("coarse", "fine", swap), Error);
        TransferMap identity = TransferMap::identity(2);
        poset.set_restriction("coarse", "fine", identity); // swap o swap = id
    }
    SUBCASE("restriction direction enforced") {
        ScalePoset poset({"fine", "coarse"});
        CHECK_THROWS_AS(poset.set_restriction("fine", "coarse", TransferMap::identity(2)),
                        Error);
    }
}

TEST_CASE("sheaf loss") {
    const auto poset = ScalePoset::standard();

    SUBCASE("identical beliefs with identity restrictions score zero") {
        const Belief mu({0.5, 0.3, 0.2});
        const std::map<std::string, Belief> beliefs = {
            {"interaction", mu}, {"weekly", mu}, {"monthly", mu}, {"quarterly", mu}};
        CHECK_EQ(sheaf_loss(beliefs, poset), 0.0);
    }
    SUBCASE("evidence-dominant beliefs at all scales stay below 0.05") {
        const std::map<std::string, Belief> beliefs = {
            {"interaction", Belief({0.72, 0.18, 0.10})},
            {"weekly", Belief({0.70, 0.20, 0.10})},
            {"monthly", Belief({0.71, 0.19, 0.10})},
            {"quarterly", Belief({0.73, 0.17, 0.10})}};
        const double loss = sheaf_loss(beliefs, poset);
        CHECK(loss > 0.0);
        CHECK(loss < 0.05);
    }
    SUBCASE("disjoint point masses across two scales score TV^2 = 1") {
        ScalePoset two({"interaction", "weekly"});
        const std::map<std::string, Belief> beliefs = {
            {"interaction", Belief({0.0, 1.0, 0.0})}, {"weekly", Belief({1.0, 0.0, 0.0})}};
        CHECK_EQ(sheaf_loss(beliefs, two), doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("missing scale is an error") {
        const std::map<std::string, Belief> partial = {
            {"interaction", Belief({1.0, 0.0, 0.0})}};
        CHECK_THROWS_AS(sheaf_loss(partial, poset), Error);
    }
    SUBCASE("per-pair residuals drive the loss") {
        ScalePoset two({"interaction", "weekly"});
        std::map<std::string, Belief> beliefs = {
            {"interaction", Belief({0.6, 0.4})}, {"weekly", Belief({0.5, 0.5})}};
        const auto residuals = sheaf_residuals(beliefs, two);
        REQUIRE_EQ(residuals.size(), 1);
        CHECK_EQ(residuals[0].coarse, "weekly");
        CHECK_EQ(residuals[0].fine, "interaction");
        CHECK_EQ(residuals[0].tv, doctest::Approx(0.1).epsilon(1e-15));
        CHECK_EQ(sheaf_loss(beliefs, two), doctest::Approx(0.01).epsilon(1e-15));
    }
}

TEST_CASE("diagnostic JSON reports") {
    ScalePoset two({"interaction", "weekly"});
    const std::map<std::string, Belief> beliefs = {
        {"interaction", Belief({0.6, 0.4})}, {"weekly", Belief({0.5, 0.5})}};
    const Json sheaf = sheaf_report_json(beliefs, two);
    CHECK_EQ(sheaf.at("pairs").at("weekly->interaction").get<double>(),
             doctest::Approx(0.1).epsilon(1e-15));
    CHECK_EQ(sheaf.at("sheaf_loss").get<double>(), doctest::Approx(0.01).epsilon(1e-15));

    const Belief mu({0.35, 0.45, 0.20});
    const BeliefUpdateMap f{{0.65, 0.20, 0.40}};
    const Json nat = naturality_report_json(TransferMap::identity(3), f, f, mu);
    CHECK(nat.at("commutes").get<bool>());
    CHECK_EQ(nat.at("residual_tv").get<double>(), doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("sheaf loss with averaging restriction maps") {
    // Coarse beliefs restricted through a smoothing map before comparison.
    ScalePoset poset({"interaction", "weekly"});
    TransferMap smooth;
    smooth.src_types = smooth.dst_types = 2;
    smooth.m = {0.9, 0.1, 0.1, 0.9};
    poset.set_restriction("weekly", "interaction", smooth);

    const std::map<std::string, Belief> beliefs = {
        {"interaction", Belief({0.82, 0.18})}, {"weekly", Belief({0.9, 0.1})}};
    // rho(weekly) = (0.82, 0.18) exactly matches the interaction belief.
    CHECK_EQ(sheaf_loss(beliefs, poset), doctest::Approx(0.0).epsilon(1e-15));
}
