#include <doctest.h>

#include <cmath>

#include "egpf/examples.hpp"
#include "egpf/population.hpp"
#include "egpf/rng.hpp"

using namespace egpf;

TEST_CASE("fitness") {
    const GameSpec game = examples::oncology_game();
    const PopulationState x{{0.35, 0.45, 0.20}, 0.0};

    SUBCASE("clinical action row matches the canonical physician payoffs") {
        const auto fit = fitness(x, game, 0);
        CHECK_EQ(fit.per_type[0], doctest::Approx(0.85).epsilon(1e-12));
        CHECK_EQ(fit.per_type[1], doctest::Approx(0.30).epsilon(1e-12));
        CHECK_EQ(fit.per_type[2], doctest::Approx(0.25).epsilon(1e-12));
        CHECK_EQ(fit.average,
                 doctest::Approx(0.35 * 0.85 + 0.45 * 0.30 + 0.20 * 0.25).epsilon(1e-12));
    }
    SUBCASE("constant payoffs give constant fitness") {
        GameSpec flat = game;
        for (auto& v : flat.u_physician.flat()) v = 0.5;
        const auto fit = fitness(x, flat, 1);
        for (double f : fit.per_type) CHECK_EQ(f, 0.5);
        CHECK_EQ(fit.average, doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("mixed strategies are linear in the pure fitnesses") {
        const std::vector<double> uniform(3, 1.0 / 3.0);
        const auto mixed = fitness(x, game, uniform);
        for (std::size_t k = 0; k < 3; ++k) {
            double blend = 0.0;
            for (int a = 0; a < 3; ++a) blend += fitness(x, game, a).per_type[k] / 3.0;
            CHECK_EQ(mixed.per_type[k], doctest::Approx(blend).epsilon(1e-12));
        }
    }
}

TEST_CASE("replicator step") {
    SUBCASE("equal fitness is a fixed point") {
        const PopulationState x{{0.2, 0.5, 0.3}, 0.0};
        const PopulationState next = replicator_step(x, {1.0, 1.0, 1.0}, 0.1);
        for (std::size_t k = 0; k < 3; ++k)
            CHECK_EQ(next.shares[k], doctest::Approx(x.shares[k]).epsilon(1e-15));
        CHECK_EQ(next.time, doctest::Approx(0.1));
    }
    SUBCASE("hand-computed Euler step") {
        const PopulationState x{{0.5, 0.5}, 0.0};
        const PopulationState next = replicator_step(x, {1.0, 0.0}, 0.1);
        // xdot = (0.25, -0.25): shares (0.525, 0.475) after renormalization.
        CHECK_EQ(next.shares[0], doctest::Approx(0.525).epsilon(1e-12));
        CHECK_EQ(next.shares[1], doctest::Approx(0.475).epsilon(1e-12));
    }
    SUBCASE("extinct types never revive") {
        const PopulationState x{{0.0, 0.6, 0.4}, 0.0};
        const PopulationState next = replicator_step(x, {100.0, 1.0, 0.0}, 0.05);
        CHECK_EQ(next.shares[0], 0.0);
    }
    SUBCASE("oversized steps are rejected") {
        const PopulationState x{{0.5, 0.5}, 0.0};
        CHECK_THROWS_WITH_AS(replicator_step(x, {10.0, -10.0}, 0.5), "step too large",
                             Error);
        CHECK_THROWS_AS(replicator_step(x, {1.0, 0.0}, 0.0), Error);
    }
    SUBCASE("simplex conserved to 1e-12 across many steps") {
        PopulationState x{{0.25, 0.35, 0.40}, 0.0};
        StableRng rng(83);
        for (int i = 0; i < 5000; ++i) {
            std::vector<double> f{rng.uniform(), rng.uniform(), rng.uniform()};
            x = replicator_step(x, f, 0.05);
            double sum = 0.0;
            for (double s : x.shares) sum += s;
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("two-type replicator follows the closed-form logistic solution") {
    // Constant fitness gap g: x(t) = x0 e^{gt} / (x0 e^{gt} + 1 - x0).
    const double gap = 1.0;
    const double dt = 1e-3;
    const double x0 = 0.2;
    PopulationState x{{x0, 1.0 - x0}, 0.0};
    const std::vector<double> f{gap, 0.0};
    double worst = 0.0;
    for (int step = 1; step <= 10000; ++step) {
        x = replicator_step(x, f, dt);
        const double t = x.time;
        const double exact = x0 * std::exp(gap * t) / (x0 * std::exp(gap * t) + 1.0 - x0);
        worst = std::max(worst, std::abs(x.shares[0] - exact));
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("fixed points have vanishing motion") {
    // Interior rest point of a 2-type game: equal fitness.
    const PopulationState x{{0.3, 0.7}, 0.0};
    const PopulationState next = replicator_step(x, {0.4, 0.4}, 0.05);
    CHECK(std::abs(next.shares[0] - x.shares[0]) < 1e-12);
    CHECK(std::abs(next.shares[1] - x.shares[1]) < 1e-12);
}

TEST_CASE("mean fitness is non-decreasing in the constant-fitness case") {
    PopulationState x{{0.3, 0.7}, 0.0};
    const std::vector<double> f{0.9, 0.2};
    double prev = x.shares[0] * f[0] + x.shares[1] * f[1];
    for (int i = 0; i < 2000; ++i) {
        x = replicator_step(x, f, 0.05);
        const double mean = x.shares[0] * f[0] + x.shares[1] * f[1];
        CHECK(mean >= prev - 1e-12);
        prev = mean;
    }
}

TEST_CASE("integrate_replicator") {
    const GameSpec game = examples::oncology_game();

    SUBCASE("no events, flat payoffs: constant trajectory") {
        GameSpec flat = game;
        for (auto& v : flat.u_physician.flat()) v = 0.5;
        const PopulationState x0{{0.35, 0.45, 0.20}, 0.0};
        const auto trajectory =
            integrate_replicator(x0, flat, fixed_action_policy(0), 10.0, 0.1);
        CHECK_EQ(trajectory.states.size(), 101);
        for (const auto& s : trajectory.states)
            for (std::size_t k = 0; k < 3; ++k)
                CHECK_EQ(s.shares[k], doctest::Approx(x0.shares[k]).epsilon(1e-12));
    }
    SUBCASE("every state stays on the simplex") {
        const PopulationState x0{{0.35, 0.45, 0.20}, 0.0};
        const auto trajectory =
            integrate_replicator(x0, game, stackelberg_policy(), 50.0, 0.05);
        for (const auto& s : trajectory.states) {
            CHECK(validate_population(s).ok);
            double sum = 0.0;
            for (double v : s.shares) sum += v;
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
    SUBCASE("competitor entry flips the ordering toward the formulary type") {
        const auto scenario = examples::competitor_entry_scenario();
        const auto trajectory = integrate_replicator(
            scenario.population.initial, scenario.sim.game,
            fixed_action_policy(scenario.population.policy_action),
            scenario.population.horizon, scenario.population.dt,
            scenario.population.events);
        REQUIRE_EQ(trajectory.events.size(), 1);
        CHECK_EQ(trajectory.events[0].id, "competitor_entry");

        // Strictly increasing after the event, dominant by the end.
        bool rising = true;
        for (std::size_t i = 0; i + 1 < trajectory.states.size(); ++i) {
            if (trajectory.states[i].time < 100.0) continue;
            if (trajectory.states[i + 1].shares[2] <= trajectory.states[i].shares[2])
                rising = false;
        }
        CHECK(rising);
        const auto& final_shares = trajectory.states.back().shares;
        CHECK(final_shares[2] > final_shares[0]);
        CHECK(final_shares[2] > final_shares[1]);
    }
}

TEST_CASE("ess audit") {
    const GameSpec game = examples::oncology_game();

    SUBCASE("monomorphic population on the fittest type passes") {
        // Under the clinical action, type 1 has strictly top fitness (0.85).
        const PopulationState star{{1.0, 0.0, 0.0}, 0.0};
        std::vector<PopulationState> mutants = {{{0.0, 1.0, 0.0}, 0.0},
                                                {{0.0, 0.0, 1.0}, 0.0},
                                                {{0.5, 0.25, 0.25}, 0.0}};
        const auto report = ess_audit(star, game, 0, mutants);
        CHECK(report.equilibrium_ok);
        CHECK(report.stability_ok);
        for (const auto& s : report.stability) CHECK(s.slack > 0.0);
    }
    SUBCASE("uniform population with a strictly fitter type fails condition (i)") {
        const PopulationState uniform{{1.0 / 3, 1.0 / 3, 1.0 / 3}, 0.0};
        const auto report = ess_audit(uniform, game, 0, {});
        CHECK_FALSE(report.equilibrium_ok);
        bool found_negative = false;
        for (const auto& s : report.equilibrium)
            if (!s.ok && s.slack < 0.0) found_negative = true;
        CHECK(found_negative);
    }
    SUBCASE("interior fixed point passes with zero slack") {
        GameSpec flat = game;
        for (auto& v : flat.u_physician.flat()) v = 0.5;
        const PopulationState interior{{0.4, 0.6, 0.0}, 0.0};
        const auto report = ess_audit(interior, flat, 0, {});
        CHECK(report.equilibrium_ok);
        for (const auto& s : report.equilibrium)
            CHECK_EQ(s.slack, doctest::Approx(0.0).epsilon(1e-12));
    }
}
