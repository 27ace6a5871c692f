#include <doctest.h>

#include <cmath>

#include "egpf/examples.hpp"
#include "egpf/info.hpp"
#include "egpf/rng.hpp"

using namespace egpf;

namespace {

ChannelMatrix bsc(double p) {
    ChannelMatrix c(2, 2);
    c(0, 0) = 1.0 - p;
    c(0, 1) = p;
    c(1, 0) = p;
    c(1, 1) = 1.0 - p;
    return c;
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

ChannelMatrix random_channel(StableRng& rng, std::size_t m, std::size_t l) {
    ChannelMatrix c(m, l);
    for (std::size_t x = 0; x < m; ++x) {
        double z = 0.0;
        for (std::size_t y = 0; y < l; ++y) {
            c(x, y) = rng.uniform(0.01, 1.0);
            z += c(x, y);
        }
        for (std::size_t y = 0; y < l; ++y) c(x, y) /= z;
    }
    return c;
}

} // namespace

TEST_CASE("mutual information") {
    SUBCASE("identical rows carry nothing") {
        ChannelMatrix c(3, 2);
        for (int x = 0; x < 3; ++x) {
            c(x, 0) = 0.3;
            c(x, 1) = 0.7;
        }
        CHECK_EQ(mutual_information({0.2, 0.5, 0.3}, c), 0.0);
    }
    SUBCASE("identity channel with uniform input") {
        ChannelMatrix c(4, 4);
        for (int x = 0; x < 4; ++x) c(x, x) = 1.0;
        CHECK_EQ(mutual_information(std::vector<double>(4, 0.25), c),
                 doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("binary symmetric channel, analytic value") {
        CHECK_EQ(mutual_information({0.5, 0.5}, bsc(0.1)),
                 doctest::Approx(1.0 - binary_entropy(0.1)).epsilon(1e-12));
    }
}

TEST_CASE("channel_capacity on analytic channels") {
    SUBCASE("noiseless binary channel is exactly one bit") {
        const auto result = channel_capacity(bsc(0.0));
        CHECK_EQ(result.capacity_bits, 1.0);
        CHECK(result.converged);
        CHECK_EQ(result.input_dist, std::vector<double>{0.5, 0.5});
    }
    SUBCASE("BSC capacities match 1 - H_b(p)") {
        for (double p : {0.01, 0.1, 0.25, 0.49}) {
            const auto result = channel_capacity(bsc(p), 1e-9);
            CHECK(result.converged);
            CHECK_EQ(result.capacity_bits,
                     doctest::Approx(1.0 - binary_entropy(p)).epsilon(1e-6));
        }
    }
    SUBCASE("binary erasure channel capacity is 1 - p") {
        const double p = 0.3;
        ChannelMatrix c(2, 3);
        c(0, 0) = 1.0 - p;
        c(0, 2) = p;
        c(1, 1) = 1.0 - p;
        c(1, 2) = p;
        const auto result = channel_capacity(c, 1e-10);
        CHECK_EQ(result.capacity_bits, doctest::Approx(1.0 - p).epsilon(1e-7));
    }
    SUBCASE("row-identical channel has zero capacity") {
        ChannelMatrix c(3, 2);
        for (int x = 0; x < 3; ++x) {
            c(x, 0) = 0.4;
            c(x, 1) = 0.6;
        }
        const auto result = channel_capacity(c);
        CHECK_EQ(result.capacity_bits, doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("capacity iterates are monotone and dominate tested inputs") {
    StableRng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const ChannelMatrix c = random_channel(rng, 2 + trial % 4, 2 + trial % 3);
        const auto result = channel_capacity(c, 1e-9);
        CHECK(result.converged);
        for (std::size_t i = 1; i < result.lower_bounds.size(); ++i)
            CHECK(result.lower_bounds[i] >= result.lower_bounds[i - 1] - 1e-12);

        CHECK(result.capacity_bits >=
              mutual_information(result.input_dist, c) - 1e-9);
        for (int probe = 0; probe < 10; ++probe) {
            std::vector<double> q(c.num_inputs);
            double z = 0.0;
            for (auto& v : q) {
                v = rng.uniform(0.01, 1.0);
                z += v;
            }
            for (auto& v : q) v /= z;
            CHECK(result.capacity_bits >= mutual_information(q, c) - 1e-9);
        }
    }
}

TEST_CASE("channel_capacity reports non-convergence") {
    // Z-channel: the optimal input is non-uniform, so two iterations at an
    // unreachable tolerance cannot close the bound gap.
    ChannelMatrix z(2, 2);
    z(0, 0) = 1.0;
    z(1, 0) = 0.3;
    z(1, 1) = 0.7;
    const auto result = channel_capacity(z, 1e-15, 2);
    CHECK_FALSE(result.converged);
    CHECK_EQ(result.iterations, 2);

    const auto full = channel_capacity(z, 1e-10);
    CHECK(full.converged);
    CHECK(full.capacity_bits > result.capacity_bits - 1e-12);
    CHECK(full.input_dist[0] > 0.5); // the noiseless input carries more mass
}

TEST_CASE("information gain") {
    const GameSpec game = examples::oncology_game();
    const TypeChannels channels = qre_channels(game);
    const Belief prior = game.prior;

    SUBCASE("identical per-type channels reveal nothing") {
        TypeChannels same;
        same.per_type = {channels.per_type[0], channels.per_type[0], channels.per_type[0]};
        CHECK_EQ(information_gain(prior, 1, same), doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("deterministic disjoint channels reveal everything") {
        TypeChannels disjoint;
        for (int k = 0; k < 3; ++k) {
            ChannelMatrix c(1, 3);
            c(0, k) = 1.0;
            disjoint.per_type.push_back(c);
        }
        CHECK_EQ(information_gain(prior, 0, disjoint),
                 doctest::Approx(entropy(prior)).epsilon(1e-12));
    }
    SUBCASE("matches the brute-force joint-distribution oracle") {
        // Oracle: I(Theta; D) via the full joint P(theta, d) = mu_k P(d|a,k).
        for (int action = 0; action < 3; ++action) {
            double oracle = 0.0;
            std::vector<double> marginal(game.num_responses(), 0.0);
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t d = 0; d < game.num_responses(); ++d)
                    marginal[d] += prior[k] * channels.per_type[k](action, d);
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t d = 0; d < game.num_responses(); ++d) {
                    const double joint = prior[k] * channels.per_type[k](action, d);
                    if (joint > 0.0)
                        oracle += joint * std::log2(joint / (prior[k] * marginal[d]));
                }
            CHECK_EQ(information_gain(prior, action, channels),
                     doctest::Approx(oracle).epsilon(1e-12));
        }
    }
    SUBCASE("bounded by entropy and the type-to-response channel capacity") {
        StableRng rng(43);
        for (int trial = 0; trial < 50; ++trial) {
            TypeChannels random;
            for (int k = 0; k < 3; ++k) {
                random.per_type.push_back(random_channel(rng, 2, 3));
            }
            std::vector<double> w(3);
            double z = 0.0;
            for (auto& v : w) {
                v = rng.uniform(0.05, 1.0);
                z += v;
            }
            for (auto& v : w) v /= z;
            const Belief mu(w);
            for (int a = 0; a < 2; ++a) {
                const double ig = information_gain(mu, a, random);
                CHECK(ig >= 0.0);
                CHECK(ig <= entropy(mu) + 1e-12);
                // IG is I(Theta; D) at input mu, so the capacity of the
                // K x L channel theta -> d at this action dominates it.
                ChannelMatrix type_channel(3, 3);
                for (std::size_t k = 0; k < 3; ++k)
                    for (std::size_t d = 0; d < 3; ++d)
                        type_channel(k, d) = random.per_type[k](a, d);
                const auto cap = channel_capacity(type_channel, 1e-9);
                CHECK(ig <= cap.capacity_bits + 1e-7);
            }
        }
    }
}

TEST_CASE("fisher information") {
    SUBCASE("constant likelihood gives the zero matrix") {
        const auto family = [](const TypeVector&) { return std::vector<double>{0.4, 0.6}; };
        const FisherMatrix fisher = fisher_information(TypeVector{}, family);
        CHECK_EQ(fisher.m.cwiseAbs().maxCoeff(), 0.0);
    }
    SUBCASE("logistic family matches the Bernoulli oracle") {
        // L=2 QRE with utility gap linear in gamma: P(d1) = sigmoid(tau*gamma).
        const double tau = 3.0;
        const auto family = qre_family(
            [](const TypeVector& t) { return std::vector<double>{t.gamma, 0.0}; }, tau);
        TypeVector theta;
        theta.gamma = 0.4;
        const FisherMatrix fisher = fisher_information(theta, family);
        const double p = 1.0 / (1.0 + std::exp(-tau * theta.gamma));
        const double oracle = tau * tau * p * (1.0 - p); // (d(tau*gamma)/dgamma)^2 = tau^2
        CHECK_EQ(fisher.m(5, 5), doctest::Approx(oracle).epsilon(1e-6));
        // All other entries vanish.
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                if (i != 5 || j != 5) CHECK_EQ(fisher.m(i, j), doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("QRE families are symmetric PSD") {
        StableRng rng(47);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> slope(3), offset(3);
            for (int d = 0; d < 3; ++d) {
                slope[d] = rng.uniform(-1.0, 1.0);
                offset[d] = rng.uniform(-0.5, 0.5);
            }
            const auto family = qre_family(
                [slope, offset](const TypeVector& t) {
                    std::vector<double> u(3);
                    for (int d = 0; d < 3; ++d)
                        u[d] = offset[d] + slope[d] * (t.alpha_e - t.beta * 0.3 + t.delta);
                    return u;
                },
                2.0);
            TypeVector theta = sample_type_set(1, 0.01, rng.next_u64()).types[0];
            const FisherMatrix fisher = fisher_information(theta, family);
            CHECK(fisher.symmetric(1e-9));
            CHECK(fisher.min_eigenvalue() >= -1e-9);
        }
    }
    SUBCASE("non-positive likelihood is rejected") {
        const auto family = [](const TypeVector& t) {
            return std::vector<double>{t.gamma, 1.0 - t.gamma};
        };
        TypeVector theta;
        theta.gamma = 0.0; // perturbation crosses zero
        CHECK_THROWS_WITH_AS(fisher_information(theta, family), "non-positive likelihood",
                             Error);
    }
}

TEST_CASE("d-optimal action selection") {
    const double tau = 2.0;
    auto linear_family = [tau](double slope) {
        return qre_family(
            [slope](const TypeVector& t) {
                return std::vector<double>{slope * t.gamma, 0.0};
            },
            tau);
    };

    SUBCASE("single action returns that action") {
        CHECK_EQ(d_optimal_action(TypeVector{}, {linear_family(1.0)}), 0);
    }
    SUBCASE("uninformative action loses") {
        const auto constant = [](const TypeVector&) { return std::vector<double>{0.5, 0.5}; };
        CHECK_EQ(d_optimal_action(TypeVector{}, {constant, linear_family(1.0)}), 1);
    }
    SUBCASE("det mode agrees with a brute-force determinant comparison") {
        TypeVector theta;
        theta.gamma = 0.3;
        const std::vector<LikelihoodFamily> actions = {
            linear_family(0.5), linear_family(2.0), linear_family(1.0)};
        double best = -1.0;
        int best_index = 0;
        for (std::size_t a = 0; a < actions.size(); ++a) {
            const double det = fisher_information(theta, actions[a]).projected_determinant();
            if (det > best) {
                best = det;
                best_index = static_cast<int>(a);
            }
        }
        CHECK_EQ(d_optimal_action(theta, actions), best_index);
        CHECK_EQ(best_index, 1); // steepest utility gap is most informative
    }
    SUBCASE("trace mode weighs the posterior covariance") {
        TypeVector theta;
        theta.gamma = 0.3;
        Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(8, 8);
        sigma(5, 5) = 1.0; // uncertainty concentrated on gamma
        const std::vector<LikelihoodFamily> actions = {linear_family(0.5), linear_family(2.0)};
        CHECK_EQ(d_optimal_action(theta, actions, DesignMode::kTraceApprox, &sigma), 1);
    }
}

TEST_CASE("rate-distortion curve") {
    SUBCASE("zero distortion matrix needs zero rate") {
        const std::vector<double> d(3 * 3, 0.0);
        const auto curve =
            rate_distortion_curve(Belief::uniform(3), 3, d, {0.1, 1.0, 10.0});
        for (const auto& p : curve) {
            CHECK_EQ(p.rate_bits, doctest::Approx(0.0).epsilon(1e-12));
            CHECK_EQ(p.distortion, doctest::Approx(0.0).epsilon(1e-12));
        }
    }
    SUBCASE("one-hot instance hits (D=0, R=log2 3) at steep slopes") {
        std::vector<double> d(3 * 3, 1.0);
        for (int i = 0; i < 3; ++i) d[i * 3 + i] = 0.0;
        std::vector<double> slopes;
        for (double s = 0.05; s <= 40.0; s *= 1.5) slopes.push_back(s);
        const auto curve = rate_distortion_curve(Belief::uniform(3), 3, d, slopes);

        CHECK_EQ(curve.front().rate_bits, doctest::Approx(std::log2(3.0)).epsilon(1e-3));
        CHECK_EQ(curve.front().distortion, doctest::Approx(0.0).epsilon(1e-6));

        // Shallow slopes give up on identification entirely.
        CHECK_EQ(curve.back().rate_bits, doctest::Approx(0.0).epsilon(1e-2));

        // Non-increasing and convex in D over the returned grid.
        for (std::size_t i = 1; i < curve.size(); ++i) {
            CHECK(curve[i].distortion >= curve[i - 1].distortion - 1e-12);
            CHECK(curve[i].rate_bits <= curve[i - 1].rate_bits + 1e-9);
        }
        for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
            const double dx1 = curve[i].distortion - curve[i - 1].distortion;
            const double dx2 = curve[i + 1].distortion - curve[i].distortion;
            if (dx1 < 1e-9 || dx2 < 1e-9) continue;
            const double s1 = (curve[i].rate_bits - curve[i - 1].rate_bits) / dx1;
            const double s2 = (curve[i + 1].rate_bits - curve[i].rate_bits) / dx2;
            CHECK(s2 >= s1 - 1e-6); // slopes non-decreasing toward zero
        }
    }
    SUBCASE("rate is zero beyond the unconditional optimum") {
        // Content c0 is uniformly best; tiny slopes should find D ~ min_c E[d].
        std::vector<double> d{0.1, 0.9, 0.2, 0.8, 0.15, 0.85};
        const auto curve = rate_distortion_curve(Belief::uniform(2), 3, d, {1e-4});
        CHECK_EQ(curve[0].rate_bits, doctest::Approx(0.0).epsilon(1e-6));
    }
    SUBCASE("invalid distortion rejected") {
        CHECK_THROWS_AS(
            rate_distortion_curve(Belief::uniform(2), 2, {0.0, -1.0, 1.0, 0.0}, {1.0}),
            Error);
    }
}

TEST_CASE("personalization distortion assembles the weighted components") {
    const std::vector<double> rel{1.0, 0.2, 0.5, 1.0};
    const std::vector<double> reg{0.1, 0.3};
    const std::vector<double> priv{0.0, 0.4, 0.2, 0.0};
    const auto d = personalization_distortion(rel, reg, priv, 2, 2, 0.5, 2.0);
    CHECK_EQ(d[0], doctest::Approx(0.0 + 0.05 + 0.0).epsilon(1e-12));
    CHECK_EQ(d[1], doctest::Approx(0.8 + 0.15 + 0.8).epsilon(1e-12));
    CHECK_EQ(d[2], doctest::Approx(0.5 + 0.05 + 0.4).epsilon(1e-12));
    CHECK_EQ(d[3], doctest::Approx(0.0 + 0.15 + 0.0).epsilon(1e-12));
}

TEST_CASE("channel validation") {
    ChannelMatrix bad(2, 2);
    bad(0, 0) = 0.7;
    bad(0, 1) = 0.7;
    bad(1, 0) = 1.0;
    CHECK_FALSE(validate_channel(bad).ok);
    CHECK(validate_channel(bsc(0.2)).ok);
}

TEST_CASE("qre channel of the worked example reproduces the likelihood column") {
    const GameSpec game = examples::oncology_game();
    const TypeChannels channels = qre_channels(game);
    CHECK_EQ(channels.per_type[0](1, 1), doctest::Approx(0.65).epsilon(1e-12));
    CHECK_EQ(channels.per_type[1](1, 1), doctest::Approx(0.20).epsilon(1e-12));
    CHECK_EQ(channels.per_type[2](1, 1), doctest::Approx(0.40).epsilon(1e-12));
}
