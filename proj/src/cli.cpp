#include "egpf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <utility>

#include "egpf/examples.hpp"

namespace egpf::cli {

namespace {

struct GoldenCheck {
    std::string id;
    std::string expected;
    std::string measured;
    double tolerance = 0.0;
    bool passed = false;
};

// Registry of named checks; registration is free, evaluation is deferred so
// --list can enumerate without running anything.
class GoldenSuite {
public:
    void numeric(std::string id, std::function<double()> measure, double expected,
                 double tol) {
        definitions_.push_back(
            {std::move(id), [measure = std::move(measure), expected, tol] {
                 GoldenCheck check;
                 check.expected = format_double(expected);
                 const double value = measure();
                 check.measured = format_double(value);
                 check.tolerance = tol;
                 check.passed = std::abs(value - expected) <= tol;
                 return check;
             }});
    }

    void boolean(std::string id, std::function<bool()> measure, std::string describe) {
        definitions_.push_back(
            {std::move(id), [measure = std::move(measure), describe = std::move(describe)] {
                 GoldenCheck check;
                 check.expected = describe;
                 const bool value = measure();
                 check.measured = value ? "holds" : "violated";
                 check.passed = value;
                 return check;
             }});
    }

    void evaluate() {
        checks_.clear();
        checks_.reserve(definitions_.size());
        for (const auto& def : definitions_) {
            GoldenCheck check = def.eval();
            check.id = def.id;
            checks_.push_back(std::move(check));
        }
    }

    bool all_passed() const {
        for (const auto& c : checks_)
            if (!c.passed) return false;
        return true;
    }

    std::string table() const {
        std::ostringstream os;
        for (const auto& c : checks_) {
            os << (c.passed ? "PASS" : "FAIL") << "  " << c.id << ": measured=" << c.measured
               << " expected=" << c.expected;
            if (c.tolerance > 0.0) os << " tol=" << format_double(c.tolerance);
            os << "\n";
        }
        return os.str();
    }

    Json to_json() const {
        Json rows = Json::array();
        for (const auto& c : checks_)
            rows.push_back(Json{{"id", c.id},
                                {"expected", c.expected},
                                {"measured", c.measured},
                                {"tolerance", c.tolerance},
                                {"passed", c.passed}});
        return rows;
    }

    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        for (const auto& d : definitions_) out.push_back(d.id);
        return out;
    }

private:
    struct Definition {
        std::string id;
        std::function<GoldenCheck()> eval;
    };
    std::vector<Definition> definitions_;
    std::vector<GoldenCheck> checks_;
};

PopulationPolicy make_policy(const PopulationSection& section) {
    if (section.policy_kind == "stackelberg") return stackelberg_policy();
    if (section.policy_kind == "fixed") return fixed_action_policy(section.policy_action);
    throw Error("unknown population policy '" + section.policy_kind + "'");
}

void require_valid_population(const ScenarioFile& scenario) {
    require_valid(validate_population(scenario.population.initial), "population x0");
    if (scenario.population.policy_kind != "fixed" &&
        scenario.population.policy_kind != "stackelberg")
        throw Error("unknown population policy '" + scenario.population.policy_kind + "'");
    if (scenario.population.policy_kind == "fixed" &&
        (scenario.population.policy_action < 0 ||
         scenario.population.policy_action >=
             static_cast<int>(scenario.sim.game.num_actions())))
        throw Error("population policy action out of range");
}

void register_golden_checks(GoldenSuite& suite, const GameSpec& game) {
    suite.boolean(
        "prior_valid", [game] { return validate_belief(game.prior).ok; },
        "prior (0.35,0.45,0.20) valid");

    const double expected_utils[3] = {0.555, 0.605, 0.440};
    for (int a = 0; a < 3; ++a)
        suite.numeric(
            "expected_utility_" + game.pharma_actions[a],
            [game, a] { return expected_pharma_utility(game, a, game.prior); },
            expected_utils[a], 1e-9);

    suite.boolean(
        "initial_action_kol",
        [game] { return solve_stackelberg(game, game.prior).action == 1; },
        "commitment action is kol_webinar");
    suite.numeric(
        "initial_action_payoff",
        [game] { return solve_stackelberg(game, game.prior).payoff; }, 0.605, 1e-9);
    suite.boolean(
        "bne_action_kol", [game] { return solve_bne(game).pharma_strategy[1] == 1.0; },
        "BNE action is kol_webinar");

    const double expected_posterior[3] = {0.5723, 0.2264, 0.2013};
    for (int k = 0; k < 3; ++k)
        suite.numeric(
            "posterior_theta" + std::to_string(k + 1),
            [game, k] { return bayes_update(game.prior, {0.65, 0.20, 0.40})[k]; },
            expected_posterior[k], 5e-4);

    auto updated = [game] {
        return solve_stackelberg(game, bayes_update(game.prior, {0.65, 0.20, 0.40}));
    };
    suite.boolean(
        "updated_action_clinical", [updated] { return updated().action == 0; },
        "post-update action switches to clinical_deep_dive");
    suite.numeric(
        "updated_action_payoff", [updated] { return updated().payoff; }, 0.666, 5e-4);

    suite.boolean(
        "best_response_a1_theta1", [game] { return best_response(game, 0, 0) == 0; },
        "theta1 adopts under clinical_deep_dive");
    suite.numeric(
        "best_response_a1_theta1_payoff", [game] { return game.u_physician(0, 0, 0); },
        0.85, 1e-12);
    suite.numeric(
        "point_mass_theta3_a3",
        [game] { return expected_pharma_utility(game, 2, Belief::point_mass(3, 2)); },
        0.95, 1e-12);

    const double expected_fitness[3] = {0.85, 0.30, 0.25};
    for (int k = 0; k < 3; ++k)
        suite.numeric(
            "fitness_a1_theta" + std::to_string(k + 1),
            [game, k] {
                const PopulationState pop{{0.35, 0.45, 0.20}, 0.0};
                return fitness(pop, game, 0).per_type[k];
            },
            expected_fitness[k], 1e-12);

    // Worked-example replay: kol_webinar, scripted defer, then clinical.
    auto replay = [] {
        const auto scenario = examples::oncology_replay_scenario();
        LoopState state = init_loop(scenario.sim, Policy::kEgpf, 0);
        const StepRecord first = egpf_step(state, scenario.sim);
        const StepRecord second = egpf_step(state, scenario.sim);
        return std::pair{first, second};
    };
    suite.boolean(
        "replay_round1_action",
        [replay] {
            const auto [first, second] = replay();
            return first.action == 1 && first.response == 1;
        },
        "round 1 plays kol_webinar, observes defer");
    suite.numeric(
        "replay_posterior_theta1", [replay] { return replay().first.posterior[0]; }, 0.572,
        5e-4);
    suite.boolean(
        "replay_round2_action", [replay] { return replay().second.action == 0; },
        "round 2 switches to clinical_deep_dive");

    // Exploration schedule.
    suite.numeric(
        "epsilon_t1_k3", [] { return epsilon_schedule(1, 3); }, 1.0, 0.0);
    suite.boolean(
        "epsilon_decays", [] { return epsilon_schedule(1000000, 3) < 0.01; },
        "epsilon below 0.01 by t=1e6");
    suite.boolean(
        "epsilon_nonincreasing",
        [] {
            double prev = epsilon_schedule(3, 3);
            for (int t = 4; t <= 2000; ++t) {
                const double e = epsilon_schedule(t, 3);
                if (e > prev + 1e-15) return false;
                prev = e;
            }
            return true;
        },
        "schedule non-increasing for t >= 3");

    // Tuned operating defaults.
    suite.numeric(
        "default_tau", [] { return defaults::kRationality; }, 3.0, 0.0);
    suite.numeric(
        "default_window", [] { return double(defaults::kDriftWindow); }, 30.0, 0.0);
    suite.numeric(
        "default_tau_drift", [] { return defaults::kDriftThreshold; }, 0.15, 0.0);
    suite.numeric(
        "default_info_gain_weight", [] { return defaults::kInfoGainWeight; }, 0.3, 0.0);
    suite.numeric(
        "default_num_types", [] { return double(defaults::kNumTypes); }, 5.0, 0.0);

    suite.boolean(
        "drift_quiet_on_model",
        [game] {
            const TypeChannels channels = qre_channels(game);
            StableRng rng(1234);
            InteractionHistory history;
            for (int t = 1; t <= defaults::kDriftWindow; ++t)
                history.append(1, rng.categorical(channels.per_type[0].row(1)), t);
            const DriftReport report = drift_detect(
                history, channels, Belief::point_mass(3, 0), defaults::kDriftWindow);
            return !report.triggered;
        },
        "no trigger on model-consistent window");

    // Population shift after competitor entry.
    auto entry_trajectory = [] {
        const auto scenario = examples::competitor_entry_scenario();
        return integrate_replicator(scenario.population.initial, scenario.sim.game,
                                    make_policy(scenario.population),
                                    scenario.population.horizon, scenario.population.dt,
                                    scenario.population.events);
    };
    suite.boolean(
        "population_shift_direction",
        [entry_trajectory] {
            const auto trajectory = entry_trajectory();
            for (std::size_t i = 0; i + 1 < trajectory.states.size(); ++i) {
                if (trajectory.states[i].time < 100.0) continue;
                if (trajectory.states[i + 1].shares[2] <= trajectory.states[i].shares[2])
                    return false;
            }
            return true;
        },
        "formulary share strictly increasing after entry");
    suite.boolean(
        "population_shift_dominant",
        [entry_trajectory] {
            const auto trajectory = entry_trajectory();
            const auto& last = trajectory.states.back().shares;
            return last[2] > last[0] && last[2] > last[1];
        },
        "formulary share dominant at horizon");

    suite.boolean(
        "sheaf_consistency_small",
        [] {
            const auto poset = ScalePoset::standard();
            const std::map<std::string, Belief> beliefs = {
                {"interaction", Belief({0.72, 0.18, 0.10})},
                {"weekly", Belief({0.70, 0.20, 0.10})},
                {"monthly", Belief({0.71, 0.19, 0.10})},
                {"quarterly", Belief({0.73, 0.17, 0.10})},
            };
            return sheaf_loss(beliefs, poset) < 0.05;
        },
        "consistent multi-scale beliefs score below 0.05");

    suite.boolean(
        "commitment_dominance",
        [] {
            StableRng rng(99);
            for (int trial = 0; trial < 100; ++trial) {
                GameSpec g = examples::oncology_game();
                for (auto& v : g.u_pharma.flat()) v = rng.uniform();
                for (auto& v : g.u_physician.flat()) v = rng.uniform();
                const auto stackelberg = solve_stackelberg(g, g.prior);
                if (stackelberg.payoff < leader_payoff(g, solve_bne(g))) return false;
            }
            return true;
        },
        "leader payoff >= simultaneous payoff on 100 random games");
}

} // namespace

CommandResult cmd_run(const std::filesystem::path& scenario_path,
                      const std::filesystem::path& out_dir,
                      std::optional<int> replications_override,
                      std::optional<std::uint64_t> seed_override) {
    CommandResult result;
    ScenarioFile scenario;
    try {
        scenario = load_scenario(scenario_path);
        if (seed_override) scenario.sim.seed = *seed_override;
        if (replications_override) scenario.sim.replications = *replications_override;
        require_valid(validate_scenario(scenario.sim), "scenario '" + scenario.sim.name + "'");
        if (scenario.has_population) require_valid_population(scenario);
    } catch (const Error& e) {
        result.exit_code = 2;
        result.summary = e.what();
        return result;
    }

    try {
        const RunMetrics metrics = run_experiment(scenario.sim, scenario.sim.replications);

        write_text_file(out_dir / "steps.csv", steps_csv(metrics));
        result.artifacts.push_back(out_dir / "steps.csv");

        std::string trace = "t,action,response,explored,epsilon,entropy_bits,"
                            "predicted_info_gain,realized_log_gain,instant_regret,"
                            "cum_regret,log_loss,drift_statistic,drift_triggered,"
                            "recalibrated,plan_density,plan_length,plan_hedging\n";
        for (const auto& r : metrics.trace) {
            trace += std::to_string(r.t) + "," + std::to_string(r.action) + "," +
                     std::to_string(r.response) + "," + (r.explored ? "1" : "0") + "," +
                     format_double(r.epsilon) + "," + format_double(r.entropy_bits) + "," +
                     format_double(r.predicted_info_gain) + "," +
                     format_double(r.realized_log_gain) + "," +
                     format_double(r.instantaneous_regret) + "," +
                     format_double(r.cumulative_regret) + "," +
                     format_double(r.log_loss_true_type) + "," +
                     format_double(r.drift_statistic) + "," +
                     (r.drift_triggered ? "1" : "0") + "," + (r.recalibrated ? "1" : "0") +
                     "," + evidence_density_name(r.plan.evidence_density) + "," +
                     std::to_string(r.plan.length_words) + "," +
                     (r.plan.hedging ? "1" : "0") + "\n";
        }
        write_text_file(out_dir / "trace.csv", trace);
        result.artifacts.push_back(out_dir / "trace.csv");

        write_text_file(
            out_dir / "summary.json",
            run_summary_json(scenario, metrics, scenario.sim.replications).dump(2) + "\n");
        result.artifacts.push_back(out_dir / "summary.json");

        if (scenario.has_population) {
            const auto trajectory = integrate_replicator(
                scenario.population.initial, scenario.sim.game,
                make_policy(scenario.population), scenario.population.horizon,
                scenario.population.dt, scenario.population.events);
            write_text_file(out_dir / "trajectory.csv", trajectory_csv(trajectory));
            result.artifacts.push_back(out_dir / "trajectory.csv");
        }

        std::string actions;
        const std::size_t shown = std::min<std::size_t>(metrics.trace.size(), 12);
        for (std::size_t i = 0; i < shown; ++i) {
            if (!actions.empty()) actions += " -> ";
            actions += scenario.sim.game.pharma_actions[metrics.trace[i].action];
        }
        if (metrics.trace.size() > shown) actions += " -> ...";
        result.summary = "scenario '" + scenario.sim.name + "': " +
                         std::to_string(scenario.sim.replications) + " replication(s), " +
                         std::to_string(scenario.sim.horizon) + " step(s); actions " + actions;
    } catch (const std::exception& e) {
        result.exit_code = 3;
        result.summary = std::string("runtime failure: ") + e.what();
    }
    return result;
}

Json golden_report(const GameSpec& game) {
    GoldenSuite suite;
    register_golden_checks(suite, game);
    suite.evaluate();
    return suite.to_json();
}

CommandResult cmd_verify_paper(const std::filesystem::path& out_dir, bool list_only) {
    CommandResult result;
    GoldenSuite suite;
    register_golden_checks(suite, examples::oncology_game());

    if (list_only) {
        std::string listing;
        for (const auto& id : suite.ids()) listing += id + "\n";
        result.summary = listing + std::to_string(suite.ids().size()) + " checks";
        return result;
    }

    try {
        suite.evaluate();
    } catch (const std::exception& e) {
        result.exit_code = 3;
        result.summary = std::string("runtime failure: ") + e.what();
        return result;
    }

    write_text_file(out_dir / "verify_report.json", suite.to_json().dump(2) + "\n");
    result.artifacts.push_back(out_dir / "verify_report.json");
    result.exit_code = suite.all_passed() ? 0 : 1;
    result.summary = suite.table() + (suite.all_passed() ? "all golden checks passed"
                                                         : "golden check FAILURES present");
    return result;
}

CommandResult cmd_capacity(const std::filesystem::path& scenario_path,
                           const std::filesystem::path& out_dir) {
    CommandResult result;
    ScenarioFile scenario;
    try {
        scenario = load_scenario(scenario_path);
        require_valid(validate_game(scenario.sim.game), "scenario game");
    } catch (const Error& e) {
        result.exit_code = 2;
        result.summary = e.what();
        return result;
    }

    try {
        const TypeChannels channels = qre_channels(scenario.sim.game);
        std::string csv = "type,capacity_bits,best_input\n";
        Json summary = Json::array();
        std::ostringstream line;
        for (std::size_t k = 0; k < channels.num_types(); ++k) {
            const auto cap = channel_capacity(channels.per_type[k]);
            int best_input = 0;
            for (std::size_t a = 1; a < cap.input_dist.size(); ++a)
                if (cap.input_dist[a] > cap.input_dist[best_input])
                    best_input = static_cast<int>(a);
            csv += std::to_string(k) + "," + format_double(cap.capacity_bits) + "," +
                   scenario.sim.game.pharma_actions[best_input] + "\n";
            summary.push_back(Json{{"type", k},
                                   {"capacity_bits", cap.capacity_bits},
                                   {"input_dist", cap.input_dist},
                                   {"converged", cap.converged}});
            line << " C(theta" << k + 1 << ")=" << format_double(cap.capacity_bits);
        }
        write_text_file(out_dir / "capacity.csv", csv);
        write_text_file(out_dir / "capacity.json", summary.dump(2) + "\n");
        result.artifacts = {out_dir / "capacity.csv", out_dir / "capacity.json"};
        result.summary = "per-type capacities (bits):" + line.str();
    } catch (const std::exception& e) {
        result.exit_code = 3;
        result.summary = std::string("runtime failure: ") + e.what();
    }
    return result;
}

CommandResult cmd_replicator(const std::filesystem::path& scenario_path,
                             const std::filesystem::path& out_dir) {
    CommandResult result;
    ScenarioFile scenario;
    try {
        scenario = load_scenario(scenario_path);
        if (!scenario.has_population)
            throw Error("scenario '" + scenario.sim.name + "' has no population section");
        require_valid(validate_game(scenario.sim.game), "scenario game");
        require_valid_population(scenario);
    } catch (const Error& e) {
        result.exit_code = 2;
        result.summary = e.what();
        return result;
    }

    try {
        const auto trajectory = integrate_replicator(
            scenario.population.initial, scenario.sim.game, make_policy(scenario.population),
            scenario.population.horizon, scenario.population.dt, scenario.population.events);
        write_text_file(out_dir / "trajectory.csv", trajectory_csv(trajectory));
        result.artifacts = {out_dir / "trajectory.csv"};
        std::string shares;
        for (double s : trajectory.states.back().shares) {
            if (!shares.empty()) shares += ", ";
            shares += format_double(s);
        }
        result.summary = "final shares (" + shares + ") after t=" +
                         format_double(trajectory.states.back().time);
    } catch (const std::exception& e) {
        result.exit_code = 3;
        result.summary = std::string("runtime failure: ") + e.what();
    }
    return result;
}

CommandResult cmd_rd_curve(const std::filesystem::path& out_dir, int num_types,
                           std::vector<double> slope_grid) {
    CommandResult result;
    if (num_types < 2) {
        result.exit_code = 2;
        result.summary = "rd-curve requires at least 2 types";
        return result;
    }
    if (slope_grid.empty())
        for (double lambda = 0.05; lambda <= 40.0; lambda *= 1.5) slope_grid.push_back(lambda);

    try {
        const auto k = static_cast<std::size_t>(num_types);
        std::vector<double> distortion(k * k, 1.0);
        for (std::size_t i = 0; i < k; ++i) distortion[i * k + i] = 0.0;
        const auto curve =
            rate_distortion_curve(Belief::uniform(k), k, distortion, slope_grid);
        write_text_file(out_dir / "rd_curve.csv", rd_curve_csv(curve));
        result.artifacts = {out_dir / "rd_curve.csv"};
        result.summary = "rate-distortion sweep over " + std::to_string(curve.size()) +
                         " slopes; R(D=" + format_double(curve.front().distortion) +
                         ")=" + format_double(curve.front().rate_bits) + " bits";
    } catch (const std::exception& e) {
        result.exit_code = 3;
        result.summary = std::string("runtime failure: ") + e.what();
    }
    return result;
}

CommandResult cmd_make_scenarios(const std::filesystem::path& dir) {
    CommandResult result;
    try {
        examples::write_scenarios(dir);
        result.artifacts = {dir / "example_3_1.json", dir / "oncology_convergence.json",
                            dir / "competitor_entry.json", dir / "synthetic_panel.json"};
        result.summary = "wrote " + std::to_string(result.artifacts.size()) +
                         " scenario files to " + dir.string();
    } catch (const std::exception& e) {
        result.exit_code = 3;
        result.summary = std::string("runtime failure: ") + e.what();
    }
    return result;
}

} // namespace egpf::cli
