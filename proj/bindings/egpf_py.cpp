#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

#include "egpf/belief.hpp"
#include "egpf/cli.hpp"
#include "egpf/compose.hpp"
#include "egpf/core.hpp"
#include "egpf/examples.hpp"
#include "egpf/game.hpp"
#include "egpf/info.hpp"
#include "egpf/io.hpp"
#include "egpf/population.hpp"
#include "egpf/sim.hpp"

namespace py = pybind11;
using namespace egpf;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Strategic physician-engagement simulation engine";
    m.attr("__version__") = "0.1.0";

    py::register_exception<Error>(m, "EgpfError");

    // --- core -----------------------------------------------------------
    py::class_<TypeVector>(m, "TypeVector")
        .def(py::init<>())
        .def(py::init([](double ae, double ap, double ao, double af, double beta,
                         double gamma, double delta, double kappa) {
                 return TypeVector{ae, ap, ao, af, beta, gamma, delta, kappa};
             }),
             py::arg("alpha_e"), py::arg("alpha_p"), py::arg("alpha_o"), py::arg("alpha_f"),
             py::arg("beta") = 1.0, py::arg("gamma") = 0.5, py::arg("delta") = 1.0,
             py::arg("kappa") = 1.0)
        .def_readwrite("alpha_e", &TypeVector::alpha_e)
        .def_readwrite("alpha_p", &TypeVector::alpha_p)
        .def_readwrite("alpha_o", &TypeVector::alpha_o)
        .def_readwrite("alpha_f", &TypeVector::alpha_f)
        .def_readwrite("beta", &TypeVector::beta)
        .def_readwrite("gamma", &TypeVector::gamma)
        .def_readwrite("delta", &TypeVector::delta)
        .def_readwrite("kappa", &TypeVector::kappa)
        .def("as_array", [](const TypeVector& t) {
            const auto a = t.as_array();
            return std::vector<double>(a.begin(), a.end());
        });

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("ok", &ValidationReport::ok)
        .def_readonly("violations", &ValidationReport::violations);

    py::class_<Belief>(m, "Belief")
        .def(py::init<std::vector<double>>())
        .def_readwrite("weights", &Belief::weights)
        .def("argmax", &Belief::argmax)
        .def("__len__", &Belief::size)
        .def("__getitem__",
             [](const Belief& b, std::size_t i) { return b.weights.at(i); })
        .def_static("uniform", &Belief::uniform)
        .def_static("point_mass", &Belief::point_mass);

    py::class_<TypeSet>(m, "TypeSet")
        .def(py::init<>())
        .def_readwrite("types", &TypeSet::types)
        .def_readwrite("separation", &TypeSet::separation)
        .def("min_pairwise_distance", &TypeSet::min_pairwise_distance)
        .def("sorted_by_evidence", &TypeSet::sorted_by_evidence)
        .def("__len__", &TypeSet::size);

    py::class_<GameSpec>(m, "GameSpec")
        .def(py::init<>())
        .def_readwrite("type_set", &GameSpec::type_set)
        .def_readwrite("pharma_actions", &GameSpec::pharma_actions)
        .def_readwrite("physician_responses", &GameSpec::physician_responses)
        .def_readwrite("prior", &GameSpec::prior)
        .def_readwrite("tau", &GameSpec::tau)
        .def("num_actions", &GameSpec::num_actions)
        .def("num_responses", &GameSpec::num_responses)
        .def("num_types", &GameSpec::num_types)
        .def("u_pharma",
             [](const GameSpec& g, int a, int d, int k) { return g.u_pharma(a, d, k); })
        .def("u_physician",
             [](const GameSpec& g, int a, int d, int k) { return g.u_physician(a, d, k); });

    py::class_<UtilityFeatures>(m, "UtilityFeatures")
        .def(py::init<>())
        .def_readwrite("evidence", &UtilityFeatures::evidence)
        .def_readwrite("peer", &UtilityFeatures::peer)
        .def_readwrite("outcome", &UtilityFeatures::outcome)
        .def_readwrite("access", &UtilityFeatures::access)
        .def_readwrite("variance", &UtilityFeatures::variance)
        .def_readwrite("load", &UtilityFeatures::load);

    m.def("validate_type_vector", &validate_type_vector);
    m.def("validate_belief", &validate_belief);
    m.def("validate_type_set", &validate_type_set);
    m.def("validate_game", &validate_game);
    m.def("sample_type_set", &sample_type_set, py::arg("k"), py::arg("epsilon"),
          py::arg("seed"), py::arg("retry_budget") = defaults::kSampleRetryBudget);
    m.def("type_distance", &distance);

    // --- game -------------------------------------------------------------
    py::class_<PharmaWeights>(m, "PharmaWeights")
        .def(py::init<>())
        .def_readwrite("ltv", &PharmaWeights::ltv)
        .def_readwrite("regulatory", &PharmaWeights::regulatory)
        .def_readwrite("info_gain", &PharmaWeights::info_gain);

    py::enum_<Responder>(m, "Responder")
        .value("BEST_RESPONSE", Responder::kBestResponse)
        .value("QUANTAL", Responder::kQuantal);

    py::class_<StrategyProfile>(m, "StrategyProfile")
        .def_readonly("pharma_strategy", &StrategyProfile::pharma_strategy)
        .def_readonly("physician_strategy", &StrategyProfile::physician_strategy);

    py::class_<StackelbergSolution>(m, "StackelbergSolution")
        .def_readonly("action", &StackelbergSolution::action)
        .def_readonly("payoff", &StackelbergSolution::payoff);

    py::class_<Mechanism>(m, "Mechanism")
        .def(py::init<>())
        .def_readwrite("allocation", &Mechanism::allocation)
        .def_readwrite("transfers", &Mechanism::transfers)
        .def_readwrite("outside_option", &Mechanism::outside_option);

    py::class_<IcViolation>(m, "IcViolation")
        .def_readonly("true_type", &IcViolation::true_type)
        .def_readonly("reported_type", &IcViolation::reported_type)
        .def_readonly("slack", &IcViolation::slack);
    py::class_<IrViolation>(m, "IrViolation")
        .def_readonly("type", &IrViolation::type)
        .def_readonly("slack", &IrViolation::slack);
    py::class_<MechanismAudit>(m, "MechanismAudit")
        .def_readonly("ic_violations", &MechanismAudit::ic_violations)
        .def_readonly("ir_violations", &MechanismAudit::ir_violations)
        .def_readonly("passed", &MechanismAudit::passed);

    m.def("physician_utility", &physician_utility, py::arg("features"), py::arg("response"),
          py::arg("prev_response"), py::arg("theta"));
    m.def("pharma_utility", &pharma_utility, py::arg("revenue"), py::arg("cost"),
          py::arg("ltv"), py::arg("reg_risk"), py::arg("info_gain"), py::arg("weights"));
    m.def("qre_distribution", &qre_distribution);
    m.def("best_response", &best_response);
    m.def("expected_pharma_utility", &expected_pharma_utility, py::arg("game"),
          py::arg("action"), py::arg("mu"),
          py::arg("responder") = Responder::kBestResponse);
    m.def("solve_bne", &solve_bne);
    m.def("leader_payoff", &leader_payoff);
    m.def("solve_stackelberg", &solve_stackelberg);
    m.def("audit_mechanism", &audit_mechanism, py::arg("game"), py::arg("mechanism"),
          py::arg("tolerance") = 1e-9);
    m.def("derive_transfers", &derive_transfers);

    // --- belief -----------------------------------------------------------
    py::class_<InteractionHistory>(m, "InteractionHistory")
        .def(py::init<>())
        .def("append", &InteractionHistory::append, py::arg("action"), py::arg("response"),
             py::arg("time"))
        .def("__len__", &InteractionHistory::size);

    py::class_<DriftReport>(m, "DriftReport")
        .def_readonly("statistic", &DriftReport::statistic)
        .def_readonly("threshold", &DriftReport::threshold)
        .def_readonly("triggered", &DriftReport::triggered)
        .def_readonly("window", &DriftReport::window);

    m.def("bayes_update", &bayes_update);
    m.def("entropy", &entropy, py::arg("mu"), py::arg("alpha") = 1.0);
    m.def("divergence", &divergence, py::arg("p"), py::arg("q"), py::arg("alpha") = 1.0);
    m.def("total_variation", &total_variation);
    m.def("drift_detect", &drift_detect, py::arg("history"), py::arg("model"), py::arg("mu"),
          py::arg("window"), py::arg("tau_drift") = defaults::kDriftThreshold,
          py::arg("alpha") = 1.0);

    // --- info --------------------------------------------------------------
    py::class_<ChannelMatrix>(m, "ChannelMatrix")
        .def(py::init<std::size_t, std::size_t>())
        .def(py::init([](const std::vector<std::vector<double>>& rows) {
            ChannelMatrix c(rows.size(), rows.empty() ? 0 : rows[0].size());
            for (std::size_t x = 0; x < rows.size(); ++x)
                for (std::size_t y = 0; y < rows[x].size(); ++y) c(x, y) = rows[x][y];
            return c;
        }))
        .def_readonly("num_inputs", &ChannelMatrix::num_inputs)
        .def_readonly("num_outputs", &ChannelMatrix::num_outputs)
        .def("row", &ChannelMatrix::row)
        .def("__call__",
             [](const ChannelMatrix& c, std::size_t x, std::size_t y) { return c(x, y); });

    py::class_<TypeChannels>(m, "TypeChannels")
        .def(py::init<>())
        .def_readwrite("per_type", &TypeChannels::per_type);

    py::class_<CapacityResult>(m, "CapacityResult")
        .def_readonly("capacity_bits", &CapacityResult::capacity_bits)
        .def_readonly("input_dist", &CapacityResult::input_dist)
        .def_readonly("iterations", &CapacityResult::iterations)
        .def_readonly("converged", &CapacityResult::converged)
        .def_readonly("lower_bounds", &CapacityResult::lower_bounds);

    py::class_<FisherMatrix>(m, "FisherMatrix")
        .def_readonly("m", &FisherMatrix::m)
        .def("symmetric", &FisherMatrix::symmetric, py::arg("tol") = 1e-9)
        .def("min_eigenvalue", &FisherMatrix::min_eigenvalue)
        .def("projected_determinant", &FisherMatrix::projected_determinant,
             py::arg("tol") = 1e-12);

    py::enum_<DesignMode>(m, "DesignMode")
        .value("DETERMINANT", DesignMode::kDeterminant)
        .value("TRACE_APPROX", DesignMode::kTraceApprox);

    py::class_<RateDistortionPoint>(m, "RateDistortionPoint")
        .def_readonly("lambda_", &RateDistortionPoint::lambda)
        .def_readonly("rate_bits", &RateDistortionPoint::rate_bits)
        .def_readonly("distortion", &RateDistortionPoint::distortion)
        .def_readonly("converged", &RateDistortionPoint::converged);

    m.def("validate_channel", &validate_channel);
    m.def("qre_channels", &qre_channels);
    m.def("mixture_channel", &mixture_channel);
    m.def("mutual_information", &mutual_information);
    m.def("channel_capacity", &channel_capacity, py::arg("channel"),
          py::arg("tol") = defaults::kCapacityTol,
          py::arg("max_iters") = defaults::kCapacityMaxIters);
    m.def("information_gain", &information_gain);
    m.def(
        "fisher_information",
        [](const TypeVector& theta, const std::function<std::vector<double>(TypeVector)>& f,
           double step) {
            return fisher_information(
                theta, [f](const TypeVector& t) { return f(t); }, step);
        },
        py::arg("theta"), py::arg("likelihood"), py::arg("step") = 1e-5);
    m.def("qre_family_utilities",
          [](const std::function<std::vector<double>(TypeVector)>& utilities, double tau) {
              return qre_family([utilities](const TypeVector& t) { return utilities(t); },
                                tau);
          });
    m.def(
        "d_optimal_action",
        [](const TypeVector& theta_hat, const std::vector<LikelihoodFamily>& actions,
           DesignMode mode, std::optional<Eigen::MatrixXd> sigma, double fd_step) {
            return d_optimal_action(theta_hat, actions, mode,
                                    sigma ? &*sigma : nullptr, fd_step);
        },
        py::arg("theta_hat"), py::arg("per_action_likelihoods"),
        py::arg("mode") = DesignMode::kDeterminant, py::arg("sigma") = std::nullopt,
        py::arg("fd_step") = 1e-5);
    m.def("rate_distortion_curve", &rate_distortion_curve, py::arg("type_dist"),
          py::arg("num_contents"), py::arg("distortion"), py::arg("slope_grid"),
          py::arg("tol") = 1e-10, py::arg("max_iters") = defaults::kCapacityMaxIters);
    m.def("personalization_distortion", &personalization_distortion);

    // --- compose -------------------------------------------------------------
    py::class_<BeliefUpdateMap>(m, "BeliefUpdateMap")
        .def(py::init([](std::vector<double> lik) {
            return BeliefUpdateMap{std::move(lik)};
        }))
        .def_readwrite("likelihoods", &BeliefUpdateMap::likelihoods);

    py::class_<FunctorLawReport>(m, "FunctorLawReport")
        .def_readonly("identity_residual", &FunctorLawReport::identity_residual)
        .def_readonly("composition_residual", &FunctorLawReport::composition_residual);

    py::class_<TransferMap>(m, "TransferMap")
        .def(py::init<>())
        .def_readwrite("src_types", &TransferMap::src_types)
        .def_readwrite("dst_types", &TransferMap::dst_types)
        .def_readwrite("m", &TransferMap::m)
        .def_static("identity", &TransferMap::identity);

    py::class_<ScalePoset>(m, "ScalePoset")
        .def(py::init<std::vector<std::string>>())
        .def_static("standard", &ScalePoset::standard)
        .def("scales", &ScalePoset::scales)
        .def("leq", &ScalePoset::leq)
        .def("set_restriction", &ScalePoset::set_restriction, py::arg("coarse"),
             py::arg("fine"), py::arg("map"), py::arg("composition_tol") = 1e-9)
        .def("restrict", &ScalePoset::restrict);

    m.def("functor_law_check", &functor_law_check);
    m.def("tensor_unit", &tensor_unit);
    m.def("tensor_compose",
          py::overload_cast<const TypeVector&, const TypeVector&, double>(&tensor_compose));
    m.def("apply_transfer", &apply_transfer);
    m.def("naturality_residual", &naturality_residual);
    m.def("sheaf_loss", &sheaf_loss);

    // --- population ------------------------------------------------------------
    py::class_<PopulationState>(m, "PopulationState")
        .def(py::init([](std::vector<double> shares, double time) {
                 return PopulationState{std::move(shares), time};
             }),
             py::arg("shares"), py::arg("time") = 0.0)
        .def_readwrite("shares", &PopulationState::shares)
        .def_readwrite("time", &PopulationState::time);

    py::class_<FitnessResult>(m, "FitnessResult")
        .def_readonly("per_type", &FitnessResult::per_type)
        .def_readonly("average", &FitnessResult::average);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("states", &Trajectory::states)
        .def_readonly("events", &Trajectory::events);
    py::class_<TrajectoryEvent>(m, "TrajectoryEvent")
        .def_readonly("time", &TrajectoryEvent::time)
        .def_readonly("id", &TrajectoryEvent::id);

    m.def("fitness",
          py::overload_cast<const PopulationState&, const GameSpec&, int>(&fitness));
    m.def("fitness_mixed",
          py::overload_cast<const PopulationState&, const GameSpec&,
                            const std::vector<double>&>(&fitness));
    m.def("replicator_step", &replicator_step);
    m.def(
        "integrate_replicator",
        [](const PopulationState& x0, const GameSpec& game, int action, double horizon,
           double dt) {
            return integrate_replicator(x0, game, fixed_action_policy(action), horizon, dt);
        },
        py::arg("x0"), py::arg("game"), py::arg("action"), py::arg("horizon"),
        py::arg("dt") = 0.05);

    // --- sim ----------------------------------------------------------------
    py::enum_<Policy>(m, "Policy")
        .value("EGPF", Policy::kEgpf)
        .value("GREEDY", Policy::kGreedy)
        .value("RANDOM", Policy::kRandom);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("game", &ScenarioConfig::game)
        .def_readwrite("true_type_index", &ScenarioConfig::true_type_index)
        .def_readwrite("horizon", &ScenarioConfig::horizon)
        .def_readwrite("tau_explore", &ScenarioConfig::tau_explore)
        .def_readwrite("tau_drift", &ScenarioConfig::tau_drift)
        .def_readwrite("drift_window", &ScenarioConfig::drift_window)
        .def_readwrite("recalibrate_on_drift", &ScenarioConfig::recalibrate_on_drift)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("replications", &ScenarioConfig::replications)
        .def_readwrite("forced_responses", &ScenarioConfig::forced_responses)
        .def_readwrite("name", &ScenarioConfig::name);
    m.attr("SAMPLE_TRUE_TYPE_FROM_PRIOR") = int(ScenarioConfig::kSampleTrueTypeFromPrior);

    py::class_<CurveSummary>(m, "CurveSummary")
        .def_readonly("mean", &CurveSummary::mean)
        .def_readonly("half_width", &CurveSummary::half_width);

    py::class_<PolicyMetrics>(m, "PolicyMetrics")
        .def_readonly("cumulative_regret", &PolicyMetrics::cumulative_regret)
        .def_readonly("log_loss", &PolicyMetrics::log_loss)
        .def_readonly("log_loss_step", &PolicyMetrics::log_loss_step)
        .def_readonly("steps_to_90_mean_by_type", &PolicyMetrics::steps_to_90_mean_by_type)
        .def_readonly("replications_by_type", &PolicyMetrics::replications_by_type)
        .def_readonly("converged_by_type", &PolicyMetrics::converged_by_type)
        .def_readonly("mean_realized_log_gain", &PolicyMetrics::mean_realized_log_gain)
        .def_readonly("mean_predicted_info_gain", &PolicyMetrics::mean_predicted_info_gain)
        .def_readonly("gain_gap_se", &PolicyMetrics::gain_gap_se)
        .def_readonly("drift_triggers", &PolicyMetrics::drift_triggers)
        .def_readonly("recalibrations", &PolicyMetrics::recalibrations);

    py::class_<RunMetrics>(m, "RunMetrics")
        .def_readonly("policies", &RunMetrics::policies)
        .def("for_policy", &RunMetrics::for_policy, py::return_value_policy::reference_internal);

    m.def("epsilon_schedule", &epsilon_schedule);
    m.def("simulate_response", [](const GameSpec& game, int action, int true_type,
                                  std::uint64_t seed) {
        StableRng rng(seed);
        return simulate_response(game, action, true_type, rng);
    });
    m.def("run_experiment", &run_experiment, py::arg("config"), py::arg("replications"),
          py::arg("workers") = 0);

    // --- io / examples ---------------------------------------------------------
    m.def("oncology_game", &examples::oncology_game);
    m.def("load_scenario_config", [](const std::filesystem::path& path) {
        return load_scenario(path).sim;
    });
    m.def("game_from_json",
          [](const std::string& text) { return game_from_json(Json::parse(text)); });
    m.def("game_to_json", [](const GameSpec& game) { return to_json(game).dump(2); });
}
