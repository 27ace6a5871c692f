#include "egpf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace egpf {

namespace {

std::vector<double> doubles_from_json(const Json& j) {
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(v.get<double>());
    return out;
}

Json tensor_to_json(const Tensor3& t) {
    Json ja = Json::array();
    for (std::size_t a = 0; a < t.num_actions(); ++a) {
        Json jd = Json::array();
        for (std::size_t d = 0; d < t.num_responses(); ++d) {
            Json jk = Json::array();
            for (std::size_t k = 0; k < t.num_types(); ++k) jk.push_back(t(a, d, k));
            jd.push_back(std::move(jk));
        }
        ja.push_back(std::move(jd));
    }
    return ja;
}

Tensor3 tensor_from_json(const Json& j) {
    const std::size_t m = j.size();
    const std::size_t l = m > 0 ? j[0].size() : 0;
    const std::size_t k = l > 0 ? j[0][0].size() : 0;
    Tensor3 t(m, l, k);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t d = 0; d < l; ++d) {
            if (j[a].size() != l || j[a][d].size() != k)
                throw Error("tensor: ragged dimensions");
            for (std::size_t i = 0; i < k; ++i) t(a, d, i) = j[a][d][i].get<double>();
        }
    return t;
}

} // namespace

Json to_json(const TypeVector& theta) {
    return Json{{"alpha_E", theta.alpha_e}, {"alpha_P", theta.alpha_p},
                {"alpha_O", theta.alpha_o}, {"alpha_F", theta.alpha_f},
                {"beta", theta.beta},       {"gamma", theta.gamma},
                {"delta", theta.delta},     {"kappa", theta.kappa}};
}

TypeVector type_vector_from_json(const Json& j) {
    TypeVector t;
    t.alpha_e = j.at("alpha_E").get<double>();
    t.alpha_p = j.at("alpha_P").get<double>();
    t.alpha_o = j.at("alpha_O").get<double>();
    t.alpha_f = j.at("alpha_F").get<double>();
    t.beta = j.at("beta").get<double>();
    t.gamma = j.at("gamma").get<double>();
    t.delta = j.at("delta").get<double>();
    t.kappa = j.at("kappa").get<double>();
    return t;
}

Json to_json(const TypeSet& set) {
    Json types = Json::array();
    for (const auto& t : set.types) types.push_back(to_json(t));
    return Json{{"types", std::move(types)}, {"separation", set.separation}};
}

TypeSet type_set_from_json(const Json& j) {
    TypeSet set;
    set.separation = j.value("separation", 0.0);
    for (const auto& jt : j.at("types")) set.types.push_back(type_vector_from_json(jt));
    return set;
}

Json to_json(const GameSpec& game) {
    Json j = to_json(game.type_set);
    j["pharma_actions"] = game.pharma_actions;
    j["physician_responses"] = game.physician_responses;
    j["u_P"] = tensor_to_json(game.u_pharma);
    j["u_D"] = tensor_to_json(game.u_physician);
    j["prior"] = game.prior.weights;
    j["tau"] = game.tau;
    return j;
}

GameSpec game_from_json(const Json& j) {
    GameSpec game;
    game.type_set = type_set_from_json(j);
    game.pharma_actions = j.at("pharma_actions").get<std::vector<std::string>>();
    game.physician_responses = j.at("physician_responses").get<std::vector<std::string>>();
    game.u_pharma = tensor_from_json(j.at("u_P"));
    game.u_physician = tensor_from_json(j.at("u_D"));
    game.prior = Belief(doubles_from_json(j.at("prior")));
    game.tau = j.at("tau").get<double>();
    return game;
}

Json to_json(const Mechanism& mech) {
    return Json{{"allocation", mech.allocation},
                {"transfers", mech.transfers},
                {"outside_option", mech.outside_option}};
}

Mechanism mechanism_from_json(const Json& j) {
    Mechanism mech;
    mech.allocation = j.at("allocation").get<std::vector<int>>();
    mech.transfers = j.at("transfers").get<std::vector<double>>();
    mech.outside_option = j.at("outside_option").get<std::vector<double>>();
    return mech;
}

Json to_json(const StrategyProfile& profile) {
    return Json{{"pharma_strategy", profile.pharma_strategy},
                {"physician_strategy", profile.physician_strategy}};
}

Json to_json(const MechanismAudit& audit) {
    Json ic = Json::array();
    for (const auto& v : audit.ic_violations)
        ic.push_back(Json{{"true_type", v.true_type},
                          {"reported_type", v.reported_type},
                          {"slack", v.slack}});
    Json ir = Json::array();
    for (const auto& v : audit.ir_violations)
        ir.push_back(Json{{"type", v.type}, {"slack", v.slack}});
    return Json{{"ic_violations", std::move(ic)},
                {"ir_violations", std::move(ir)},
                {"passed", audit.passed}};
}

Json to_json(const DriftReport& report) {
    return Json{{"statistic_bits", report.statistic},
                {"threshold", report.threshold},
                {"triggered", report.triggered},
                {"window", report.window}};
}

Json to_json(const ContentPlan& plan) {
    return Json{{"action", plan.action},
                {"evidence_density", evidence_density_name(plan.evidence_density)},
                {"length_words", plan.length_words},
                {"tone", plan.tone},
                {"hedging", plan.hedging},
                {"fair_balance", plan.fair_balance},
                {"indication_specific", plan.indication_specific}};
}

Json sheaf_report_json(const std::map<std::string, Belief>& beliefs,
                       const ScalePoset& poset) {
    Json pairs;
    double loss = 0.0;
    for (const auto& r : sheaf_residuals(beliefs, poset)) {
        pairs[r.coarse + "->" + r.fine] = r.tv;
        loss += r.tv * r.tv;
    }
    return Json{{"pairs", std::move(pairs)}, {"sheaf_loss", loss}};
}

Json naturality_report_json(const TransferMap& eta, const BeliefUpdateMap& src_update,
                            const BeliefUpdateMap& dst_update, const Belief& mu) {
    const double residual = naturality_residual(eta, src_update, dst_update, mu);
    return Json{{"residual_tv", residual},
                {"commutes", residual < 1e-12},
                {"src_types", eta.src_types},
                {"dst_types", eta.dst_types}};
}

Json to_json(const ChannelMatrix& channel) {
    Json rows = Json::array();
    for (std::size_t x = 0; x < channel.num_inputs; ++x) rows.push_back(channel.row(x));
    return Json{{"p", std::move(rows)}};
}

ChannelMatrix channel_from_json(const Json& j) {
    const Json& rows = j.contains("p") ? j.at("p") : j;
    const std::size_t m = rows.size();
    const std::size_t l = m > 0 ? rows[0].size() : 0;
    ChannelMatrix channel(m, l);
    for (std::size_t x = 0; x < m; ++x) {
        if (rows[x].size() != l) throw Error("channel: ragged rows");
        for (std::size_t y = 0; y < l; ++y) channel(x, y) = rows[x][y].get<double>();
    }
    return channel;
}

Json to_json(const InteractionHistory& history) {
    Json records = Json::array();
    for (const auto& r : history.records)
        records.push_back(Json{{"t", r.time}, {"action", r.action}, {"response", r.response}});
    return Json{{"records", std::move(records)}};
}

InteractionHistory history_from_json(const Json& j) {
    InteractionHistory history;
    for (const auto& r : j.at("records"))
        history.append(r.at("action").get<int>(), r.at("response").get<int>(),
                       r.at("t").get<std::int64_t>());
    return history;
}

Json to_json(const ScenarioFile& scenario) {
    Json j;
    j["name"] = scenario.sim.name;
    if (!scenario.notes.empty()) j["notes"] = scenario.notes;
    j["replications"] = scenario.sim.replications;
    j["game"] = to_json(scenario.sim.game);
    j["sim"] = Json{{"true_type_index", scenario.sim.true_type_index},
                    {"horizon", scenario.sim.horizon},
                    {"tau_explore", scenario.sim.tau_explore},
                    {"tau_drift", scenario.sim.tau_drift},
                    {"drift_window", scenario.sim.drift_window},
                    {"recalibrate_on_drift", scenario.sim.recalibrate_on_drift},
                    {"divergence_alpha", scenario.sim.divergence_alpha},
                    {"seed", scenario.sim.seed},
                    {"forced_responses", scenario.sim.forced_responses}};
    if (scenario.has_population) {
        Json events = Json::array();
        for (const auto& e : scenario.population.events) {
            Json patches = Json::array();
            for (const auto& p : e.patches)
                patches.push_back(Json{
                    {"tensor", p.tensor == PayoffPatch::Tensor::kPharma ? "u_P" : "u_D"},
                    {"action", p.action},
                    {"response", p.response},
                    {"type", p.type},
                    {"value", p.value}});
            events.push_back(
                Json{{"time", e.time}, {"id", e.id}, {"patches", std::move(patches)}});
        }
        j["population"] = Json{{"x0", scenario.population.initial.shares},
                               {"horizon", scenario.population.horizon},
                               {"dt", scenario.population.dt},
                               {"policy", Json{{"kind", scenario.population.policy_kind},
                                               {"action", scenario.population.policy_action}}},
                               {"events", std::move(events)}};
    }
    return j;
}

ScenarioFile scenario_from_json(const Json& j) {
    ScenarioFile scenario;
    scenario.sim.name = j.value("name", "scenario");
    scenario.notes = j.value("notes", "");
    scenario.sim.replications = j.value("replications", 1);
    scenario.sim.game = game_from_json(j.at("game"));
    if (j.contains("sim")) {
        const Json& s = j.at("sim");
        scenario.sim.true_type_index = s.value("true_type_index", 0);
        scenario.sim.horizon = s.value("horizon", 50);
        scenario.sim.tau_explore = s.value("tau_explore", 1.0);
        scenario.sim.tau_drift = s.value("tau_drift", defaults::kDriftThreshold);
        scenario.sim.drift_window = s.value("drift_window", defaults::kDriftWindow);
        scenario.sim.recalibrate_on_drift = s.value("recalibrate_on_drift", true);
        scenario.sim.divergence_alpha = s.value("divergence_alpha", 1.0);
        scenario.sim.seed = s.value("seed", defaults::kDefaultSeed);
        if (s.contains("forced_responses"))
            scenario.sim.forced_responses = s.at("forced_responses").get<std::vector<int>>();
    }
    if (j.contains("population")) {
        const Json& p = j.at("population");
        scenario.has_population = true;
        scenario.population.initial.shares = doubles_from_json(p.at("x0"));
        scenario.population.initial.time = 0.0;
        scenario.population.horizon = p.value("horizon", 200.0);
        scenario.population.dt = p.value("dt", 0.05);
        if (p.contains("policy")) {
            scenario.population.policy_kind = p.at("policy").value("kind", "fixed");
            scenario.population.policy_action = p.at("policy").value("action", 0);
        }
        if (p.contains("events")) {
            for (const auto& je : p.at("events")) {
                ScenarioEvent event;
                event.time = je.at("time").get<double>();
                event.id = je.value("id", "event");
                if (je.contains("patches")) {
                    for (const auto& jp : je.at("patches")) {
                        PayoffPatch patch;
                        patch.tensor = jp.value("tensor", "u_D") == "u_P"
                                           ? PayoffPatch::Tensor::kPharma
                                           : PayoffPatch::Tensor::kPhysician;
                        patch.action = jp.at("action").get<int>();
                        patch.response = jp.at("response").get<int>();
                        patch.type = jp.at("type").get<int>();
                        patch.value = jp.at("value").get<double>();
                        event.patches.push_back(patch);
                    }
                }
                scenario.population.events.push_back(std::move(event));
            }
        }
    }
    return scenario;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("scenario not found: " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error("scenario parse error in " + path.string() + ": " + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const Json::exception& e) {
        throw Error("scenario schema error in " + path.string() + ": " + e.what());
    }
}

void save_scenario(const ScenarioFile& scenario, const std::filesystem::path& path) {
    write_text_file(path, to_json(scenario).dump(2) + "\n");
}

std::string format_double(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string history_csv(const InteractionHistory& history) {
    std::string csv = "t,action,response\n";
    for (const auto& r : history.records)
        csv += std::to_string(r.time) + "," + std::to_string(r.action) + "," +
               std::to_string(r.response) + "\n";
    return csv;
}

InteractionHistory history_from_csv(const std::string& csv) {
    InteractionHistory history;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        long long t = 0;
        int action = 0, response = 0;
        if (std::sscanf(line.c_str(), "%lld,%d,%d", &t, &action, &response) != 3)
            throw Error("history csv: bad row '" + line + "'");
        history.append(action, response, static_cast<std::int64_t>(t));
    }
    return history;
}

std::string trajectory_csv(const Trajectory& trajectory) {
    const std::size_t k = trajectory.states.empty() ? 0 : trajectory.states[0].size();
    std::string csv = "t";
    for (std::size_t i = 1; i <= k; ++i) csv += ",x" + std::to_string(i);
    csv += ",event\n";
    std::size_t next_event = 0;
    for (const auto& state : trajectory.states) {
        csv += format_double(state.time);
        for (double s : state.shares) csv += "," + format_double(s);
        std::string label;
        while (next_event < trajectory.events.size() &&
               trajectory.events[next_event].time <= state.time) {
            label = trajectory.events[next_event].id;
            ++next_event;
        }
        csv += "," + label + "\n";
    }
    return csv;
}

std::string rd_curve_csv(const std::vector<RateDistortionPoint>& curve) {
    std::string csv = "lambda,rate_bits,distortion\n";
    for (const auto& p : curve)
        csv += format_double(p.lambda) + "," + format_double(p.rate_bits) + "," +
               format_double(p.distortion) + "\n";
    return csv;
}

std::string steps_csv(const RunMetrics& metrics) {
    std::string csv = "t";
    for (const auto& p : metrics.policies) {
        const std::string n = policy_name(p.policy);
        csv += "," + n + "_regret_mean," + n + "_regret_ci," + n + "_logloss_mean," + n +
               "_logloss_ci";
    }
    csv += "\n";
    const std::size_t t = metrics.policies.empty()
                              ? 0
                              : metrics.policies[0].cumulative_regret.mean.size();
    for (std::size_t i = 0; i < t; ++i) {
        csv += std::to_string(i + 1);
        for (const auto& p : metrics.policies) {
            csv += "," + format_double(p.cumulative_regret.mean[i]) + "," +
                   format_double(p.cumulative_regret.half_width[i]) + "," +
                   format_double(p.log_loss.mean[i]) + "," +
                   format_double(p.log_loss.half_width[i]);
        }
        csv += "\n";
    }
    return csv;
}

Json run_summary_json(const ScenarioFile& scenario, const RunMetrics& metrics,
                      int replications) {
    Json policies;
    for (const auto& p : metrics.policies) {
        const std::size_t last = p.cumulative_regret.mean.size() - 1;
        policies[policy_name(p.policy)] =
            Json{{"final_regret_mean", p.cumulative_regret.mean[last]},
                 {"final_regret_ci", p.cumulative_regret.half_width[last]},
                 {"final_logloss_mean", p.log_loss.mean[last]},
                 {"steps_to_90_mean_by_type", p.steps_to_90_mean_by_type},
                 {"replications_by_type", p.replications_by_type},
                 {"converged_by_type", p.converged_by_type},
                 {"exploration_regret_mean", p.exploration_regret_mean},
                 {"exploitation_regret_mean", p.exploitation_regret_mean},
                 {"mean_realized_log_gain", p.mean_realized_log_gain},
                 {"mean_predicted_info_gain", p.mean_predicted_info_gain},
                 {"gain_gap_se", p.gain_gap_se},
                 {"drift_triggers", p.drift_triggers},
                 {"recalibrations", p.recalibrations}};
    }
    Json actions = Json::array();
    Json responses = Json::array();
    for (const auto& r : metrics.trace) {
        actions.push_back(scenario.sim.game.pharma_actions[r.action]);
        responses.push_back(scenario.sim.game.physician_responses[r.response]);
    }
    return Json{{"scenario", scenario.sim.name},
                {"seed", scenario.sim.seed},
                {"replications", replications},
                {"horizon", scenario.sim.horizon},
                {"true_type_index", scenario.sim.true_type_index},
                {"policies", std::move(policies)},
                {"trace_actions", std::move(actions)},
                {"trace_responses", std::move(responses)}};
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace egpf
