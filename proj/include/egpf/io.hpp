#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "egpf/belief.hpp"
#include "egpf/compose.hpp"
#include "egpf/core.hpp"
#include "egpf/game.hpp"
#include "egpf/info.hpp"
#include "egpf/population.hpp"
#include "egpf/sim.hpp"

namespace egpf {

using Json = nlohmann::json;

// JSON codecs. Round-trips are lossless at double precision. Schemas are
// documented in docs/formats.md.
Json to_json(const TypeVector& theta);
TypeVector type_vector_from_json(const Json& j);

Json to_json(const TypeSet& set);
TypeSet type_set_from_json(const Json& j);

Json to_json(const GameSpec& game);
GameSpec game_from_json(const Json& j);

Json to_json(const Mechanism& mech);
Mechanism mechanism_from_json(const Json& j);

Json to_json(const StrategyProfile& profile);
Json to_json(const MechanismAudit& audit);
Json to_json(const DriftReport& report);
Json to_json(const ContentPlan& plan);

// Multi-scale consistency diagnostics keyed "coarse->fine", plus the loss.
Json sheaf_report_json(const std::map<std::string, Belief>& beliefs,
                       const ScalePoset& poset);
// Commutativity defect of a domain-transfer square.
Json naturality_report_json(const TransferMap& eta, const BeliefUpdateMap& src_update,
                            const BeliefUpdateMap& dst_update, const Belief& mu);
Json to_json(const ChannelMatrix& channel);
ChannelMatrix channel_from_json(const Json& j);
Json to_json(const InteractionHistory& history);
InteractionHistory history_from_json(const Json& j);

// Population layer of a scenario file, when present.
struct PopulationSection {
    PopulationState initial;
    double horizon = 200.0;
    double dt = 0.05;
    std::string policy_kind = "fixed"; // "fixed" | "stackelberg"
    int policy_action = 0;
    std::vector<ScenarioEvent> events;
};

struct ScenarioFile {
    ScenarioConfig sim;
    bool has_population = false;
    PopulationSection population;
    std::string notes;
};

Json to_json(const ScenarioFile& scenario);
ScenarioFile scenario_from_json(const Json& j);
ScenarioFile load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioFile& scenario, const std::filesystem::path& path);

// CSV emitters (UTF-8, '\n' newlines, %.17g doubles; byte-stable for
// identical inputs).
std::string format_double(double v);
std::string history_csv(const InteractionHistory& history);       // t,action,response
InteractionHistory history_from_csv(const std::string& csv);
std::string trajectory_csv(const Trajectory& trajectory);          // t,x1..xK,event
std::string rd_curve_csv(const std::vector<RateDistortionPoint>& curve); // lambda,rate_bits,distortion
std::string steps_csv(const RunMetrics& metrics);                  // per-step aggregates

Json run_summary_json(const ScenarioFile& scenario, const RunMetrics& metrics,
                      int replications);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace egpf
