#pragma once

#include "egpf/io.hpp"

namespace egpf::examples {

// Canonical three-archetype oncology launch game (3 actions x 2 responses
// x 3 types). The "adopt" payoffs are the canonical matrix; the "defer"
// physician payoffs for the KOL action are back-solved so the QRE
// likelihood column at tau = 3 is exactly (0.65, 0.20, 0.40). Defer rows
// for the other actions are reconstructed and marked as such in the
// scenario notes.
GameSpec oncology_game();

// Two-step replay of the worked example: exploitation-only thresholds and
// a scripted "defer" first response.
ScenarioFile oncology_replay_scenario();

// Belief-convergence benchmark on the same game: hidden type drawn from
// the prior, 200-step horizon.
ScenarioFile oncology_convergence_scenario();

// Population-shift scenario: mild pre-entry drift, then a competitor entry
// at t = 100 patches the formulary-sensitive type's payoff upward.
ScenarioFile competitor_entry_scenario();

// Desk-scale synthetic benchmark: five sampled archetypes, five actions,
// three responses, seeded reduced-form payoffs, hidden type drawn from a
// uniform prior.
ScenarioFile synthetic_panel_scenario();

// Writes all canonical scenario files into `dir`.
void write_scenarios(const std::filesystem::path& dir);

} // namespace egpf::examples
