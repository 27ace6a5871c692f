#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "egpf/io.hpp"

namespace egpf::cli {

struct CommandResult {
    int exit_code = 0;
    std::vector<std::filesystem::path> artifacts;
    std::string summary;
};

// Exit codes: 0 success, 1 golden-check failure, 2 configuration error,
// 3 runtime numeric failure.
CommandResult cmd_run(const std::filesystem::path& scenario_path,
                      const std::filesystem::path& out_dir,
                      std::optional<int> replications_override = std::nullopt,
                      std::optional<std::uint64_t> seed_override = std::nullopt);

// Replays every worked-example value as an assertion and prints a
// measured-vs-expected table. list_only enumerates the checks.
CommandResult cmd_verify_paper(const std::filesystem::path& out_dir,
                               bool list_only = false);

// The golden checks evaluated against an arbitrary game (rows with id,
// expected, measured, passed); cmd_verify_paper runs them on the canonical
// one. Exposed so tests can confirm the checks catch perturbed payoffs.
Json golden_report(const GameSpec& game);

// Per-type engagement channel capacities of a scenario's game.
CommandResult cmd_capacity(const std::filesystem::path& scenario_path,
                           const std::filesystem::path& out_dir);

// Integrates a scenario's population layer and writes the trajectory.
CommandResult cmd_replicator(const std::filesystem::path& scenario_path,
                             const std::filesystem::path& out_dir);

// Rate-distortion sweep; by default the K-type one-hot instance under a
// uniform prior.
CommandResult cmd_rd_curve(const std::filesystem::path& out_dir, int num_types = 3,
                           std::vector<double> slope_grid = {});

// Regenerates the canonical scenario files.
CommandResult cmd_make_scenarios(const std::filesystem::path& dir);

} // namespace egpf::cli
