#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "egpf/cli.hpp"

namespace {

std::optional<std::uint64_t> env_seed() {
    const char* value = std::getenv("EGPF_SEED");
    if (value == nullptr || *value == '\0') return std::nullopt;
    return std::strtoull(value, nullptr, 10);
}

int finish(const egpf::cli::CommandResult& result) {
    if (!result.summary.empty()) std::cout << result.summary << "\n";
    for (const auto& path : result.artifacts) std::cout << "wrote " << path.string() << "\n";
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"egpf - strategic physician-engagement simulation engine"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    int replications = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool list_only = false;
    int rd_types = 3;
    std::vector<double> slopes;

    auto* run = app.add_subcommand("run", "execute a scenario and emit metrics");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("-o,--out", out_dir, "output directory");
    run->add_option("-r,--replications", replications, "override replication count");
    run->add_option("-s,--seed", seed, "override RNG seed")->each([&](const std::string&) {
        seed_set = true;
    });

    auto* verify = app.add_subcommand("verify-paper", "run the worked-example golden checks");
    verify->add_option("-o,--out", out_dir, "output directory");
    verify->add_flag("--list", list_only, "list checks without running");

    auto* capacity =
        app.add_subcommand("capacity", "per-type engagement channel capacities");
    capacity->add_option("scenario", scenario_path, "scenario JSON file")->required();
    capacity->add_option("-o,--out", out_dir, "output directory");

    auto* replicator =
        app.add_subcommand("replicator", "integrate a scenario's population dynamics");
    replicator->add_option("scenario", scenario_path, "scenario JSON file")->required();
    replicator->add_option("-o,--out", out_dir, "output directory");

    auto* rd = app.add_subcommand("rd-curve", "rate-distortion sweep");
    rd->add_option("-o,--out", out_dir, "output directory");
    rd->add_option("-k,--types", rd_types, "number of types in the one-hot instance");
    rd->add_option("--slopes", slopes, "explicit slope grid");

    auto* make =
        app.add_subcommand("make-scenarios", "regenerate the canonical scenario files");
    make->add_option("-o,--out", out_dir, "scenario directory");

    CLI11_PARSE(app, argc, argv);

    std::optional<std::uint64_t> seed_override =
        seed_set ? std::optional<std::uint64_t>(seed) : env_seed();
    std::optional<int> reps_override =
        replications > 0 ? std::optional<int>(replications) : std::nullopt;

    if (run->parsed())
        return finish(egpf::cli::cmd_run(scenario_path, out_dir, reps_override, seed_override));
    if (verify->parsed()) return finish(egpf::cli::cmd_verify_paper(out_dir, list_only));
    if (capacity->parsed()) return finish(egpf::cli::cmd_capacity(scenario_path, out_dir));
    if (replicator->parsed()) return finish(egpf::cli::cmd_replicator(scenario_path, out_dir));
    if (rd->parsed()) return finish(egpf::cli::cmd_rd_curve(out_dir, rd_types, slopes));
    if (make->parsed()) return finish(egpf::cli::cmd_make_scenarios(out_dir));
    return 0;
}
