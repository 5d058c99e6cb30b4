#pragma once

#include <string>
#include <vector>

#include "molqed/config.hpp"
#include "molqed/report.hpp"

namespace molqed {

/// Subcommands of the design pipeline. "report" runs everything.
enum class Subcommand {
    stark_map,
    hyperfine,
    trap,
    coupling,
    cool,
    budget,
    report,
};

Subcommand subcommand_from_name(const std::string& name);
std::string subcommand_name(Subcommand cmd);

struct RunOptions {
    std::string out_dir;        // empty: no files written
    bool write_files = true;
    std::string format = "report";  // "report" or "csv"
};

/// Execute one scenario. Writes the config snapshot, report.txt and the
/// per-command CSV artifacts into out_dir (created if needed). Throws
/// ConfigError / Error on failures and PhysicsError for escalated physics
/// conditions; the CLI maps these to exit codes 1 and 2.
DesignReport run_scenario(const ScenarioConfig& cfg, Subcommand cmd,
                          const RunOptions& opts);

/// Sweep one numeric config key (dotted path, file units) across N
/// linearly spaced values, running `cmd` per point and collecting every
/// report entry into sweep.csv. Points run concurrently, capped by the
/// MOLQED_THREADS environment variable; results are merged in input
/// order.
void sweep_scenario(const nlohmann::json& base_config, Subcommand cmd,
                    const std::string& key, double start, double stop, int n,
                    const std::string& out_dir);

}  // namespace molqed
