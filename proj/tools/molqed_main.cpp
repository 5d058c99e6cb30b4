// molqed: design calculations for polar molecules coupled to
// superconducting stripline resonators.

#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "molqed/config.hpp"
#include "molqed/error.hpp"
#include "molqed/scenario.hpp"

namespace {

struct SweepSpec {
    std::string key;
    double start = 0, stop = 0;
    int n = 0;
};

// KEY=start:stop:N
SweepSpec parse_sweep(const std::string& text) {
    SweepSpec s;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw molqed::ConfigError("--sweep expects KEY=start:stop:N");
    s.key = text.substr(0, eq);
    const std::string rng = text.substr(eq + 1);
    const auto c1 = rng.find(':');
    const auto c2 = rng.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw molqed::ConfigError("--sweep expects KEY=start:stop:N");
    try {
        s.start = std::stod(rng.substr(0, c1));
        s.stop = std::stod(rng.substr(c1 + 1, c2 - c1 - 1));
        s.n = std::stoi(rng.substr(c2 + 1));
    } catch (const std::exception&) {
        throw molqed::ConfigError("--sweep: could not parse '" + rng + "'");
    }
    if (s.n < 1) throw molqed::ConfigError("--sweep: N must be >= 1");
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "molqed: Stark structure, microtraps, resonator coupling, sideband "
        "cooling and error budgets for polar-molecule circuit QED"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "molqed_run", sweep_arg,
                format = "report";
    app.add_option("--config", config_path, "scenario config file (JSON)");
    app.add_option("--out", out_dir, "output directory (one per run)");
    app.add_option("--sweep", sweep_arg,
                   "sweep a numeric config key: KEY=start:stop:N");
    app.add_option("--format", format, "report | csv")
        ->check(CLI::IsMember({"report", "csv"}));

    for (const char* name : {"stark-map", "hyperfine", "trap", "coupling",
                             "cool", "budget", "report"})
        app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        const molqed::ScenarioConfig cfg =
            config_path.empty() ? molqed::default_config()
                                : molqed::parse_config(config_path);
        const auto cmd = molqed::subcommand_from_name(
            app.get_subcommands().at(0)->get_name());

        if (!sweep_arg.empty()) {
            const SweepSpec s = parse_sweep(sweep_arg);
            molqed::sweep_scenario(molqed::config_to_json(cfg), cmd, s.key,
                                   s.start, s.stop, s.n, out_dir);
            std::cout << "sweep written to " << out_dir << "/sweep.csv\n";
            return 0;
        }

        molqed::RunOptions opts;
        opts.out_dir = out_dir;
        opts.format = format;
        const auto report = molqed::run_scenario(cfg, cmd, opts);
        report.render_text(std::cout);
        std::cout << "outputs written to " << out_dir << "\n";
        return 0;
    } catch (const molqed::PhysicsError& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
