#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "molqed/config.hpp"
#include "molqed/constants.hpp"
#include "molqed/error.hpp"
#include "molqed/lindblad.hpp"
#include "molqed/scenario.hpp"

using namespace molqed;
using namespace molqed::constants;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() /
               ("molqed_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(bool(in));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("empty config file produces the reference CaBr scenario") {
    TempDir tmp("empty");
    spit(tmp.path / "cfg.json", "  \n\t\n");
    const auto cfg = parse_config((tmp.path / "cfg.json").string());
    CHECK(cfg.molecule.name == "CaBr");
    CHECK(cfg.molecule.B == doctest::Approx(two_pi * 2.83e9));
    CHECK(cfg.resonator.Q == 1e6);
    // resonator defaults to the zero-field qubit splitting 4B, so
    // Q = 1e6 gives kappa = 2pi x 11.32 kHz
    ResonatorSpec res = cfg.resonator;
    res.omega = cfg.resonator_omega();
    CHECK(res.kappa() == doctest::Approx(two_pi * 11.32e3).epsilon(1e-9));
    CHECK(cfg.trap_preset == "ez-reference");
}

TEST_CASE("explicit empty object equals defaults") {
    const auto cfg = parse_config_json(json::object());
    CHECK(cfg.molecule.name == "CaBr");
    CHECK(cfg.stark.N_max == 12);
}

TEST_CASE("unknown keys are rejected with the key path") {
    json j;
    j["resonator"]["Qfact"] = 1e5;
    CHECK_THROWS_WITH_AS(parse_config_json(j),
                         doctest::Contains("resonator.Qfact"), ConfigError);
    json j2;
    j2["totally_unknown"] = 1;
    CHECK_THROWS_AS(parse_config_json(j2), ConfigError);
}

TEST_CASE("schema violations name the offending key") {
    json j;
    j["molecule"] = {{"name", "Bad"},     {"mass_amu", -5.0},
                     {"mu_debye", 4.0},   {"B_GHz", 2.0},
                     {"I", 0.5},          {"S", 0.5}};
    CHECK_THROWS_WITH_AS(parse_config_json(j),
                         doctest::Contains("mass_amu"), ConfigError);

    json j2;
    j2["stark"]["N_max"] = 1;
    CHECK_THROWS_WITH_AS(parse_config_json(j2), doctest::Contains("N_max"),
                         ConfigError);
}

TEST_CASE("missing file raises a config error") {
    CHECK_THROWS_AS(parse_config("/nonexistent/path/cfg.json"), ConfigError);
}

TEST_CASE("registry entries are usable by name") {
    json j;
    j["registry"] = json::array();
    j["registry"].push_back({{"name", "SrF"},
                             {"mass_amu", 107.0},
                             {"mu_debye", 3.47},
                             {"B_GHz", 7.5},
                             {"I", 0.5},
                             {"S", 0.5}});
    j["molecule"] = "SrF";
    const auto cfg = parse_config_json(j);
    CHECK(cfg.molecule.name == "SrF");
    CHECK(cfg.molecule.B == doctest::Approx(two_pi * 7.5e9));
}

TEST_CASE("config round trip is stable") {
    json j;
    j["molecule"] = "CaBr";
    j["resonator"] = {{"Q", 5e5}, {"w_um", 0.2}};
    j["operating_point"] = {{"bias_field_kVcm", 3.0}, {"n_bar", 0.5}};
    j["trap"] = "ez-reference-x10";
    const auto cfg = parse_config_json(j);
    const json j1 = config_to_json(cfg);
    const auto cfg2 = parse_config_json(j1);
    const json j2 = config_to_json(cfg2);
    CHECK(j1.dump() == j2.dump());
    CHECK(cfg2.resonator.Q == cfg.resonator.Q);
    CHECK(*cfg2.operating_point.bias_field ==
          doctest::Approx(3e5).epsilon(1e-12));
}

TEST_CASE("inline trap geometry parses") {
    json j;
    j["trap"] = {{"w_um", 0.5},
                 {"segments",
                  json::array({{{"p1_um", {-1.0, 0.0, 0.0}},
                                {"p2_um", {1.0, 0.0, 0.0}},
                                {"voltage_V", 0.3},
                                {"wire_radius_um", 0.02}}})}};
    const auto cfg = parse_config_json(j);
    CHECK(cfg.trap.electrodes.size() == 1);
    CHECK(cfg.trap.electrodes[0].voltage == 0.3);
    CHECK(cfg.trap.w == doctest::Approx(0.5e-6));
    CHECK(cfg.trap_preset.empty());

    json bad = j;
    bad["trap"] = "no-such-preset";
    CHECK_THROWS_AS(parse_config_json(bad), ConfigError);
}

TEST_CASE("budget subcommand reports a sub-percent two-qubit error") {
    RunOptions opts;
    opts.write_files = false;
    const auto rep = run_scenario(default_config(), Subcommand::budget, opts);
    double p_err = -1, sweet = -1;
    for (const auto& [key, e] : rep.flat()) {
        if (key == "budget.p_err") p_err = e->value;
        if (key == "scenario.bias_field_kVcm") sweet = e->value;
    }
    CHECK(p_err >= 0);
    CHECK(p_err < 1e-2);
    // defaults bias the qubit at the sweet spot, near 4 kV/cm
    CHECK(sweet > 3.2);
    CHECK(sweet < 4.6);
}

TEST_CASE("stark-map outputs weak-field-seeking qubit states") {
    TempDir tmp("stark");
    json j;
    j["stark"] = {{"grid_points", 24}, {"field_max_kVcm", 6.0}};
    const auto cfg = parse_config_json(j);
    RunOptions opts;
    opts.out_dir = (tmp.path / "out").string();
    const auto rep = run_scenario(cfg, Subcommand::stark_map, opts);

    const std::string csv = slurp(tmp.path / "out" / "stark_map_m0.csv");
    std::istringstream lines(csv);
    std::string header, units;
    std::getline(lines, header);
    std::getline(lines, units);
    CHECK(header.substr(0, 26) == "field_Vcm,E_N0m0_GHz,E_N1m");
    CHECK(units.substr(0, 10) == "V/cm,h*GHz");
    // columns 2 and 3 (N=1, N=2) rise monotonically
    double prev1 = -1e300, prev2 = -1e300;
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
        REQUIRE(vals.size() >= 4);
        CHECK(vals[2] > prev1);
        CHECK(vals[3] > prev2);
        prev1 = vals[2];
        prev2 = vals[3];
        ++rows;
    }
    CHECK(rows == 24);

    // the sweet-spot line lands near 4 kV/cm
    for (const auto& [key, e] : rep.flat())
        if (key == "stark.sweet_spot_kVcm") {
            CHECK(e->value > 3.2);
            CHECK(e->value < 4.6);
        }
}

TEST_CASE("cool with N_fock = 1 fails model validation") {
    json j;
    j["cooling"] = {{"N_fock", 1}};
    const auto cfg = parse_config_json(j);
    RunOptions opts;
    opts.write_files = false;
    CHECK_THROWS_AS(run_scenario(cfg, Subcommand::cool, opts), Error);
    // the failure is a validation error, not an escalated physics
    // condition, so the CLI maps it to exit code 1
    try {
        run_scenario(cfg, Subcommand::cool, opts);
    } catch (const PhysicsError&) {
        FAIL("should not be a PhysicsError");
    } catch (const Error&) {
    }
}

TEST_CASE("report output is byte-identical across runs") {
    TempDir tmp("determinism");
    json j;
    j["outputs"] = {"budget_csv"};
    const auto cfg = parse_config_json(j);
    for (const char* dir : {"a", "b"}) {
        RunOptions opts;
        opts.out_dir = (tmp.path / dir).string();
        run_scenario(cfg, Subcommand::budget, opts);
    }
    CHECK(slurp(tmp.path / "a" / "report.txt") ==
          slurp(tmp.path / "b" / "report.txt"));
    CHECK(slurp(tmp.path / "a" / "budget.csv") ==
          slurp(tmp.path / "b" / "budget.csv"));
    CHECK(slurp(tmp.path / "a" / "config_snapshot.json") ==
          slurp(tmp.path / "b" / "config_snapshot.json"));
}

TEST_CASE("sweep runs points in order and writes one merged CSV") {
    TempDir tmp("sweep");
    setenv("MOLQED_THREADS", "2", 1);
    const json base = config_to_json(default_config());
    sweep_scenario(base, Subcommand::coupling, "resonator.w_um", 0.1, 1.0, 4,
                   (tmp.path / "out").string());
    const std::string csv = slurp(tmp.path / "out" / "sweep.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header.substr(0, 15) == "resonator.w_um,");
    CHECK(header.find("coupling.g_kHz") != std::string::npos);
    std::string units, row;
    std::getline(lines, units);
    std::vector<double> first_col;
    while (std::getline(lines, row))
        first_col.push_back(std::stod(row.substr(0, row.find(','))));
    REQUIRE(first_col.size() == 4);
    CHECK(first_col[0] == doctest::Approx(0.1));
    CHECK(first_col[3] == doctest::Approx(1.0));
    CHECK(first_col[1] < first_col[2]);  // merged in input order
    unsetenv("MOLQED_THREADS");
}

TEST_CASE("sweep rejects non-numeric or unknown keys") {
    const json base = config_to_json(default_config());
    CHECK_THROWS_AS(sweep_scenario(base, Subcommand::coupling,
                                   "molecule.name", 0, 1, 2, "/tmp/x"),
                    ConfigError);
    CHECK_THROWS_AS(sweep_scenario(base, Subcommand::coupling,
                                   "resonator.bogus", 0, 1, 2, "/tmp/x"),
                    ConfigError);
}

TEST_CASE("subcommand names round-trip") {
    for (const char* name : {"stark-map", "hyperfine", "trap", "coupling",
                             "cool", "budget", "report"})
        CHECK(subcommand_name(subcommand_from_name(name)) == name);
    CHECK_THROWS_AS(subcommand_from_name("bogus"), ConfigError);
}
