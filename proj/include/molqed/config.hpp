#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "molqed/cavity_coupling.hpp"
#include "molqed/error_budget.hpp"
#include "molqed/molecule.hpp"
#include "molqed/trap_model.hpp"

namespace molqed {

/// One scenario: molecule + trap + resonator + noise + operating point.
/// Parsed from strict JSON (unknown keys rejected); defaults reproduce the
/// CaBr reference point. All members are in internal units (SI, angular
/// frequencies); the config file uses the lab units named in its keys.
struct ScenarioConfig {
    MoleculeSpec molecule;

    struct StarkOpts {
        int N_max = 12;
        double field_max = 10e5;  // V/m
        int grid_points = 201;
    } stark;

    struct HyperfineOpts {
        int N_max = 6;
    } hyperfine;

    std::string trap_preset = "ez-reference";  // empty for inline geometry
    TrapGeometry trap;

    ResonatorSpec resonator;  // omega = 0 means "match the qubit at 4B"
    NoiseSpec noise;

    struct OperatingPoint {
        std::optional<double> bias_field;  // V/m; default: sweet spot
        double z0 = 0.07e-6;               // m
        double omega_t = 0;                // rad/s; 0: use 2pi x 5 MHz
        double Omega = 0;                  // rad/s; 0: use 2pi x 1 MHz
        std::optional<double> Delta;       // rad/s; default: optimum
        double Delta_r = 0;                // rad/s; 0: use 2pi x 5 MHz
        double T_r = 0.1;                  // K
        double n_bar = 0.0;
    } operating_point;

    struct CoolingOpts {
        double Omega = 0;       // rad/s; 0: use 2pi x 100 kHz
        double n_initial = 1.5;
        double n_thermal = 0.005;
        int N_fock = 3;
        int N_motion = 6;
        std::optional<double> t_final;  // s; default 3/Gamma_saturated
        int output_points = 300;
    } cooling;

    std::vector<std::string> outputs;  // empty: all artifacts of a command

    MoleculeRegistry registry = MoleculeRegistry::builtin();

    /// Derived quantities with defaults applied.
    double resonator_omega() const;  // = 4B when omega not set
    double omega_t_effective() const;
    double Omega_effective() const;
    double Delta_r_effective() const;
    double cooling_Omega_effective() const;
    bool wants(const std::string& artifact) const;
};

/// Parse a config file. An empty (or whitespace-only) file produces the
/// full-default CaBr reference scenario. Schema violations throw
/// ConfigError naming the offending key.
ScenarioConfig parse_config(const std::string& path);

/// Parse from a JSON value (the file contents).
ScenarioConfig parse_config_json(const nlohmann::json& j);

/// Serialize the effective configuration. Re-parsing the result yields an
/// identical configuration.
nlohmann::json config_to_json(const ScenarioConfig& cfg);

ScenarioConfig default_config();

}  // namespace molqed
