#include "molqed/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "molqed/constants.hpp"
#include "molqed/error.hpp"
#include "molqed/rotor_stark.hpp"

namespace molqed {

using namespace constants;
using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object())
        throw ConfigError("config: '" + where + "' must be an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key))
            throw ConfigError("config: unknown key '" + where + "." + key +
                              "'");
}

double require_positive(double v, const std::string& key) {
    if (!(v > 0))
        throw ConfigError("config: '" + key + "' must be > 0");
    return v;
}

double get_num(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw ConfigError("config: '" + key + "' must be a number");
    return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer())
        throw ConfigError("config: '" + key + "' must be an integer");
    return j.at(key).get<int>();
}

MoleculeSpec parse_molecule_object(const json& j, const std::string& where) {
    reject_unknown_keys(j,
                        {"name", "mass_amu", "mu_debye", "mu_MHz_per_Vcm",
                         "B_GHz", "gamma_sr_MHz", "b_MHz", "c_MHz", "eqQ_MHz",
                         "I", "S"},
                        where);
    MoleculeSpec m;
    if (!j.contains("name") || !j.at("name").is_string())
        throw ConfigError("config: '" + where + ".name' must be a string");
    m.name = j.at("name").get<std::string>();
    m.mass = require_positive(get_num(j, "mass_amu", 0), where + ".mass_amu") *
             amu;
    const bool has_debye = j.contains("mu_debye");
    const bool has_rate = j.contains("mu_MHz_per_Vcm");
    if (has_debye == has_rate)
        throw ConfigError("config: '" + where +
                          "' needs exactly one of mu_debye, mu_MHz_per_Vcm");
    if (has_debye)
        m.mu = require_positive(get_num(j, "mu_debye", 0),
                                where + ".mu_debye") *
               debye;
    else
        m.mu = require_positive(get_num(j, "mu_MHz_per_Vcm", 0),
                                where + ".mu_MHz_per_Vcm") *
               (two_pi * 1e6 * hbar / 1e2);
    m.B = require_positive(get_num(j, "B_GHz", 0), where + ".B_GHz") *
          (two_pi * 1e9);
    m.gamma_sr = get_num(j, "gamma_sr_MHz", 0) * (two_pi * 1e6);
    m.b_hf = get_num(j, "b_MHz", 0) * (two_pi * 1e6);
    m.c_hf = get_num(j, "c_MHz", 0) * (two_pi * 1e6);
    m.eqQ = get_num(j, "eqQ_MHz", 0) * (two_pi * 1e6);
    m.I_nuc = get_num(j, "I", 0);
    m.S_elec = get_num(j, "S", 0);
    m.validate();
    return m;
}

TrapGeometry parse_trap_object(const json& j) {
    reject_unknown_keys(
        j, {"segments", "bias_field_Vcm", "ground_plane", "w_um"}, "trap");
    TrapGeometry g;
    g.w = require_positive(get_num(j, "w_um", 0.1), "trap.w_um") * 1e-6;
    if (j.contains("ground_plane")) {
        if (!j.at("ground_plane").is_boolean())
            throw ConfigError("config: 'trap.ground_plane' must be boolean");
        g.ground_plane = j.at("ground_plane").get<bool>();
    }
    if (j.contains("bias_field_Vcm")) {
        const auto& b = j.at("bias_field_Vcm");
        if (!b.is_array() || b.size() != 3)
            throw ConfigError(
                "config: 'trap.bias_field_Vcm' must be a 3-vector");
        for (int k = 0; k < 3; ++k)
            g.bias_field[k] = b.at(k).get<double>() * 1e2;
    }
    if (!j.contains("segments") || !j.at("segments").is_array() ||
        j.at("segments").empty())
        throw ConfigError("config: 'trap.segments' must be a non-empty list");
    for (const auto& s : j.at("segments")) {
        reject_unknown_keys(s, {"p1_um", "p2_um", "voltage_V",
                                "wire_radius_um"},
                            "trap.segments[]");
        LineSegment seg;
        for (const auto* key : {"p1_um", "p2_um"}) {
            if (!s.contains(key) || !s.at(key).is_array() ||
                s.at(key).size() != 3)
                throw ConfigError(std::string("config: 'trap.segments[].") +
                                  key + "' must be a 3-vector");
        }
        for (int k = 0; k < 3; ++k) {
            seg.p1[k] = s.at("p1_um").at(k).get<double>() * 1e-6;
            seg.p2[k] = s.at("p2_um").at(k).get<double>() * 1e-6;
        }
        if (!s.contains("voltage_V"))
            throw ConfigError("config: 'trap.segments[].voltage_V' missing");
        seg.voltage = s.at("voltage_V").get<double>();
        seg.wire_radius =
            require_positive(get_num(s, "wire_radius_um", 0.01),
                             "trap.segments[].wire_radius_um") *
            1e-6;
        g.electrodes.push_back(seg);
    }
    return g;
}

json trap_to_json(const TrapGeometry& g) {
    json j;
    j["w_um"] = g.w / 1e-6;
    j["ground_plane"] = g.ground_plane;
    j["bias_field_Vcm"] = {g.bias_field[0] / 1e2, g.bias_field[1] / 1e2,
                           g.bias_field[2] / 1e2};
    j["segments"] = json::array();
    for (const auto& s : g.electrodes) {
        json seg;
        seg["p1_um"] = {s.p1[0] / 1e-6, s.p1[1] / 1e-6, s.p1[2] / 1e-6};
        seg["p2_um"] = {s.p2[0] / 1e-6, s.p2[1] / 1e-6, s.p2[2] / 1e-6};
        seg["voltage_V"] = s.voltage;
        seg["wire_radius_um"] = s.wire_radius / 1e-6;
        j["segments"].push_back(seg);
    }
    return j;
}

json molecule_to_json(const MoleculeSpec& m) {
    json j;
    j["name"] = m.name;
    j["mass_amu"] = m.mass / amu;
    j["mu_MHz_per_Vcm"] = m.mu / (two_pi * 1e6 * hbar / 1e2);
    j["B_GHz"] = m.B / (two_pi * 1e9);
    j["gamma_sr_MHz"] = m.gamma_sr / (two_pi * 1e6);
    j["b_MHz"] = m.b_hf / (two_pi * 1e6);
    j["c_MHz"] = m.c_hf / (two_pi * 1e6);
    j["eqQ_MHz"] = m.eqQ / (two_pi * 1e6);
    j["I"] = m.I_nuc;
    j["S"] = m.S_elec;
    return j;
}

}  // namespace

double ScenarioConfig::resonator_omega() const {
    return resonator.omega > 0 ? resonator.omega : 4.0 * molecule.B;
}

double ScenarioConfig::omega_t_effective() const {
    return operating_point.omega_t > 0 ? operating_point.omega_t
                                       : two_pi * 5e6;
}

double ScenarioConfig::Omega_effective() const {
    return operating_point.Omega > 0 ? operating_point.Omega : two_pi * 1e6;
}

double ScenarioConfig::Delta_r_effective() const {
    return operating_point.Delta_r > 0 ? operating_point.Delta_r
                                       : two_pi * 5e6;
}

double ScenarioConfig::cooling_Omega_effective() const {
    return cooling.Omega > 0 ? cooling.Omega : two_pi * 100e3;
}

bool ScenarioConfig::wants(const std::string& artifact) const {
    if (outputs.empty()) return true;
    for (const auto& o : outputs)
        if (o == artifact) return true;
    return false;
}

ScenarioConfig default_config() {
    ScenarioConfig cfg;
    cfg.molecule = lookup_molecule("CaBr");
    cfg.trap_preset = "ez-reference";
    cfg.trap = ez_reference_geometry();
    cfg.resonator.omega = 0;  // match the qubit
    cfg.resonator.Q = 1e6;
    cfg.resonator.Z0 = 50.0;
    cfg.resonator.w = 0.1e-6;
    return cfg;
}

ScenarioConfig parse_config_json(const json& j) {
    reject_unknown_keys(j,
                        {"molecule", "registry", "stark", "hyperfine", "trap",
                         "resonator", "noise", "operating_point", "cooling",
                         "outputs"},
                        "<root>");
    ScenarioConfig cfg = default_config();

    if (j.contains("registry")) {
        if (!j.at("registry").is_array())
            throw ConfigError("config: 'registry' must be a list");
        for (const auto& entry : j.at("registry"))
            cfg.registry.add(parse_molecule_object(entry, "registry[]"));
    }

    if (j.contains("molecule")) {
        const auto& m = j.at("molecule");
        if (m.is_string())
            cfg.molecule = cfg.registry.lookup(m.get<std::string>());
        else
            cfg.molecule = parse_molecule_object(m, "molecule");
    }

    if (j.contains("stark")) {
        const auto& s = j.at("stark");
        reject_unknown_keys(s, {"N_max", "field_max_kVcm", "grid_points"},
                            "stark");
        cfg.stark.N_max = get_int(s, "N_max", cfg.stark.N_max);
        if (cfg.stark.N_max < 2)
            throw ConfigError("config: 'stark.N_max' must be >= 2");
        cfg.stark.field_max =
            require_positive(get_num(s, "field_max_kVcm",
                                     cfg.stark.field_max / 1e5),
                             "stark.field_max_kVcm") *
            1e5;
        cfg.stark.grid_points = get_int(s, "grid_points",
                                        cfg.stark.grid_points);
        if (cfg.stark.grid_points < 2)
            throw ConfigError("config: 'stark.grid_points' must be >= 2");
    }

    if (j.contains("hyperfine")) {
        const auto& s = j.at("hyperfine");
        reject_unknown_keys(s, {"N_max"}, "hyperfine");
        cfg.hyperfine.N_max = get_int(s, "N_max", cfg.hyperfine.N_max);
        if (cfg.hyperfine.N_max < 2)
            throw ConfigError("config: 'hyperfine.N_max' must be >= 2");
    }

    if (j.contains("trap")) {
        const auto& t = j.at("trap");
        if (t.is_string()) {
            const auto name = t.get<std::string>();
            if (name == "ez-reference")
                cfg.trap = ez_reference_geometry(1.0);
            else if (name == "ez-reference-x10")
                cfg.trap = ez_reference_geometry(10.0);
            else
                throw ConfigError("config: unknown trap preset '" + name +
                                  "' (ez-reference, ez-reference-x10)");
            cfg.trap_preset = name;
        } else {
            cfg.trap = parse_trap_object(t);
            cfg.trap_preset.clear();
        }
    }

    if (j.contains("resonator")) {
        const auto& r = j.at("resonator");
        reject_unknown_keys(r, {"freq_GHz", "Q", "Z0_ohm", "w_um"},
                            "resonator");
        if (r.contains("freq_GHz") && !r.at("freq_GHz").is_null())
            cfg.resonator.omega =
                require_positive(get_num(r, "freq_GHz", 0),
                                 "resonator.freq_GHz") *
                (two_pi * 1e9);
        cfg.resonator.Q =
            require_positive(get_num(r, "Q", cfg.resonator.Q), "resonator.Q");
        cfg.resonator.Z0 = require_positive(
            get_num(r, "Z0_ohm", cfg.resonator.Z0), "resonator.Z0_ohm");
        cfg.resonator.w =
            require_positive(get_num(r, "w_um", cfg.resonator.w / 1e-6),
                             "resonator.w_um") *
            1e-6;
    }

    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        reject_unknown_keys(
            n, {"S_Q_coeff", "C_t_fF", "V_EZ_V", "V_rms_eff_uV", "T_N_K"},
            "noise");
        cfg.noise.S_Q_coeff = get_num(n, "S_Q_coeff", cfg.noise.S_Q_coeff);
        if (cfg.noise.S_Q_coeff < 0)
            throw ConfigError("config: 'noise.S_Q_coeff' must be >= 0");
        cfg.noise.C_t =
            require_positive(get_num(n, "C_t_fF", cfg.noise.C_t / 1e-15),
                             "noise.C_t_fF") *
            1e-15;
        cfg.noise.V_EZ = require_positive(
            get_num(n, "V_EZ_V", cfg.noise.V_EZ), "noise.V_EZ_V");
        cfg.noise.V_rms_eff =
            get_num(n, "V_rms_eff_uV", cfg.noise.V_rms_eff / 1e-6) * 1e-6;
        if (cfg.noise.V_rms_eff < 0)
            throw ConfigError("config: 'noise.V_rms_eff_uV' must be >= 0");
        cfg.noise.T_N = require_positive(get_num(n, "T_N_K", cfg.noise.T_N),
                                         "noise.T_N_K");
    }

    if (j.contains("operating_point")) {
        const auto& o = j.at("operating_point");
        reject_unknown_keys(o,
                            {"bias_field_kVcm", "z0_um", "omega_t_MHz",
                             "Omega_MHz", "Delta_MHz", "Delta_r_MHz",
                             "T_r_mK", "n_bar"},
                            "operating_point");
        auto& op = cfg.operating_point;
        if (o.contains("bias_field_kVcm") &&
            !o.at("bias_field_kVcm").is_null()) {
            op.bias_field = get_num(o, "bias_field_kVcm", 0) * 1e5;
            if (*op.bias_field < 0)
                throw ConfigError(
                    "config: 'operating_point.bias_field_kVcm' must be >= 0");
        }
        op.z0 = require_positive(get_num(o, "z0_um", op.z0 / 1e-6),
                                 "operating_point.z0_um") *
                1e-6;
        if (o.contains("omega_t_MHz"))
            op.omega_t = require_positive(get_num(o, "omega_t_MHz", 0),
                                          "operating_point.omega_t_MHz") *
                         (two_pi * 1e6);
        if (o.contains("Omega_MHz"))
            op.Omega = require_positive(get_num(o, "Omega_MHz", 0),
                                        "operating_point.Omega_MHz") *
                       (two_pi * 1e6);
        if (o.contains("Delta_MHz") && !o.at("Delta_MHz").is_null())
            op.Delta = require_positive(get_num(o, "Delta_MHz", 0),
                                        "operating_point.Delta_MHz") *
                       (two_pi * 1e6);
        if (o.contains("Delta_r_MHz"))
            op.Delta_r = require_positive(get_num(o, "Delta_r_MHz", 0),
                                          "operating_point.Delta_r_MHz") *
                         (two_pi * 1e6);
        op.T_r = require_positive(get_num(o, "T_r_mK", op.T_r / 1e-3),
                                  "operating_point.T_r_mK") *
                 1e-3;
        op.n_bar = get_num(o, "n_bar", op.n_bar);
        if (op.n_bar < 0)
            throw ConfigError("config: 'operating_point.n_bar' must be >= 0");
    }

    if (j.contains("cooling")) {
        const auto& c = j.at("cooling");
        reject_unknown_keys(c,
                            {"Omega_kHz", "n_initial", "n_thermal", "N_fock",
                             "N_motion", "t_final_us", "output_points"},
                            "cooling");
        auto& co = cfg.cooling;
        if (c.contains("Omega_kHz"))
            co.Omega = require_positive(get_num(c, "Omega_kHz", 0),
                                        "cooling.Omega_kHz") *
                       (two_pi * 1e3);
        co.n_initial = get_num(c, "n_initial", co.n_initial);
        if (co.n_initial < 0)
            throw ConfigError("config: 'cooling.n_initial' must be >= 0");
        co.n_thermal = get_num(c, "n_thermal", co.n_thermal);
        if (co.n_thermal < 0)
            throw ConfigError("config: 'cooling.n_thermal' must be >= 0");
        co.N_fock = get_int(c, "N_fock", co.N_fock);
        co.N_motion = get_int(c, "N_motion", co.N_motion);
        if (c.contains("t_final_us") && !c.at("t_final_us").is_null())
            co.t_final = require_positive(get_num(c, "t_final_us", 0),
                                          "cooling.t_final_us") *
                         1e-6;
        co.output_points = get_int(c, "output_points", co.output_points);
        if (co.output_points < 8)
            throw ConfigError("config: 'cooling.output_points' must be >= 8");
    }

    if (j.contains("outputs")) {
        if (!j.at("outputs").is_array())
            throw ConfigError("config: 'outputs' must be a list of strings");
        for (const auto& o : j.at("outputs")) {
            if (!o.is_string())
                throw ConfigError("config: 'outputs' entries must be strings");
            cfg.outputs.push_back(o.get<std::string>());
        }
    }
    return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    bool blank = true;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) {
            blank = false;
            break;
        }
    if (blank) return default_config();

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: JSON parse error in '" + path +
                          "': " + e.what());
    }
    return parse_config_json(j);
}

nlohmann::json config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["molecule"] = molecule_to_json(cfg.molecule);
    j["stark"] = {{"N_max", cfg.stark.N_max},
                  {"field_max_kVcm", cfg.stark.field_max / 1e5},
                  {"grid_points", cfg.stark.grid_points}};
    j["hyperfine"] = {{"N_max", cfg.hyperfine.N_max}};
    if (!cfg.trap_preset.empty())
        j["trap"] = cfg.trap_preset;
    else
        j["trap"] = trap_to_json(cfg.trap);
    j["resonator"] = json::object();
    if (cfg.resonator.omega > 0)
        j["resonator"]["freq_GHz"] = cfg.resonator.omega / (two_pi * 1e9);
    j["resonator"]["Q"] = cfg.resonator.Q;
    j["resonator"]["Z0_ohm"] = cfg.resonator.Z0;
    j["resonator"]["w_um"] = cfg.resonator.w / 1e-6;
    j["noise"] = {{"S_Q_coeff", cfg.noise.S_Q_coeff},
                  {"C_t_fF", cfg.noise.C_t / 1e-15},
                  {"V_EZ_V", cfg.noise.V_EZ},
                  {"V_rms_eff_uV", cfg.noise.V_rms_eff / 1e-6},
                  {"T_N_K", cfg.noise.T_N}};
    json op = json::object();
    if (cfg.operating_point.bias_field)
        op["bias_field_kVcm"] = *cfg.operating_point.bias_field / 1e5;
    op["z0_um"] = cfg.operating_point.z0 / 1e-6;
    if (cfg.operating_point.omega_t > 0)
        op["omega_t_MHz"] = cfg.operating_point.omega_t / (two_pi * 1e6);
    if (cfg.operating_point.Omega > 0)
        op["Omega_MHz"] = cfg.operating_point.Omega / (two_pi * 1e6);
    if (cfg.operating_point.Delta)
        op["Delta_MHz"] = *cfg.operating_point.Delta / (two_pi * 1e6);
    if (cfg.operating_point.Delta_r > 0)
        op["Delta_r_MHz"] = cfg.operating_point.Delta_r / (two_pi * 1e6);
    op["T_r_mK"] = cfg.operating_point.T_r / 1e-3;
    op["n_bar"] = cfg.operating_point.n_bar;
    j["operating_point"] = op;
    json co = json::object();
    if (cfg.cooling.Omega > 0)
        co["Omega_kHz"] = cfg.cooling.Omega / (two_pi * 1e3);
    co["n_initial"] = cfg.cooling.n_initial;
    co["n_thermal"] = cfg.cooling.n_thermal;
    co["N_fock"] = cfg.cooling.N_fock;
    co["N_motion"] = cfg.cooling.N_motion;
    if (cfg.cooling.t_final) co["t_final_us"] = *cfg.cooling.t_final / 1e-6;
    co["output_points"] = cfg.cooling.output_points;
    j["cooling"] = co;
    if (!cfg.outputs.empty()) j["outputs"] = cfg.outputs;
    return j;
}

}  // namespace molqed
