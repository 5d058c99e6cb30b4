#include "molqed/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "molqed/constants.hpp"
#include "molqed/error.hpp"
#include "molqed/hyperfine.hpp"
#include "molqed/lindblad.hpp"
#include "molqed/rotor_stark.hpp"

namespace molqed {

using namespace constants;
namespace fs = std::filesystem;

Subcommand subcommand_from_name(const std::string& name) {
    if (name == "stark-map") return Subcommand::stark_map;
    if (name == "hyperfine") return Subcommand::hyperfine;
    if (name == "trap") return Subcommand::trap;
    if (name == "coupling") return Subcommand::coupling;
    if (name == "cool") return Subcommand::cool;
    if (name == "budget") return Subcommand::budget;
    if (name == "report") return Subcommand::report;
    throw ConfigError("unknown subcommand '" + name + "'");
}

std::string subcommand_name(Subcommand cmd) {
    switch (cmd) {
        case Subcommand::stark_map: return "stark-map";
        case Subcommand::hyperfine: return "hyperfine";
        case Subcommand::trap: return "trap";
        case Subcommand::coupling: return "coupling";
        case Subcommand::cool: return "cool";
        case Subcommand::budget: return "budget";
        case Subcommand::report: return "report";
    }
    return "?";
}

namespace {

struct RunContext {
    const ScenarioConfig& cfg;
    const RunOptions& opts;
    double bias = 0;      // resolved operating bias field, V/m
    double sweet = 0;     // sweet-spot field, V/m
};

void write_file(const RunOptions& opts, const std::string& name,
                const std::string& contents) {
    if (!opts.write_files || opts.out_dir.empty()) return;
    std::ofstream out(fs::path(opts.out_dir) / name);
    if (!out)
        throw Error("cannot write output file '" + name + "'");
    out << contents;
}

void run_stark(RunContext& ctx, DesignReport& rep) {
    const auto& cfg = ctx.cfg;
    const auto& mol = cfg.molecule;
    auto& sec = rep.section("stark");

    sec.add("omega0_zero_field_GHz",
            qubit_splitting(mol, 0.0, cfg.stark.N_max) / (two_pi * 1e9),
            "GHz", Provenance::numeric);
    sec.add("sweet_spot_kVcm", ctx.sweet / 1e5, "kV/cm", Provenance::numeric);
    sec.add("omega0_at_sweet_GHz",
            qubit_splitting(mol, ctx.sweet, cfg.stark.N_max) / (two_pi * 1e9),
            "GHz", Provenance::numeric);
    sec.add("domega0_dE_linear_kHz_per_Vcm",
            linear_regime_sensitivity(mol, cfg.stark.N_max) /
                (two_pi * 1e3 / 1e2),
            "kHz/(V/cm)", Provenance::numeric);
    sec.add("d2omega0_dE2_sweet_Hz_per_Vcm2",
            std::abs(splitting_sensitivity(mol, ctx.sweet, cfg.stark.N_max,
                                           2)) /
                (two_pi / 1e4),
            "Hz/(V/cm)^2", Provenance::numeric);

    const auto depth = max_trap_depth(mol, cfg.stark.N_max);
    sec.add("U_max_mK", depth.U_max / k_B * 1e3, "mK", Provenance::numeric);
    sec.add("E_at_Umax_kVcm", depth.E_at_max / 1e5, "kV/cm",
            Provenance::numeric);
    const double U_sweet = tracked_energy(mol, {1, 0}, ctx.sweet,
                                          cfg.stark.N_max) -
                           tracked_energy(mol, {1, 0}, 0.0, cfg.stark.N_max);
    sec.add("depth_biased_at_sweet_mK", (depth.U_max - U_sweet) / k_B * 1e3,
            "mK", Provenance::numeric);

    if (cfg.wants("stark_map") && ctx.opts.write_files) {
        Eigen::VectorXd grid(cfg.stark.grid_points);
        for (int i = 0; i < cfg.stark.grid_points; ++i)
            grid[i] = cfg.stark.field_max * (i + 1.0) / cfg.stark.grid_points;
        for (int m = 0; m <= 2; ++m) {
            const auto map = stark_map(mol, grid, cfg.stark.N_max, m);
            std::vector<std::string> cols{"field_Vcm"}, units{"V/cm"};
            for (const auto& lbl : map.labels) {
                cols.push_back("E_N" + std::to_string(lbl.N) + "m" +
                               std::to_string(lbl.m_N) + "_GHz");
                units.push_back("h*GHz");
            }
            CsvWriter csv(cols, units);
            for (int i = 0; i < grid.size(); ++i) {
                std::vector<double> row{grid[i] / 1e2};
                for (int s = 0; s < map.eigenvalues.cols(); ++s)
                    row.push_back(map.eigenvalues(i, s) / h_planck / 1e9);
                csv.add_row(row);
            }
            std::ostringstream os;
            csv.write(os);
            write_file(ctx.opts, "stark_map_m" + std::to_string(m) + ".csv",
                       os.str());
        }
    }
}

void run_hyperfine(RunContext& ctx, DesignReport& rep) {
    const auto& cfg = ctx.cfg;
    const auto& mol = cfg.molecule;
    auto& sec = rep.section("hyperfine");

    const auto spec = hyperfine_spectrum(mol, ctx.bias, cfg.hyperfine.N_max);
    sec.add("basis_size", spec.basis_size, "", Provenance::numeric);
    sec.add("delta_omega_h_MHz",
            qubit_hyperfine_offset(mol, ctx.bias, cfg.hyperfine.N_max) /
                (two_pi * 1e6),
            "MHz", Provenance::numeric);

    // spread of the N=1, m_N=0 manifold
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& l : spec.levels)
        if (l.N == 1 && l.m_N == 0) {
            lo = std::min(lo, l.energy);
            hi = std::max(hi, l.energy);
        }
    sec.add("N1_manifold_spread_MHz", (hi - lo) / hbar / (two_pi * 1e6),
            "MHz", Provenance::numeric);

    if (cfg.wants("hyperfine_levels") && ctx.opts.write_files) {
        // energies relative to the mean of each (N, m_N) manifold
        std::map<std::pair<int, int>, std::pair<double, int>> manifold;
        for (const auto& l : spec.levels) {
            auto& m = manifold[{l.N, l.m_N}];
            m.first += l.energy;
            m.second += 1;
        }
        CsvWriter csv({"energy_MHz", "N", "m_N", "F3", "MF3", "purity"},
                      {"MHz", "", "", "", "", ""});
        for (const auto& l : spec.levels) {
            const auto& m = manifold[{l.N, l.m_N}];
            csv.add_row({(l.energy - m.first / m.second) / hbar /
                             (two_pi * 1e6),
                         double(l.N), double(l.m_N), double(l.F3),
                         double(l.M_F3), l.purity});
        }
        std::ostringstream os;
        csv.write(os);
        write_file(ctx.opts, "hyperfine_levels.csv", os.str());
    }
}

TrapCharacterization run_trap(RunContext& ctx, DesignReport& rep) {
    const auto& cfg = ctx.cfg;
    auto& sec = rep.section("trap");
    const auto ch = characterize_trap(cfg.trap, cfg.molecule,
                                      std::min(cfg.stark.N_max, 10));
    sec.add("r0_x_um", ch.r0.x() * 1e6, "um", Provenance::numeric);
    sec.add("r0_y_um", ch.r0.y() * 1e6, "um", Provenance::numeric);
    sec.add("r0_z_um", ch.r0.z() * 1e6, "um", Provenance::numeric);
    sec.add("E_off_kVcm", ch.E_off / 1e5, "kV/cm", Provenance::numeric);
    sec.add("omega_t_axis1_MHz", ch.omega_t[0] / (two_pi * 1e6), "MHz",
            Provenance::numeric);
    sec.add("omega_t_axis2_MHz", ch.omega_t[1] / (two_pi * 1e6), "MHz",
            Provenance::numeric);
    sec.add("omega_t_z_MHz", ch.omega_t[2] / (two_pi * 1e6), "MHz",
            Provenance::numeric);
    sec.add("omega_t_state2_z_MHz", ch.omega_t_state2[2] / (two_pi * 1e6),
            "MHz", Provenance::numeric);
    sec.add("depth_mK", ch.depth / k_B * 1e3, "mK", Provenance::numeric);
    sec.add("depth_vdw_mK", ch.depth_vdw / k_B * 1e3, "mK",
            Provenance::numeric);
    sec.add("vdw_shift_rel", ch.vdw_shift, "", Provenance::formula);
    sec.add("loading_Phi_cm3_K32",
            loading_phase_space_target(cfg.trap.w, ch.depth), "cm^-3 K^-3/2",
            Provenance::order_of_magnitude);

    // scaling reference U0 ~ 0.1 mu Emax with Emax ~ V/w; flag deviations
    double v_max = 0;
    for (const auto& e : cfg.trap.electrodes)
        v_max = std::max(v_max, std::abs(e.voltage));
    const double U_scale = 0.1 * cfg.molecule.mu * v_max / cfg.trap.w;
    auto& ratio = sec.add("depth_vs_0.1muEmax", ch.depth / U_scale, "",
                          Provenance::order_of_magnitude);
    if (ch.depth / U_scale < 0.2 || ch.depth / U_scale > 5.0)
        ratio.warnings.push_back(
            "trap depth deviates from the 0.1 mu Emax scaling estimate");

    if (cfg.wants("trap_field_map") && ctx.opts.write_files) {
        const auto sol = solve_charges(cfg.trap);
        CsvWriter csv({"y_um", "z_um", "Ex_Vcm", "Ey_Vcm", "Ez_Vcm", "U_mK"},
                      {"um", "um", "V/cm", "V/cm", "V/cm", "mK"});
        const double w = cfg.trap.w;
        const double E1_0 = tracked_energy(cfg.molecule, {1, 0}, 0.0, 10);
        for (int iy = 0; iy <= 40; ++iy)
            for (int iz = 0; iz <= 40; ++iz) {
                const Eigen::Vector3d r(0.0, -2 * w + 4 * w * iy / 40.0,
                                        0.1 * w + 2.9 * w * iz / 40.0);
                try {
                    const auto E = field_at(cfg.trap, sol, r);
                    const double U =
                        tracked_energy(cfg.molecule, {1, 0}, E.norm(), 10) -
                        E1_0;
                    csv.add_row({r.y() * 1e6, r.z() * 1e6, E.x() / 1e2,
                                 E.y() / 1e2, E.z() / 1e2, U / k_B * 1e3});
                } catch (const Error&) {
                    // inside an electrode; skip the grid point
                }
            }
        std::ostringstream os;
        csv.write(os);
        write_file(ctx.opts, "trap_field_map.csv", os.str());
    }
    return ch;
}

CouplingResult run_coupling(RunContext& ctx, DesignReport& rep) {
    const auto& cfg = ctx.cfg;
    auto& sec = rep.section("coupling");
    ResonatorSpec res = cfg.resonator;
    res.omega = cfg.resonator_omega();
    const double omega_t = cfg.omega_t_effective();

    const auto c = vacuum_rabi(res, cfg.molecule, cfg.operating_point.z0,
                               ctx.bias, true, omega_t, cfg.stark.N_max);
    sec.add("resonator_freq_GHz", res.omega / (two_pi * 1e9), "GHz",
            Provenance::formula);
    sec.add("kappa_kHz", res.kappa() / (two_pi * 1e3), "kHz",
            Provenance::formula);
    sec.add("C_pF", resonator_capacitance(res) * 1e12, "pF",
            Provenance::formula);
    sec.add("V0_uV", c.V0 * 1e6, "uV", Provenance::formula);
    sec.add("E0_Vm", c.E0, "V/m", Provenance::formula);
    sec.add("wp_over_mu", c.wp / cfg.molecule.mu, "", Provenance::numeric);
    sec.add("g_kHz", c.g / (two_pi * 1e3), "kHz", Provenance::numeric);
    const auto ld = lamb_dicke(cfg.molecule, omega_t, cfg.operating_point.z0);
    sec.add("a0_nm", ld.a0 * 1e9, "nm", Provenance::formula);
    auto& eta = sec.add("eta", ld.eta, "", Provenance::formula);
    if (ld.eta > kEtaWarnThreshold)
        eta.warnings.push_back("Lamb-Dicke parameter exceeds 0.3");
    return c;
}

void run_cool(RunContext& ctx, DesignReport& rep, const CouplingResult& c) {
    const auto& cfg = ctx.cfg;
    auto& sec = rep.section("cooling");
    ResonatorSpec res = cfg.resonator;
    res.omega = cfg.resonator_omega();
    const double omega_t = cfg.omega_t_effective();

    const auto rates = cooling_rate_analytic(c.g, res.kappa(), c.eta,
                                             cfg.cooling_Omega_effective());
    sec.add("gamma_sp_kHz", rates.gamma_sp / (two_pi * 1e3), "kHz",
            Provenance::formula);
    sec.add("gamma_purcell_kHz", rates.gamma_purcell / (two_pi * 1e3), "kHz",
            Provenance::formula);
    sec.add("Gamma_c_weak_kHz", rates.Gamma_c_weak / (two_pi * 1e3), "kHz",
            Provenance::formula);
    sec.add("Gamma_c_saturated_kHz", rates.Gamma_c_saturated / (two_pi * 1e3),
            "kHz", Provenance::formula);
    sec.add("dEdt_K_per_s",
            hbar * omega_t * rates.Gamma_c_saturated / k_B, "K/s",
            Provenance::formula);

    const auto ft = final_temperature(omega_t, res.omega,
                                      cfg.operating_point.T_r);
    sec.add("n_gamma_thermal", ft.n_gamma, "", Provenance::formula);
    sec.add("T_trap_uK", ft.T_trap * 1e6, "uK", Provenance::formula);
    sec.add("R_omega_ratio", ft.R_ratio, "", Provenance::formula);

    // master-equation trajectory
    auto model = build_cooling_model(c, res, omega_t,
                                     cfg.cooling_Omega_effective(),
                                     cfg.cooling.n_thermal,
                                     cfg.cooling.N_fock, cfg.cooling.N_motion);
    // in strong coupling the red sideband sits at the dressed line
    // omega_0 - omega_t - g0; park the drive there
    if (model.strong_coupling())
        model.drive_detuning = -omega_t - model.g0;
    sec.add("drive_detuning_MHz", model.drive_detuning / (two_pi * 1e6),
            "MHz", Provenance::formula);
    const double t_final = cfg.cooling.t_final
                               ? *cfg.cooling.t_final
                               : 3.0 / rates.Gamma_c_saturated;
    const auto rho0 = initial_state(
        model, false, thermal_state(cfg.cooling.n_initial, model.N_motion));
    const auto traj = evolve(model, rho0, t_final,
                             t_final / cfg.cooling.output_points);
    sec.add("sim_n_motion_initial", traj.mean_n_motion[0], "",
            Provenance::simulation);
    sec.add("sim_n_motion_final",
            traj.mean_n_motion[traj.mean_n_motion.size() - 1], "",
            Provenance::simulation);
    sec.add("sim_trace_error_max", traj.trace_error.maxCoeff(), "",
            Provenance::simulation);
    sec.add("sim_min_eigenvalue", traj.min_eigenvalue, "",
            Provenance::simulation);
    auto& sc = sec.add("strong_coupling_flag",
                       model.strong_coupling() ? 1.0 : 0.0, "",
                       Provenance::formula);
    if (model.strong_coupling())
        sc.warnings.push_back(
            "g exceeds kappa: weak-drive rate formula is out of regime; "
            "saturated bound applies");

    if (cfg.wants("trajectory") && ctx.opts.write_files) {
        CsvWriter csv({"t_us", "n_motion", "n_cavity", "pop_excited"},
                      {"us", "", "", ""});
        for (int i = 0; i < traj.times.size(); ++i)
            csv.add_row({traj.times[i] * 1e6, traj.mean_n_motion[i],
                         traj.mean_n_cavity[i], traj.excited_population[i]});
        std::ostringstream os;
        csv.write(os);
        write_file(ctx.opts, "trajectory.csv", os.str());
    }
}

void run_budget(RunContext& ctx, DesignReport& rep, const CouplingResult& c) {
    const auto& cfg = ctx.cfg;
    auto& sec = rep.section("budget");
    ResonatorSpec res = cfg.resonator;
    res.omega = cfg.resonator_omega();

    BudgetInputs in;
    in.mol = cfg.molecule;
    in.noise = cfg.noise;
    in.E_dc_bias = ctx.bias;
    in.w = cfg.trap.w;
    in.omega_t = cfg.omega_t_effective();
    in.n_bar = cfg.operating_point.n_bar;
    in.g = c.g;
    in.kappa = res.kappa();
    in.omega0 = qubit_splitting(cfg.molecule, ctx.bias, cfg.stark.N_max);
    in.Omega_rabi = cfg.Omega_effective();
    in.Delta = cfg.operating_point.Delta;
    in.Delta_r = cfg.Delta_r_effective();
    in.N_max = cfg.stark.N_max;
    const auto b = assemble_budget(in);

    sec.add("gamma_V_kHz", b.gamma_V / (two_pi * 1e3), "kHz",
            Provenance::order_of_magnitude);
    sec.add("gamma_V2_Hz", b.gamma_V2 / two_pi, "Hz",
            Provenance::order_of_magnitude);
    sec.add("gamma_T_Hz", b.gamma_T / two_pi, "Hz",
            Provenance::order_of_magnitude);
    sec.add("gamma_T_hf_Hz", b.gamma_T_hf / two_pi, "Hz",
            Provenance::order_of_magnitude);
    sec.add("gamma_star_Hz", b.gamma_star / two_pi, "Hz",
            Provenance::order_of_magnitude);
    sec.add("Gamma_01_Hz", b.Gamma_01 / two_pi, "Hz",
            Provenance::order_of_magnitude);
    sec.add("p_1q", b.p_1q, "", Provenance::formula);
    sec.add("tau_2q_us", b.tau_2q * 1e6, "us", Provenance::formula);
    sec.add("Delta_opt_MHz", b.Delta_opt / (two_pi * 1e6), "MHz",
            Provenance::formula);
    sec.add("p_sp", b.p_sp, "", Provenance::formula);
    sec.add("p_dep", b.p_dep, "", Provenance::formula);
    sec.add("p_err", b.p_err, "", Provenance::formula);
    sec.add("theta0_deg", b.theta0 * 180.0 / pi, "deg", Provenance::formula);
    sec.add("n_crit", b.n_crit, "", Provenance::formula);
    sec.add("P_read_W", b.P_read, "W", Provenance::formula);
    sec.add("SNR", b.SNR, "", Provenance::formula);
    sec.add("gamma_kappa_Hz", b.gamma_kappa / two_pi, "Hz",
            Provenance::formula);
    sec.add("T1_readout_ms", b.T1_readout * 1e3, "ms", Provenance::formula);

    if (cfg.wants("budget_csv") && ctx.opts.write_files) {
        std::vector<std::string> cols, units;
        std::vector<double> row;
        for (const auto& [key, entry] : rep.flat()) {
            if (key.rfind("budget.", 0) != 0) continue;
            cols.push_back(key.substr(7));
            units.push_back(entry->unit);
            row.push_back(entry->value);
        }
        CsvWriter csv(cols, units);
        csv.add_row(row);
        std::ostringstream os;
        csv.write(os);
        write_file(ctx.opts, "budget.csv", os.str());
    }
}

}  // namespace

DesignReport run_scenario(const ScenarioConfig& cfg, Subcommand cmd,
                          const RunOptions& opts) {
    if (opts.write_files && !opts.out_dir.empty())
        fs::create_directories(opts.out_dir);

    RunContext ctx{cfg, opts};
    ctx.sweet = find_sweet_spot(cfg.molecule, cfg.stark.N_max);
    ctx.bias = cfg.operating_point.bias_field
                   ? *cfg.operating_point.bias_field
                   : ctx.sweet;

    DesignReport rep;
    auto& meta = rep.section("scenario");
    meta.add("bias_field_kVcm", ctx.bias / 1e5, "kV/cm",
             cfg.operating_point.bias_field ? Provenance::formula
                                            : Provenance::numeric);

    const bool all = cmd == Subcommand::report;
    CouplingResult coupling;
    bool have_coupling = false;
    auto ensure_coupling = [&] {
        if (!have_coupling) {
            coupling = run_coupling(ctx, rep);
            have_coupling = true;
        }
    };

    if (all || cmd == Subcommand::stark_map) run_stark(ctx, rep);
    if (all || cmd == Subcommand::hyperfine) run_hyperfine(ctx, rep);
    if (all || cmd == Subcommand::trap) run_trap(ctx, rep);
    if (all || cmd == Subcommand::coupling || cmd == Subcommand::cool ||
        cmd == Subcommand::budget)
        ensure_coupling();
    if (all || cmd == Subcommand::cool) run_cool(ctx, rep, coupling);
    if (all || cmd == Subcommand::budget) run_budget(ctx, rep, coupling);

    if (opts.write_files && !opts.out_dir.empty()) {
        std::ostringstream os;
        rep.render_text(os);
        write_file(opts, "report.txt", os.str());
        write_file(opts, "config_snapshot.json",
                   config_to_json(cfg).dump(2) + "\n");
        if (opts.format == "csv") {
            std::vector<std::string> cols, units;
            std::vector<double> row;
            for (const auto& [key, entry] : rep.flat()) {
                cols.push_back(key);
                units.push_back(entry->unit);
                row.push_back(entry->value);
            }
            CsvWriter csv(cols, units);
            csv.add_row(row);
            std::ostringstream cs;
            csv.write(cs);
            write_file(opts, "report.csv", cs.str());
        }
    }
    return rep;
}

namespace {

int sweep_thread_cap() {
    if (const char* env = std::getenv("MOLQED_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

void set_json_path(nlohmann::json& j, const std::string& key, double value) {
    nlohmann::json* node = &j;
    size_t pos = 0;
    while (true) {
        const size_t dot = key.find('.', pos);
        const std::string part = key.substr(pos, dot - pos);
        if (part.empty()) throw ConfigError("sweep: bad key '" + key + "'");
        if (dot == std::string::npos) {
            if (node->contains(part) && !(*node)[part].is_number())
                throw ConfigError("sweep: key '" + key +
                                  "' is not a numeric config value");
            (*node)[part] = value;
            return;
        }
        if (!node->contains(part)) (*node)[part] = nlohmann::json::object();
        node = &(*node)[part];
        if (!node->is_object())
            throw ConfigError("sweep: key '" + key +
                              "' does not address an object");
        pos = dot + 1;
    }
}

}  // namespace

void sweep_scenario(const nlohmann::json& base_config, Subcommand cmd,
                    const std::string& key, double start, double stop, int n,
                    const std::string& out_dir) {
    if (n < 1) throw ConfigError("sweep: need at least one point");
    if (cmd == Subcommand::report)
        throw ConfigError("sweep: pick a specific subcommand, not 'report'");

    std::vector<double> values(n);
    for (int i = 0; i < n; ++i)
        values[i] = n == 1 ? start : start + (stop - start) * i / (n - 1.0);

    // validate the key against the schema before spawning workers
    {
        nlohmann::json probe = base_config;
        set_json_path(probe, key, values[0]);
        (void)parse_config_json(probe);
    }

    std::vector<DesignReport> reports(n);
    std::vector<std::string> errors(n);
    std::atomic<int> next{0};
    const int n_threads = std::min(sweep_thread_cap(), n);

    auto worker = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                nlohmann::json j = base_config;
                set_json_path(j, key, values[i]);
                const ScenarioConfig cfg = parse_config_json(j);
                RunOptions quiet;
                quiet.write_files = false;
                reports[i] = run_scenario(cfg, cmd, quiet);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (int i = 0; i < n; ++i)
        if (!errors[i].empty())
            throw Error("sweep point " + std::to_string(i) + " (" + key +
                        " = " + format_number(values[i]) + "): " + errors[i]);

    // merged CSV in input order
    fs::create_directories(out_dir);
    std::vector<std::string> cols{key}, units{"file units"};
    for (const auto& [k, entry] : reports[0].flat()) {
        cols.push_back(k);
        units.push_back(entry->unit);
    }
    CsvWriter csv(cols, units);
    for (int i = 0; i < n; ++i) {
        std::vector<double> row{values[i]};
        for (const auto& [k, entry] : reports[i].flat())
            row.push_back(entry->value);
        csv.add_row(row);
    }
    std::ofstream out(fs::path(out_dir) / "sweep.csv");
    if (!out) throw Error("cannot write sweep.csv");
    csv.write(out);
}

}  // namespace molqed
