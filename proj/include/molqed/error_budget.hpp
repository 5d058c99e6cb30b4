#pragma once

#include <optional>

#include "molqed/cavity_coupling.hpp"
#include "molqed/molecule.hpp"
#include "molqed/rotor_stark.hpp"

namespace molqed {

/// Electrode voltage-noise model: 1/f charge noise S_Q(f) = S_Q_coeff e^2/f
/// on a total capacitance C_t, so S_V(f) = S_Q_coeff e^2 / (C_t^2 f).
struct NoiseSpec {
    double S_Q_coeff = 1e-6;   // e^2 units at 1 Hz
    double C_t = 1e-15;        // F
    double V_EZ = 0.1;         // trap electrode voltage, V
    double V_rms_eff = 0.2e-6; // effective RMS voltage for dephasing, V
    double T_N = 5.0;          // amplifier noise temperature, K

    /// Voltage spectral density V^2/Hz at ordinary frequency f.
    double S_V(double f) const;
    void validate() const;
};

enum class QubitEncoding { rotational, hyperfine };

/// First- and second-order voltage dephasing rates at a bias field:
/// gamma_V  = |domega0/dE|   V_rms/w
/// gamma_V2 = |d2omega0/dE2| (V_rms/w)^2
struct VoltageDephasing {
    double gamma_V = 0;   // rad/s
    double gamma_V2 = 0;  // rad/s
};

VoltageDephasing voltage_dephasing(const MoleculeSpec& mol, double E_dc,
                                   double w, const NoiseSpec& noise,
                                   int N_max = kDefaultNMax);

/// Largest |domega0/dE| between zero field and the sweet spot -- the
/// "linear Stark regime" sensitivity used for worst-case budgets.
double linear_regime_sensitivity(const MoleculeSpec& mol,
                                 int N_max = kDefaultNMax);

/// Motional dephasing: (omega_t^2/B) n^2 for rotational encoding,
/// omega_t n / 1e3 for hyperfine encoding. Order-of-magnitude formulas.
double thermal_dephasing(const MoleculeSpec& mol, double omega_t, double n_bar,
                         QubitEncoding encoding);

/// Trap-center heating rate Gamma_01 = omega_t^2 (w/a0)^2 S_V(omega_t)/V_EZ^2
/// with S_V evaluated at f = omega_t/2pi.
double heating_rate(double omega_t, double w, double a0,
                    const NoiseSpec& noise);

/// Single-qubit gate error bound p = (gamma*/Omega)^2 per Rabi cycle.
double single_qubit_error(double gamma_star, double Omega);

/// Resonator-mediated sqrt(SWAP) figures of merit at detuning Delta.
/// When Delta is not supplied the optimum Delta* = (g^4 kappa/(pi gamma*^2))^(1/3)
/// is used. p_err is the prefactor-free estimate (kappa gamma*/g^2)^(2/3);
/// the literal minimum of p_sp+p_dep is also computed numerically.
struct TwoQubitGateResult {
    double tau = 0;            // s
    double p_sp = 0;
    double p_dep = 0;
    double p_err = 0;          // (kappa gamma*/g^2)^(2/3)
    double Delta_used = 0;     // rad/s
    double Delta_numeric = 0;  // argmin of p_sp+p_dep
    double p_min_numeric = 0;  // min of p_sp+p_dep
    bool detuning_warning = false;  // Delta_used < 5 g
};

TwoQubitGateResult two_qubit_gate(double g, double kappa, double gamma_star,
                                  std::optional<double> Delta = std::nullopt);

/// Dispersive readout figures of merit.
struct ReadoutResult {
    double theta0 = 0;       // rad
    double n_crit = 0;
    double n_amp = 0;
    double P_read = 0;       // W
    double SNR = 0;
    double gamma_kappa = 0;  // rad/s
    double T1 = 0;           // s
    double snr_gain = 0;     // kappa/gamma_kappa
    bool dispersive_warning = false;  // Delta_r < 5 g
};

ReadoutResult dispersive_readout(double g, double kappa, double Delta_r,
                                 double omega0, const NoiseSpec& noise);

/// Complete analytic error budget for one operating point.
struct ErrorBudget {
    double gamma_V = 0;      // linear-regime voltage dephasing, rad/s
    double gamma_V2 = 0;     // sweet-spot (second-order) dephasing, rad/s
    double gamma_T = 0;      // motional dephasing (rotational), rad/s
    double gamma_T_hf = 0;   // motional dephasing (hyperfine), rad/s
    double gamma_star = 0;   // gamma_T + gamma_V2, rad/s
    double Gamma_01 = 0;     // trap heating rate, rad/s
    double p_1q = 0;
    double tau_2q = 0;       // s
    double Delta_opt = 0;    // rad/s
    double p_sp = 0;
    double p_dep = 0;
    double p_err = 0;
    double theta0 = 0;       // rad
    double n_crit = 0;
    double P_read = 0;       // W
    double SNR = 0;
    double gamma_kappa = 0;  // rad/s
    double T1_readout = 0;   // s
};

struct BudgetInputs {
    MoleculeSpec mol;
    NoiseSpec noise;
    double E_dc_bias = 0;   // V/m (operating bias, usually the sweet spot)
    double w = 0;           // electrode/conductor spacing, m
    double omega_t = 0;     // trap frequency, rad/s
    double n_bar = 0;       // mean motional quantum number
    double g = 0;           // vacuum Rabi frequency, rad/s
    double kappa = 0;       // rad/s
    double omega0 = 0;      // qubit splitting, rad/s
    double Omega_rabi = 0;  // single-qubit drive, rad/s
    std::optional<double> Delta;  // two-qubit detuning override
    double Delta_r = 0;     // readout detuning, rad/s
    int N_max = kDefaultNMax;
};

ErrorBudget assemble_budget(const BudgetInputs& in);

}  // namespace molqed
