#include "molqed/error_budget.hpp"

#include <cmath>
#include <limits>

#include "molqed/constants.hpp"
#include "molqed/error.hpp"

namespace molqed {

using namespace constants;

double NoiseSpec::S_V(double f) const {
    if (!(f > 0)) throw Error("S_V: frequency must be > 0");
    const double e = elementary_charge;
    return S_Q_coeff * e * e / (C_t * C_t * f);
}

void NoiseSpec::validate() const {
    if (S_Q_coeff < 0 || V_rms_eff < 0)
        throw Error("noise: spectral coefficients must be >= 0");
    if (!(C_t > 0)) throw Error("noise: C_t must be > 0");
    if (!(V_EZ > 0)) throw Error("noise: V_EZ must be > 0");
    if (!(T_N > 0)) throw Error("noise: T_N must be > 0");
}

VoltageDephasing voltage_dephasing(const MoleculeSpec& mol, double E_dc,
                                   double w, const NoiseSpec& noise,
                                   int N_max) {
    if (!(w > 0)) throw Error("voltage_dephasing: w must be > 0");
    const double field_rms = noise.V_rms_eff / w;  // V/m
    VoltageDephasing out;
    out.gamma_V =
        std::abs(splitting_sensitivity(mol, E_dc, N_max, 1)) * field_rms;
    out.gamma_V2 = std::abs(splitting_sensitivity(mol, E_dc, N_max, 2)) *
                   field_rms * field_rms;
    return out;
}

double linear_regime_sensitivity(const MoleculeSpec& mol, int N_max) {
    const double sweet = find_sweet_spot(mol, N_max);
    // the sensitivity peaks between zero field and the sweet spot
    double best = 0;
    for (int i = 1; i < 60; ++i) {
        const double E = sweet * i / 60.0;
        best = std::max(best,
                        std::abs(splitting_sensitivity(mol, E, N_max, 1)));
    }
    return best;
}

double thermal_dephasing(const MoleculeSpec& mol, double omega_t, double n_bar,
                         QubitEncoding encoding) {
    if (n_bar < 0) throw Error("thermal_dephasing: n_bar must be >= 0");
    switch (encoding) {
        case QubitEncoding::rotational:
            return omega_t * omega_t / mol.B * n_bar * n_bar;
        case QubitEncoding::hyperfine:
            return omega_t * n_bar / 1e3;
    }
    throw Error("thermal_dephasing: bad encoding");
}

double heating_rate(double omega_t, double w, double a0,
                    const NoiseSpec& noise) {
    if (!(omega_t > 0) || !(w > 0) || !(a0 > 0))
        throw Error("heating_rate: inputs must be > 0");
    if (noise.S_Q_coeff == 0) return 0.0;
    const double ratio = w / a0;
    return omega_t * omega_t * ratio * ratio * noise.S_V(omega_t / two_pi) /
           (noise.V_EZ * noise.V_EZ);
}

double single_qubit_error(double gamma_star, double Omega) {
    if (!(Omega > 0)) throw Error("single_qubit_error: Omega must be > 0");
    const double r = gamma_star / Omega;
    return r * r;
}

TwoQubitGateResult two_qubit_gate(double g, double kappa, double gamma_star,
                                  std::optional<double> Delta) {
    if (!(g > 0) || !(kappa > 0))
        throw Error("two_qubit_gate: g and kappa must be > 0");
    if (gamma_star < 0) throw Error("two_qubit_gate: gamma* must be >= 0");

    TwoQubitGateResult out;
    const double g2 = g * g;

    if (!Delta.has_value() && gamma_star == 0)
        throw PhysicsError(
            "two_qubit_gate: optimal detuning diverges at gamma*=0; "
            "supply Delta explicitly");

    const double Delta_star =
        gamma_star > 0
            ? std::cbrt(g2 * g2 * kappa / (pi * gamma_star * gamma_star))
            : 0.0;
    out.Delta_used = Delta.has_value() ? *Delta : Delta_star;
    out.detuning_warning = out.Delta_used < 5.0 * g;

    auto p_total = [&](double D) {
        const double tau = pi * D / (2 * g2);
        const double p_sp = kappa * g2 / (D * D) * tau;
        const double p_dep = gamma_star * tau * gamma_star * tau;
        return p_sp + p_dep;
    };

    out.tau = pi * out.Delta_used / (2 * g2);
    out.p_sp = kappa * g2 / (out.Delta_used * out.Delta_used) * out.tau;
    out.p_dep = std::pow(gamma_star * out.tau, 2);
    out.p_err = std::pow(kappa * gamma_star / g2, 2.0 / 3.0);

    if (gamma_star > 0) {
        // golden-section minimum of p_sp + p_dep over Delta
        const double invphi = (std::sqrt(5.0) - 1) / 2;
        double a = Delta_star / 30, b = Delta_star * 30;
        double c = b - invphi * (b - a), d = a + invphi * (b - a);
        double fc = p_total(c), fd = p_total(d);
        while (b - a > 1e-10 * b) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - invphi * (b - a);
                fc = p_total(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + invphi * (b - a);
                fd = p_total(d);
            }
        }
        out.Delta_numeric = 0.5 * (a + b);
        out.p_min_numeric = p_total(out.Delta_numeric);
    } else {
        out.Delta_numeric = std::numeric_limits<double>::infinity();
        out.p_min_numeric = 0.0;
    }
    return out;
}

ReadoutResult dispersive_readout(double g, double kappa, double Delta_r,
                                 double omega0, const NoiseSpec& noise) {
    if (!(g > 0 || g == 0) || !(kappa > 0) || !(Delta_r > 0) || !(omega0 > 0))
        throw Error("dispersive_readout: bad inputs");
    ReadoutResult out;
    out.dispersive_warning = Delta_r < 5.0 * g;
    const double g2 = g * g;
    out.theta0 = std::atan(2.0 * g2 / (kappa * Delta_r));
    out.n_crit = g > 0 ? Delta_r * Delta_r / (4.0 * g2)
                       : std::numeric_limits<double>::infinity();
    out.n_amp = k_B * noise.T_N / (hbar * omega0);
    out.P_read = out.n_crit * hbar * omega0 * kappa;
    const double s = std::sin(out.theta0);
    out.SNR = g > 0 ? s * s * out.n_crit / out.n_amp : 0.0;
    out.gamma_kappa = kappa * g2 / (Delta_r * Delta_r);
    out.T1 = g > 0 ? 1.0 / out.gamma_kappa
                   : std::numeric_limits<double>::infinity();
    out.snr_gain = g > 0 ? kappa / out.gamma_kappa
                         : std::numeric_limits<double>::infinity();
    return out;
}

ErrorBudget assemble_budget(const BudgetInputs& in) {
    in.noise.validate();
    ErrorBudget out;

    const double field_rms = in.noise.V_rms_eff / in.w;
    out.gamma_V = linear_regime_sensitivity(in.mol, in.N_max) * field_rms;
    out.gamma_V2 = voltage_dephasing(in.mol, in.E_dc_bias, in.w, in.noise,
                                     in.N_max)
                       .gamma_V2;
    out.gamma_T = thermal_dephasing(in.mol, in.omega_t, in.n_bar,
                                    QubitEncoding::rotational);
    out.gamma_T_hf = thermal_dephasing(in.mol, in.omega_t, in.n_bar,
                                       QubitEncoding::hyperfine);
    out.gamma_star = out.gamma_T + out.gamma_V2;
    const double a0 = std::sqrt(hbar / (2.0 * in.mol.mass * in.omega_t));
    out.Gamma_01 = heating_rate(in.omega_t, in.w, a0, in.noise);
    out.p_1q = single_qubit_error(out.gamma_star, in.Omega_rabi);

    const auto gate = two_qubit_gate(in.g, in.kappa, out.gamma_star, in.Delta);
    out.tau_2q = gate.tau;
    out.Delta_opt = gate.Delta_used;
    out.p_sp = gate.p_sp;
    out.p_dep = gate.p_dep;
    out.p_err = gate.p_err;

    const auto ro = dispersive_readout(in.g, in.kappa, in.Delta_r, in.omega0,
                                       in.noise);
    out.theta0 = ro.theta0;
    out.n_crit = ro.n_crit;
    out.P_read = ro.P_read;
    out.SNR = ro.SNR;
    out.gamma_kappa = ro.gamma_kappa;
    out.T1_readout = ro.T1;
    return out;
}

}  // namespace molqed
