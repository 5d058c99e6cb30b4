#pragma once

#include "molqed/molecule.hpp"
#include "molqed/rotor_stark.hpp"

namespace molqed {

/// Superconducting stripline resonator parameters. kappa = omega/Q.
struct ResonatorSpec {
    double omega = 0;  // mode angular frequency, rad/s
    double Q = 0;
    double Z0 = 50.0;  // Ohm
    double w = 0;      // conductor spacing, m

    double kappa() const { return omega / Q; }
    void validate() const;
};

/// Molecule-resonator coupling at one operating point.
struct CouplingResult {
    double V0 = 0;   // zero-point voltage, V
    double E0 = 0;   // zero-point field at the molecule, V/m
    double g = 0;    // vacuum Rabi frequency, rad/s
    double eta = 0;  // Lamb-Dicke parameter (0 if no trap frequency given)
    double wp = 0;   // transition dipole <2|mu cos(theta)|1>, C m
};

/// V0 = sqrt(hbar omega^2 Z0 / pi), from the zero-point energy of an
/// impedance-matched resonator with C = pi/(2 omega Z0).
double zero_point_voltage(const ResonatorSpec& res);

/// Effective resonator capacitance C = pi/(2 omega Z0).
double resonator_capacitance(const ResonatorSpec& res);

/// Geometric falloff of the stripline field: f = 1 for z <= w/2 and
/// f = 0.5 w/z beyond (continuous crossover at z = w/2).
double field_falloff(double z, double w);

/// Zero-point electric field E0 = f(z) V0 / w at height z.
double zero_point_field(const ResonatorSpec& res, double z);

/// |<2| mu cos(theta) |1>| from Stark eigenvectors at the bias field.
double transition_dipole(const MoleculeSpec& mol, double E_dc_bias,
                         int N_max = kDefaultNMax);

/// Lamb-Dicke parameter: a0 = sqrt(hbar/(2 m omega_t)), eta = a0/z0.
struct LambDicke {
    double a0 = 0;
    double eta = 0;
};

LambDicke lamb_dicke(const MoleculeSpec& mol, double omega_t, double z0);

/// Warn threshold for the Lamb-Dicke expansion.
inline constexpr double kEtaWarnThreshold = 0.3;

/// Vacuum Rabi frequency g = wp E0 / hbar for a molecule at height z.
/// If use_stark is false the transition dipole falls back to 0.5 mu.
/// omega_t (if > 0) additionally fills in the Lamb-Dicke parameter.
CouplingResult vacuum_rabi(const ResonatorSpec& res, const MoleculeSpec& mol,
                           double z, double E_dc_bias, bool use_stark = true,
                           double omega_t = 0, int N_max = kDefaultNMax);

}  // namespace molqed
