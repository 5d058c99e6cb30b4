#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "molqed/cavity_coupling.hpp"

namespace molqed {

/// Sideband-cooling model for {qubit (x) cavity (x) one motional mode} in
/// the frame rotating at the drive frequency. The Hamiltonian is
///   H = -delta_d s+s- + (delta_c - delta_d) a'a + omega_t b'b
///     + g0 (1 + eta x)(a' s- + s+ a) + Omega/2 (1 + eta x)(s+ + s-)
/// with x = b + b'. Both the resonator coupling and the classical drive
/// carry the near-field gradient factor (1 + eta x): the drive reaches the
/// molecule through the same mode profile, which is what makes the red
/// sideband |1,n> -> |2,n-1> directly drivable. Cavity decay is kappa with
/// thermal occupation n_thermal.
struct CoolingModel {
    double g0 = 0;        // rad/s
    double eta = 0;
    double omega_t = 0;   // rad/s
    double kappa = 0;     // rad/s
    double Omega_drive = 0;           // rad/s
    double drive_detuning = 0;        // delta_d, rad/s (default -omega_t)
    double cavity_detuning = 0;       // delta_c, rad/s (default 0)
    double n_thermal = 0;
    int N_fock = 5;
    int N_motion = 15;
    double omega_t_excited_offset = 0;  // state-dependent trap offset

    int dimension() const { return 2 * N_fock * N_motion; }
    bool strong_coupling() const { return g0 > kappa; }
    void validate() const;
};

CoolingModel build_cooling_model(const CouplingResult& coupling,
                                 const ResonatorSpec& res, double omega_t,
                                 double Omega_drive, double n_thermal,
                                 int N_fock = 5, int N_motion = 15);

/// Observables sampled on the output grid.
struct CoolingTrajectory {
    Eigen::VectorXd times;               // s
    Eigen::VectorXd mean_n_motion;
    Eigen::VectorXd mean_n_cavity;
    Eigen::VectorXd excited_population;
    Eigen::VectorXd trace_error;         // |Tr rho - 1|
    double min_eigenvalue = 0;           // smallest eigenvalue of rho seen
};

/// Operators on the composite space, ordering qubit (x) cavity (x) motion.
struct CoolingOperators {
    Eigen::MatrixXcd H;
    std::vector<Eigen::MatrixXcd> collapse;  // rates absorbed (sqrt)
    Eigen::MatrixXcd n_motion, n_cavity, sigma_ee;
};

CoolingOperators build_operators(const CoolingModel& model);

/// Thermal density matrix diag(p_n) with mean occupation n_bar.
Eigen::MatrixXcd thermal_state(double n_bar, int dim);

/// rho0 = |qubit><qubit| (x) |0_c><0_c| (x) motion.
Eigen::MatrixXcd initial_state(const CoolingModel& model, bool qubit_excited,
                               const Eigen::MatrixXcd& motion_state);

/// Adaptive Dormand-Prince integration of the Lindblad master equation.
/// The density matrix is re-symmetrized every accepted step; observables
/// are sampled every dt_output. Throws PhysicsError if <n> approaches a
/// truncation boundary (within 2 of the limit), NumericsError on step
/// underflow.
CoolingTrajectory evolve(const CoolingModel& model,
                         const Eigen::MatrixXcd& rho0, double t_final,
                         double dt_output, double rtol = 1e-7,
                         double atol = 1e-12);

/// Steady state of the model's Liouvillian, from a direct sparse solve of
/// L vec(rho) = 0 with unit trace.
Eigen::MatrixXcd steady_state(const CoolingModel& model);

/// Analytic sideband-cooling rates. Two width conventions are carried:
/// gamma_sp = 2 g^2/kappa (the quoted estimate) and the resonant Purcell
/// width gamma_purcell = 4 g^2/kappa, which is the Delta -> 0 limit of the
/// dispersive decay kappa g^2/Delta^2 and is what the master equation
/// actually produces. The *_purcell rate is the one the simulated decay
/// follows.
struct CoolingRates {
    double gamma_sp = 0;            // 2 g^2 / kappa
    double gamma_purcell = 0;       // 4 g^2 / kappa
    double R = 0;                   // eta^2 Omega^2 / gamma_sp
    double R_purcell = 0;           // eta^2 Omega^2 / gamma_purcell
    double Gamma_c_weak = 0;        // gamma_sp R/(2R + gamma_sp)
    double Gamma_c_weak_purcell = 0;
    double Gamma_c_saturated = 0;   // min(g^2/kappa, kappa/2)
};

CoolingRates cooling_rate_analytic(double g, double kappa, double eta,
                                   double Omega);

/// Equilibrium of the trap mode against the resonator bath: the motional
/// occupation equals the thermal photon number of the mode, so the trap
/// temperature is reduced by roughly R = omega_t/omega.
struct FinalTemperature {
    double T_trap = 0;   // K
    double R_ratio = 0;  // omega_t / omega
    double n_gamma = 0;  // thermal photons at (omega, T_resonator)
};

FinalTemperature final_temperature(double omega_t, double omega,
                                   double T_resonator);

}  // namespace molqed
