#include "molqed/cavity_coupling.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "molqed/constants.hpp"
#include "molqed/error.hpp"

namespace molqed {

using namespace constants;

void ResonatorSpec::validate() const {
    if (!(omega > 0)) throw Error("resonator: omega must be > 0");
    if (!(Q > 0)) throw Error("resonator: Q must be > 0");
    if (!(Z0 > 0)) throw Error("resonator: Z0 must be > 0");
    if (!(w > 0)) throw Error("resonator: conductor spacing w must be > 0");
}

double resonator_capacitance(const ResonatorSpec& res) {
    return pi / (2.0 * res.omega * res.Z0);
}

double zero_point_voltage(const ResonatorSpec& res) {
    // V0 = sqrt(hbar omega / 2C) with C = pi/(2 omega Z0)
    return std::sqrt(hbar * res.omega * res.omega * res.Z0 / pi);
}

double field_falloff(double z, double w) {
    if (!(z > 0)) throw Error("field_falloff: z must be > 0");
    return std::min(1.0, 0.5 * w / z);
}

double zero_point_field(const ResonatorSpec& res, double z) {
    return field_falloff(z, res.w) * zero_point_voltage(res) / res.w;
}

double transition_dipole(const MoleculeSpec& mol, double E_dc_bias,
                         int N_max) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        build_hamiltonian(mol, E_dc_bias, N_max, 0));
    Eigen::MatrixXd cosm = Eigen::MatrixXd::Zero(N_max + 1, N_max + 1);
    for (int N = 0; N < N_max; ++N) {
        cosm(N, N + 1) = cos_theta_element(N, 0);
        cosm(N + 1, N) = cosm(N, N + 1);
    }
    const double overlap =
        es.eigenvectors().col(2).transpose() * cosm * es.eigenvectors().col(1);
    return mol.mu * std::abs(overlap);
}

LambDicke lamb_dicke(const MoleculeSpec& mol, double omega_t, double z0) {
    if (!(omega_t > 0) || !(z0 > 0))
        throw Error("lamb_dicke: omega_t and z0 must be > 0");
    const double a0 = std::sqrt(hbar / (2.0 * mol.mass * omega_t));
    return {a0, a0 / z0};
}

CouplingResult vacuum_rabi(const ResonatorSpec& res, const MoleculeSpec& mol,
                           double z, double E_dc_bias, bool use_stark,
                           double omega_t, int N_max) {
    res.validate();
    CouplingResult out;
    out.V0 = zero_point_voltage(res);
    out.E0 = zero_point_field(res, z);
    out.wp = use_stark ? transition_dipole(mol, E_dc_bias, N_max)
                       : 0.5 * mol.mu;
    out.g = out.wp * out.E0 / hbar;
    out.eta = omega_t > 0 ? lamb_dicke(mol, omega_t, z).eta : 0.0;
    return out;
}

}  // namespace molqed
