#pragma once

#include <Eigen/Dense>
#include <vector>

#include "molqed/molecule.hpp"

namespace molqed {

/// Rigid-rotor state |N, m_N>. Basis enumeration is by (N, m_N)
/// ascending everywhere.
struct RotorBasisState {
    int N = 0;
    int m_N = 0;
};

inline constexpr int kDefaultNMax = 12;

/// <N+1, m | cos(theta) | N, m> for the rigid rotor.
double cos_theta_element(int N, int m);

/// Basis N = |m_N| .. N_max of the fixed-m_N block.
std::vector<RotorBasisState> rotor_block_basis(int N_max, int m_N);

/// Rotor + Stark Hamiltonian (in J) on the fixed-m_N block:
/// diagonal hbar*B*N(N+1), off-diagonal -mu*E_dc*<N'|cos(theta)|N>.
/// The matrix is symmetric by construction.
Eigen::MatrixXd build_hamiltonian(const MoleculeSpec& mol, double E_dc,
                                  int N_max, int m_N);

/// Stark map of one m_N block over a DC-field grid. Eigenvalues are
/// sorted ascending per grid point; column k of `eigenvalues` follows the
/// state adiabatically connected to the k-th zero-field level of the
/// block (tracking by maximal eigenvector overlap, with automatic grid
/// refinement when the overlap between neighbouring points drops
/// below 0.9).
struct StarkMap {
    Eigen::VectorXd field_grid;            // V/m
    Eigen::MatrixXd eigenvalues;           // [grid x states], J, tracked
    std::vector<Eigen::MatrixXd> eigenvectors;  // per grid point, columns tracked
    int N_max = 0;
    int m_N_sector = 0;
    std::vector<RotorBasisState> labels;   // zero-field labels per column
};

StarkMap stark_map(const MoleculeSpec& mol, const Eigen::VectorXd& field_grid,
                   int N_max, int m_N);

/// Energy (J) of the state adiabatically connected to |N, m_N> at field
/// E_dc. Within one m_N block same-symmetry crossings are avoided, so the
/// zero-field ordering is preserved and the tracked state is the
/// (N - |m_N|)-th eigenvalue of the block.
double tracked_energy(const MoleculeSpec& mol, RotorBasisState state,
                      double E_dc, int N_max = kDefaultNMax);

/// Qubit splitting omega_0(E_dc) = (E_2 - E_1)/hbar between the tracked
/// |N=2,m=0> and |N=1,m=0> states, rad/s.
double qubit_splitting(const MoleculeSpec& mol, double E_dc,
                       int N_max = kDefaultNMax);

/// d^order omega_0 / dE^order by Richardson-extrapolated central
/// differences; rad/s per (V/m)^order. order must be 1 or 2.
double splitting_sensitivity(const MoleculeSpec& mol, double E_dc, int N_max,
                             int order);

/// Bias field (V/m) where d omega_0/dE = 0, located by bracketed
/// bisection on [0.5, 6] x hbar*B/mu to 1e-6 relative tolerance.
double find_sweet_spot(const MoleculeSpec& mol, int N_max = kDefaultNMax);

/// Effective dipole -dE_state/dE_dc (equals <mu cos(theta)> by
/// Hellmann-Feynman), C m. Positive for field-aligned (high-field
/// seeking) states, negative for weak-field seekers.
double effective_dipole(const MoleculeSpec& mol, RotorBasisState state,
                        double E_dc, int N_max = kDefaultNMax);

/// Maximum Stark shift of the trapped |N=1,m=0> state and the field
/// where it is attained.
struct TrapDepthResult {
    double U_max = 0;     // J
    double E_at_max = 0;  // V/m
};

TrapDepthResult max_trap_depth(const MoleculeSpec& mol,
                               int N_max = kDefaultNMax);

}  // namespace molqed
