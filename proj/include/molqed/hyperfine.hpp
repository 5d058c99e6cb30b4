#pragma once

#include <Eigen/Dense>
#include <vector>

#include "molqed/molecule.hpp"

namespace molqed {

/// Product basis state |N, m_N> |S, m_S> |I, m_I> for a 2-Sigma molecule
/// with one nuclear spin. Total M = m_N + m_S + m_I is conserved at fixed
/// field along z.
struct SpinBasisState {
    int N = 0;
    int m_N = 0;
    double m_S = 0;
    double m_I = 0;

    double M() const { return m_N + m_S + m_I; }
};

/// Deterministic enumeration: (N, m_N) ascending, then m_S, then m_I.
std::vector<SpinBasisState> spin_basis(const MoleculeSpec& mol, int N_max);

/// Full rotor + Stark + spin-rotation + hyperfine Hamiltonian (J) in the
/// decoupled product basis:
///   H = H_rot + H_Stark
///     + gamma_sr N.S
///     + (b + c/3) S.I + c sqrt(2/3) sum_q (-1)^q C2_q T2_{-q}(S,I)
///     + eqQ sqrt(6)/(4 I (2I-1)) sum_q (-1)^q C2_q T2_{-q}(I,I)
/// with C2_q the rank-2 orientation tensor of the internuclear axis
/// (reduced matrix elements via Wigner 3-j, Edmonds phases). The matrix is
/// real symmetric.
Eigen::MatrixXd build_spin_hamiltonian(const MoleculeSpec& mol, double E_dc,
                                       int N_max);

/// One eigenlevel with dominant-character labels. In a strong field the
/// spins decouple from N and couple to F3 = S + I; M_F3 is sharp for
/// m_N = 0 levels (M_F3 = M - m_N).
struct HyperfineLevel {
    double energy = 0;  // J
    int N = 0;          // dominant rotational character
    int m_N = 0;        // dominant projection
    int F3 = 0;         // nearest (S+I) character from <(S+I)^2>
    int M_F3 = 0;       // M - m_N (exact M, dominant m_N)
    double M = 0;       // exact conserved total projection
    double purity = 0;  // weight in the dominant (N, m_N) subspace
};

struct HyperfineSpectrum {
    double E_dc = 0;
    std::vector<HyperfineLevel> levels;  // sorted by energy
    int basis_size = 0;
};

inline constexpr int kDefaultSpinNMax = 6;

HyperfineSpectrum hyperfine_spectrum(const MoleculeSpec& mol, double E_dc,
                                     int N_max = kDefaultSpinNMax);

/// Label triple selecting one level of a spectrum.
struct LevelSelector {
    int N = 0;
    int m_N = 0;
    int F3 = 0;
    int M_F3 = 0;
};

const HyperfineLevel& select_level(const HyperfineSpectrum& spec,
                                   const LevelSelector& sel);

/// d(E_a - E_b)/dE_dc of one hyperfine transition (rad/s per V/m), by
/// central differences with overlap-based level tracking between the
/// displaced fields. Throws PhysicsError if tracking fails (level
/// crossing).
double hyperfine_sensitivity(const MoleculeSpec& mol, const LevelSelector& a,
                             const LevelSelector& b, double E_dc,
                             int N_max = kDefaultSpinNMax);

/// Difference of the N=1 -> N=2 (m_N = 0) transition frequency between
/// the two M_F3 = 0 hyperfine states (F3 = 1 vs F3 = 2), rad/s.
double qubit_hyperfine_offset(const MoleculeSpec& mol, double E_dc,
                              int N_max = kDefaultSpinNMax);

}  // namespace molqed
