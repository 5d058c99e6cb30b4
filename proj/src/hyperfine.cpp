#include "molqed/hyperfine.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "molqed/constants.hpp"
#include "molqed/error.hpp"
#include "molqed/rotor_stark.hpp"
#include "molqed/wigner.hpp"

namespace molqed {

using namespace constants;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<SpinBasisState> spin_basis(const MoleculeSpec& mol, int N_max) {
    std::vector<SpinBasisState> basis;
    const int nS = int(std::round(2 * mol.S_elec)) + 1;
    const int nI = int(std::round(2 * mol.I_nuc)) + 1;
    for (int N = 0; N <= N_max; ++N)
        for (int m = -N; m <= N; ++m)
            for (int is = 0; is < nS; ++is)
                for (int ii = 0; ii < nI; ++ii)
                    basis.push_back(
                        {N, m, -mol.S_elec + is, -mol.I_nuc + ii});
    return basis;
}

namespace {

// angular-momentum matrices for spin s in the |s, m> basis (m ascending)
struct SpinOps {
    MatrixXd z, plus, minus;
};

SpinOps spin_ops(double s) {
    const int n = int(std::round(2 * s)) + 1;
    SpinOps ops{MatrixXd::Zero(n, n), MatrixXd::Zero(n, n),
                MatrixXd::Zero(n, n)};
    for (int i = 0; i < n; ++i) {
        const double m = -s + i;
        ops.z(i, i) = m;
        if (i + 1 < n)
            ops.plus(i + 1, i) = std::sqrt(s * (s + 1) - m * (m + 1));
    }
    ops.minus = ops.plus.transpose();
    return ops;
}

// spherical vector components A_{+1} = -A_+/sqrt2, A_0 = A_z, A_{-1} = A_-/sqrt2
std::array<MatrixXd, 3> spherical(const SpinOps& ops) {
    return {ops.minus / std::sqrt(2.0), ops.z, -ops.plus / std::sqrt(2.0)};
}

// rank-2 tensor T2_q(A,B) from two commuting vector operators given by
// their spherical components (index 0 -> q=-1, 1 -> q=0, 2 -> q=+1)
std::array<MatrixXd, 5> rank2_tensor(const std::array<MatrixXd, 3>& A,
                                     const std::array<MatrixXd, 3>& B) {
    const MatrixXd& Am = A[0];
    const MatrixXd& A0 = A[1];
    const MatrixXd& Ap = A[2];
    const MatrixXd& Bm = B[0];
    const MatrixXd& B0 = B[1];
    const MatrixXd& Bp = B[2];
    std::array<MatrixXd, 5> T;  // q = -2..2
    T[0] = Am * Bm;
    T[1] = (Am * B0 + A0 * Bm) / std::sqrt(2.0);
    T[2] = (Ap * Bm + 2.0 * A0 * B0 + Am * Bp) / std::sqrt(6.0);
    T[3] = (Ap * B0 + A0 * Bp) / std::sqrt(2.0);
    T[4] = Ap * Bp;
    return T;
}

MatrixXd kron(const MatrixXd& A, const MatrixXd& B) {
    MatrixXd out(A.rows() * B.rows(), A.cols() * B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) =
                A(i, j) * B;
    return out;
}

// rotor-space structure: full (N, m_N) basis up to N_max
struct RotorSpace {
    std::vector<std::pair<int, int>> states;  // (N, m_N)
    int index(int N, int m) const {
        return N * N + (m + N);  // sum_{n<N} (2n+1) + (m+N)
    }
    int size() const { return int(states.size()); }
};

RotorSpace rotor_space(int N_max) {
    RotorSpace rs;
    for (int N = 0; N <= N_max; ++N)
        for (int m = -N; m <= N; ++m) rs.states.emplace_back(N, m);
    return rs;
}

// <N' m' | C^2_q | N m> (spherical harmonic orientation tensor)
double c2_element(int Np, int mp, int N, int m, int q) {
    if (mp != m + q) return 0.0;
    const double thr = wigner_3j(Np, 2, N, 0, 0, 0);
    if (thr == 0.0) return 0.0;
    const double w = wigner_3j(Np, 2, N, -mp, q, m);
    const double phase = (mp % 2 == 0) ? 1.0 : -1.0;
    return phase * std::sqrt((2.0 * Np + 1) * (2.0 * N + 1)) * thr * w;
}

struct RotorOps {
    MatrixXd H_rot_stark;        // rotor + Stark, units of J
    MatrixXd Nz, Nplus, Nminus;  // rotational angular momentum
    std::array<MatrixXd, 5> C2;  // orientation tensor, q=-2..2
};

RotorOps build_rotor_ops(const MoleculeSpec& mol, double E_dc, int N_max) {
    const RotorSpace rs = rotor_space(N_max);
    const int n = rs.size();
    RotorOps ops;
    ops.H_rot_stark = MatrixXd::Zero(n, n);
    ops.Nz = MatrixXd::Zero(n, n);
    ops.Nplus = MatrixXd::Zero(n, n);
    ops.Nminus = MatrixXd::Zero(n, n);
    for (auto& t : ops.C2) t = MatrixXd::Zero(n, n);

    for (int i = 0; i < n; ++i) {
        const auto [N, m] = rs.states[i];
        ops.H_rot_stark(i, i) = hbar * mol.B * N * (N + 1.0);
        ops.Nz(i, i) = m;
        if (m + 1 <= N) {
            ops.Nplus(rs.index(N, m + 1), i) =
                std::sqrt(N * (N + 1.0) - m * (m + 1.0));
        }
        if (N + 1 <= N_max) {
            const double v = -mol.mu * E_dc * cos_theta_element(N, m);
            const int j = rs.index(N + 1, m);
            ops.H_rot_stark(i, j) = v;
            ops.H_rot_stark(j, i) = v;
        }
        for (int j = 0; j < n; ++j) {
            const auto [Np, mp] = rs.states[j];
            for (int q = -2; q <= 2; ++q) {
                const double v = c2_element(Np, mp, N, m, q);
                if (v != 0.0) ops.C2[q + 2](j, i) = v;
            }
        }
    }
    ops.Nminus = ops.Nplus.transpose();
    return ops;
}

}  // namespace

Eigen::MatrixXd build_spin_hamiltonian(const MoleculeSpec& mol, double E_dc,
                                       int N_max) {
    if (std::abs(mol.S_elec - 0.5) > 1e-9)
        throw Error("build_spin_hamiltonian: requires S = 1/2 (2-Sigma)");
    if (!(mol.I_nuc > 0) && mol.eqQ != 0)
        throw Error("build_spin_hamiltonian: quadrupole needs I >= 1");
    if (N_max < 2) throw Error("build_spin_hamiltonian: N_max must be >= 2");

    const RotorOps rot = build_rotor_ops(mol, E_dc, N_max);
    const SpinOps S = spin_ops(mol.S_elec);
    const SpinOps I = spin_ops(mol.I_nuc);
    const int nS = int(S.z.rows());
    const int nI = int(I.z.rows());
    const MatrixXd idS = MatrixXd::Identity(nS, nS);
    const MatrixXd idI = MatrixXd::Identity(nI, nI);
    const MatrixXd idRot =
        MatrixXd::Identity(rot.H_rot_stark.rows(), rot.H_rot_stark.cols());

    // spin-space scalar S.I
    const MatrixXd SdotI = kron(S.z, I.z) +
                           0.5 * (kron(S.plus, I.minus) +
                                  kron(S.minus, I.plus));

    // rank-2 tensor T2(S,I) on the joint spin space
    std::array<MatrixXd, 5> T2_SI_joint;
    {
        const auto Ssph = spherical(S);
        const auto Isph = spherical(I);
        std::array<MatrixXd, 3> Sj, Ij;
        for (int k = 0; k < 3; ++k) {
            Sj[k] = kron(Ssph[k], idI);
            Ij[k] = kron(idS, Isph[k]);
        }
        T2_SI_joint = rank2_tensor(Sj, Ij);
    }

    // T2(I,I) on the I space alone
    const auto T2_II = rank2_tensor(spherical(I), spherical(I));

    MatrixXd H = kron(rot.H_rot_stark, kron(idS, idI));

    // gamma_sr N.S
    if (mol.gamma_sr != 0) {
        H += mol.gamma_sr * hbar *
             (kron(rot.Nz, kron(S.z, idI)) +
              0.5 * (kron(rot.Nplus, kron(S.minus, idI)) +
                     kron(rot.Nminus, kron(S.plus, idI))));
    }

    // (b + c/3) S.I
    const double b_scalar = mol.b_hf + mol.c_hf / 3.0;
    if (b_scalar != 0) H += b_scalar * hbar * kron(idRot, SdotI);

    // c [S_z' I_z' - S.I/3] = c sqrt(2/3) sum_q (-1)^q C2_q T2_{-q}(S,I)
    if (mol.c_hf != 0) {
        const double pref = mol.c_hf * hbar * std::sqrt(2.0 / 3.0);
        for (int q = -2; q <= 2; ++q) {
            const double sgn = (q % 2 == 0) ? 1.0 : -1.0;
            H += pref * sgn * kron(rot.C2[q + 2], T2_SI_joint[2 - q]);
        }
    }

    // quadrupole: eqQ sqrt(6)/(4 I (2I-1)) sum_q (-1)^q C2_q T2_{-q}(I,I)
    if (mol.eqQ != 0 && mol.I_nuc >= 1.0) {
        const double pref = mol.eqQ * hbar * std::sqrt(6.0) /
                            (4.0 * mol.I_nuc * (2.0 * mol.I_nuc - 1.0));
        for (int q = -2; q <= 2; ++q) {
            const double sgn = (q % 2 == 0) ? 1.0 : -1.0;
            H += pref * sgn *
                 kron(rot.C2[q + 2], kron(idS, T2_II[2 - q]));
        }
    }
    return H;
}

namespace {

struct SpectrumRaw {
    VectorXd values;
    MatrixXd vectors;
    std::vector<SpinBasisState> basis;
    MatrixXd SdotI;  // on the nS*nI spin space
    int n_spin = 0;
};

// Total M = m_N + m_S + m_I is exactly conserved, so the Hamiltonian is
// diagonalized per M block. This keeps exactly degenerate +-M partners
// from being mixed by the eigensolver and preserves sharp M labels.
SpectrumRaw diagonalize_spin(const MoleculeSpec& mol, double E_dc,
                             int N_max) {
    SpectrumRaw raw;
    raw.basis = spin_basis(mol, N_max);
    const MatrixXd H = build_spin_hamiltonian(mol, E_dc, N_max);
    const int n = int(raw.basis.size());
    raw.values.resize(n);
    raw.vectors = MatrixXd::Zero(n, n);

    std::vector<std::vector<int>> blocks;
    {
        std::vector<std::pair<int, int>> keyed(n);  // (2M, index)
        for (int i = 0; i < n; ++i)
            keyed[i] = {int(std::lround(2 * raw.basis[i].M())), i};
        std::sort(keyed.begin(), keyed.end());
        for (int i = 0; i < n;) {
            int j = i;
            blocks.emplace_back();
            while (j < n && keyed[j].first == keyed[i].first)
                blocks.back().push_back(keyed[j++].second);
            i = j;
        }
    }

    int col = 0;
    for (const auto& idx : blocks) {
        const int m = int(idx.size());
        MatrixXd Hb(m, m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) Hb(a, b) = H(idx[a], idx[b]);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(Hb);
        if (es.info() != Eigen::Success)
            throw NumericsError("hyperfine eigensolver failed");
        for (int k = 0; k < m; ++k, ++col) {
            raw.values[col] = es.eigenvalues()[k];
            for (int a = 0; a < m; ++a)
                raw.vectors(idx[a], col) = es.eigenvectors()(a, k);
        }
    }

    // global energy order
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(),
              [&](int a, int b) { return raw.values[a] < raw.values[b]; });
    VectorXd sorted_vals(n);
    MatrixXd sorted_vecs(n, n);
    for (int i = 0; i < n; ++i) {
        sorted_vals[i] = raw.values[perm[i]];
        sorted_vecs.col(i) = raw.vectors.col(perm[i]);
    }
    raw.values = sorted_vals;
    raw.vectors = sorted_vecs;

    const SpinOps S = spin_ops(mol.S_elec);
    const SpinOps I = spin_ops(mol.I_nuc);
    raw.SdotI = kron(S.z, I.z) + 0.5 * (kron(S.plus, I.minus) +
                                        kron(S.minus, I.plus));
    raw.n_spin = int(raw.SdotI.rows());
    return raw;
}

HyperfineLevel label_level(const SpectrumRaw& raw, int col,
                           const MoleculeSpec& mol) {
    HyperfineLevel lvl;
    lvl.energy = raw.values[col];
    const auto v = raw.vectors.col(col);
    const int n_spin = raw.n_spin;
    const int n_rot = int(v.size()) / n_spin;

    // basis ordering keeps each (N, m_N) block of spin states contiguous
    double M = 0, sdots = 0;
    int dom_block = 0;
    double dom_weight = -1;
    for (int r = 0; r < n_rot; ++r) {
        const Eigen::VectorXd blk = v.segment(r * n_spin, n_spin);
        const double w = blk.squaredNorm();
        if (w > dom_weight) {
            dom_weight = w;
            dom_block = r;
        }
        sdots += blk.dot(raw.SdotI * blk);
        for (int s = 0; s < n_spin; ++s)
            M += blk[s] * blk[s] * raw.basis[r * n_spin + s].M();
    }
    const double f3sq = mol.S_elec * (mol.S_elec + 1) +
                        mol.I_nuc * (mol.I_nuc + 1) + 2 * sdots;

    const auto& dom_state = raw.basis[dom_block * n_spin];
    lvl.N = dom_state.N;
    lvl.m_N = dom_state.m_N;
    lvl.purity = dom_weight;
    lvl.M = std::round(2 * M) / 2.0;
    lvl.M_F3 = int(std::round(lvl.M - lvl.m_N));
    lvl.F3 = int(std::round((-1.0 + std::sqrt(1.0 + 4.0 * f3sq)) / 2.0));
    return lvl;
}

}  // namespace

HyperfineSpectrum hyperfine_spectrum(const MoleculeSpec& mol, double E_dc,
                                     int N_max) {
    const SpectrumRaw raw = diagonalize_spin(mol, E_dc, N_max);
    HyperfineSpectrum spec;
    spec.E_dc = E_dc;
    spec.basis_size = int(raw.basis.size());
    spec.levels.reserve(raw.basis.size());
    for (int k = 0; k < raw.values.size(); ++k)
        spec.levels.push_back(label_level(raw, k, mol));
    return spec;
}

const HyperfineLevel& select_level(const HyperfineSpectrum& spec,
                                   const LevelSelector& sel) {
    const HyperfineLevel* best = nullptr;
    for (const auto& lvl : spec.levels) {
        if (lvl.N != sel.N || lvl.m_N != sel.m_N || lvl.F3 != sel.F3 ||
            lvl.M_F3 != sel.M_F3)
            continue;
        if (!best || lvl.purity > best->purity) best = &lvl;
    }
    if (!best)
        throw PhysicsError("select_level: no level with requested labels");
    return *best;
}

double hyperfine_sensitivity(const MoleculeSpec& mol, const LevelSelector& a,
                             const LevelSelector& b, double E_dc,
                             int N_max) {
    if (a.N == b.N && a.m_N == b.m_N && a.F3 == b.F3 && a.M_F3 == b.M_F3)
        return 0.0;
    const double h = 1e-3 * hbar * mol.B / mol.mu;

    // central difference with label-based selection at the displaced
    // fields; a label flip between E-h and E+h indicates a crossing
    auto gap = [&](double E) {
        const auto spec = hyperfine_spectrum(mol, E, N_max);
        return select_level(spec, a).energy - select_level(spec, b).energy;
    };
    const double gm = gap(E_dc - h), g0 = gap(E_dc), gp = gap(E_dc + h);
    const double d_lo = (g0 - gm) / h, d_hi = (gp - g0) / h;
    const double d = (gp - gm) / (2 * h);
    // one-sided slopes disagreeing wildly means the labels jumped
    if (std::abs(d_hi - d_lo) > 0.5 * std::abs(d) + 1e-4 * mol.mu)
        throw PhysicsError("hyperfine_sensitivity: level tracking failed");
    return d / hbar;  // rad/s per V/m
}

double qubit_hyperfine_offset(const MoleculeSpec& mol, double E_dc,
                              int N_max) {
    const auto spec = hyperfine_spectrum(mol, E_dc, N_max);
    auto transition = [&](int F3) {
        const double e2 =
            select_level(spec, {2, 0, F3, 0}).energy;
        const double e1 =
            select_level(spec, {1, 0, F3, 0}).energy;
        return (e2 - e1) / hbar;
    };
    return std::abs(transition(2) - transition(1));
}

}  // namespace molqed
