#include "molqed/rotor_stark.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "molqed/constants.hpp"
#include "molqed/error.hpp"

namespace molqed {

using namespace constants;

double cos_theta_element(int N, int m) {
    const double num = double(N + 1) * (N + 1) - double(m) * m;
    return std::sqrt(num / ((2.0 * N + 1) * (2.0 * N + 3)));
}

std::vector<RotorBasisState> rotor_block_basis(int N_max, int m_N) {
    std::vector<RotorBasisState> basis;
    for (int N = std::abs(m_N); N <= N_max; ++N) basis.push_back({N, m_N});
    return basis;
}

Eigen::MatrixXd build_hamiltonian(const MoleculeSpec& mol, double E_dc,
                                  int N_max, int m_N) {
    if (N_max < 2) throw Error("build_hamiltonian: N_max must be >= 2");
    if (std::abs(m_N) > N_max)
        throw Error("build_hamiltonian: |m_N| must be <= N_max");
    if (!std::isfinite(E_dc))
        throw NumericsError("build_hamiltonian: non-finite field");

    const auto basis = rotor_block_basis(N_max, m_N);
    const int n = int(basis.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int N = basis[i].N;
        H(i, i) = hbar * mol.B * N * (N + 1.0);
        if (i + 1 < n) {
            const double v = -mol.mu * E_dc * cos_theta_element(N, m_N);
            H(i, i + 1) = v;
            H(i + 1, i) = v;
        }
    }
    return H;
}

namespace {

struct BlockEig {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

BlockEig diagonalize_block(const MoleculeSpec& mol, double E_dc, int N_max,
                           int m_N) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        build_hamiltonian(mol, E_dc, N_max, m_N));
    if (solver.info() != Eigen::Success)
        throw NumericsError("rotor eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// Reorder columns of `cur` to maximize overlap with `prev` (greedy over
// descending overlap). Returns the permutation new_index[prev_column] and
// the smallest matched overlap.
std::pair<std::vector<int>, double> match_by_overlap(
    const Eigen::MatrixXd& prev, const Eigen::MatrixXd& cur) {
    const int n = int(prev.cols());
    Eigen::MatrixXd ov = (prev.transpose() * cur).cwiseAbs();
    std::vector<int> assign(n, -1);
    std::vector<bool> used_row(n, false), used_col(n, false);
    double worst = 1.0;
    for (int pick = 0; pick < n; ++pick) {
        int bi = -1, bj = -1;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            if (used_row[i]) continue;
            for (int j = 0; j < n; ++j) {
                if (used_col[j]) continue;
                if (ov(i, j) > best) {
                    best = ov(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }
        assign[bi] = bj;
        used_row[bi] = true;
        used_col[bj] = true;
        worst = std::min(worst, best);
    }
    return {assign, worst};
}

}  // namespace

StarkMap stark_map(const MoleculeSpec& mol, const Eigen::VectorXd& field_grid,
                   int N_max, int m_N) {
    if (field_grid.size() == 0) throw Error("stark_map: empty field grid");
    for (int i = 0; i < field_grid.size(); ++i) {
        if (field_grid[i] < 0) throw Error("stark_map: fields must be >= 0");
        if (i > 0 && field_grid[i] <= field_grid[i - 1])
            throw Error("stark_map: grid must be strictly increasing");
    }

    StarkMap map;
    map.field_grid = field_grid;
    map.N_max = N_max;
    map.m_N_sector = m_N;
    map.labels = rotor_block_basis(N_max, m_N);
    const int n = int(map.labels.size());
    map.eigenvalues.resize(field_grid.size(), n);
    map.eigenvectors.resize(field_grid.size());

    // Track from zero field: prepend E=0 if the grid does not start there.
    BlockEig ref = diagonalize_block(mol, 0.0, N_max, m_N);
    Eigen::MatrixXd prev_vecs = ref.vectors;
    double prev_field = 0.0;

    for (int gi = 0; gi < field_grid.size(); ++gi) {
        const double target = field_grid[gi];
        // refine between prev_field and target until overlaps are clean
        std::deque<double> pending{target};
        int guard = 0;
        while (!pending.empty()) {
            const double f = pending.front();
            BlockEig eig = diagonalize_block(mol, f, N_max, m_N);
            auto [assign, worst] = match_by_overlap(prev_vecs, eig.vectors);
            if (worst < 0.9 && f - prev_field > 1e-9 * std::max(1.0, target)) {
                if (++guard > 60)
                    throw NumericsError("stark_map: state tracking failed");
                pending.push_front(0.5 * (prev_field + f));
                continue;
            }
            Eigen::MatrixXd tracked_vecs(eig.vectors.rows(), n);
            Eigen::VectorXd tracked_vals(n);
            for (int k = 0; k < n; ++k) {
                tracked_vals[k] = eig.values[assign[k]];
                // fix gauge: keep continuous sign along the map
                Eigen::VectorXd col = eig.vectors.col(assign[k]);
                if (prev_vecs.col(k).dot(col) < 0) col = -col;
                tracked_vecs.col(k) = col;
            }
            prev_vecs = tracked_vecs;
            prev_field = f;
            pending.pop_front();
            if (pending.empty()) {
                map.eigenvalues.row(gi) = tracked_vals.transpose();
                map.eigenvectors[gi] = tracked_vecs;
            }
        }
    }
    return map;
}

double tracked_energy(const MoleculeSpec& mol, RotorBasisState state,
                      double E_dc, int N_max) {
    if (state.N > N_max || std::abs(state.m_N) > state.N)
        throw Error("tracked_energy: invalid state label");
    BlockEig eig = diagonalize_block(mol, E_dc, N_max, state.m_N);
    return eig.values[state.N - std::abs(state.m_N)];
}

double qubit_splitting(const MoleculeSpec& mol, double E_dc, int N_max) {
    BlockEig eig = diagonalize_block(mol, E_dc, N_max, 0);
    return (eig.values[2] - eig.values[1]) / hbar;
}

namespace {

// Richardson-extrapolated central differences. The step is tied to the
// molecule's natural field scale hbar*B/mu.
template <typename F>
double richardson_d1(F&& f, double x, double h) {
    const double d1 = (f(x + h) - f(x - h)) / (2 * h);
    const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
    return (4 * d2 - d1) / 3;
}

template <typename F>
double richardson_d2(F&& f, double x, double h) {
    const double fx = f(x);
    const double d1 = (f(x + h) - 2 * fx + f(x - h)) / (h * h);
    const double d2 = (f(x + h / 2) - 2 * fx + f(x - h / 2)) / (h * h / 4);
    return (4 * d2 - d1) / 3;
}

double field_scale(const MoleculeSpec& mol) { return hbar * mol.B / mol.mu; }

}  // namespace

double splitting_sensitivity(const MoleculeSpec& mol, double E_dc, int N_max,
                             int order) {
    const double h = 1e-3 * field_scale(mol);
    auto f = [&](double E) { return qubit_splitting(mol, E, N_max); };
    if (order == 1) return richardson_d1(f, E_dc, h);
    if (order == 2) return richardson_d2(f, E_dc, h);
    throw Error("splitting_sensitivity: order must be 1 or 2");
}

double find_sweet_spot(const MoleculeSpec& mol, int N_max) {
    const double scale = field_scale(mol);
    auto deriv = [&](double E) {
        return splitting_sensitivity(mol, E, N_max, 1);
    };
    double lo = 0.5 * scale, hi = 6.0 * scale;
    double flo = deriv(lo), fhi = deriv(hi);
    if (flo * fhi > 0)
        throw NumericsError("find_sweet_spot: no sign change in bracket");
    while ((hi - lo) > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = deriv(mid);
        if (flo * fmid <= 0) {
            hi = mid;
            fhi = fmid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

double effective_dipole(const MoleculeSpec& mol, RotorBasisState state,
                        double E_dc, int N_max) {
    const double h = 1e-3 * field_scale(mol);
    auto f = [&](double E) { return tracked_energy(mol, state, E, N_max); };
    return -richardson_d1(f, E_dc, h);
}

TrapDepthResult max_trap_depth(const MoleculeSpec& mol, int N_max) {
    const double scale = field_scale(mol);
    auto shift = [&](double E) {
        return tracked_energy(mol, {1, 0}, E, N_max) -
               hbar * mol.B * 2.0;  // zero-field E_1 = 2 hbar B
    };
    // coarse scan for a bracket, then golden-section refinement
    const int n_scan = 121;
    double best_E = 0, best_U = 0;
    for (int i = 0; i < n_scan; ++i) {
        const double E = 12.0 * scale * i / (n_scan - 1);
        const double U = shift(E);
        if (U > best_U) {
            best_U = U;
            best_E = E;
        }
    }
    const double step = 12.0 * scale / (n_scan - 1);
    double a = std::max(0.0, best_E - step), b = best_E + step;
    const double invphi = (std::sqrt(5.0) - 1) / 2;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = shift(c), fd = shift(d);
    while (b - a > 1e-8 * scale) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = shift(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = shift(d);
        }
    }
    const double E_star = 0.5 * (a + b);
    return {shift(E_star), E_star};
}

}  // namespace molqed
