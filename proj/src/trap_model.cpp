#include "molqed/trap_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "molqed/constants.hpp"
#include "molqed/error.hpp"
#include "molqed/rotor_stark.hpp"

namespace molqed {

using namespace constants;
using Eigen::Matrix3d;
using Eigen::Vector3d;

namespace {

// Potential of a uniform unit line charge (lambda = 1) along p1->p2.
double segment_potential_unit(const Vector3d& p1, const Vector3d& p2,
                              const Vector3d& r) {
    const double L = (p2 - p1).norm();
    const double d1 = (r - p1).norm();
    const double d2 = (r - p2).norm();
    const double num = d1 + d2 + L;
    const double den = d1 + d2 - L;
    return std::log(num / den) / (4.0 * pi * epsilon_0);
}

// Field of a uniform unit line charge.
Vector3d segment_field_unit(const Vector3d& p1, const Vector3d& p2,
                            const Vector3d& r) {
    const Vector3d axis = p2 - p1;
    const double L = axis.norm();
    const Vector3d u = axis / L;
    const Vector3d a = r - p1;
    const double t = a.dot(u);
    const Vector3d perp = a - t * u;
    const double rho = perp.norm();
    const double d1 = a.norm();
    const double d2 = (r - p2).norm();

    const double E_axial = (1.0 / d2 - 1.0 / d1) / (4.0 * pi * epsilon_0);
    Vector3d field = E_axial * u;
    if (rho > 0) {
        const double E_rho =
            (t / d1 + (L - t) / d2) / (4.0 * pi * epsilon_0 * rho);
        field += E_rho * (perp / rho);
    }
    return field;
}

void check_not_inside(const TrapGeometry& geom, const Eigen::Vector3d& r) {
    for (const auto& seg : geom.electrodes) {
        const Vector3d axis = seg.p2 - seg.p1;
        const double L = axis.norm();
        const Vector3d u = axis / L;
        const double t = (r - seg.p1).dot(u);
        const double tc = std::clamp(t, 0.0, L);
        const double dist = (r - (seg.p1 + tc * u)).norm();
        if (dist < seg.wire_radius)
            throw Error("field evaluation inside an electrode");
    }
}

}  // namespace

ChargeSolution solve_charges(const TrapGeometry& geom,
                             int subdivisions_per_segment) {
    if (geom.electrodes.empty())
        throw Error("solve_charges: need at least one electrode");
    ChargeSolution sol;
    sol.ground_plane = geom.ground_plane;

    for (size_t e = 0; e < geom.electrodes.size(); ++e) {
        const auto& seg = geom.electrodes[e];
        if (!(seg.wire_radius > 0))
            throw Error("solve_charges: wire radius must be > 0");
        const double len = (seg.p2 - seg.p1).norm();
        if (len <= 2 * seg.wire_radius)
            throw Error("solve_charges: degenerate electrode segment");
        if (geom.ground_plane && (seg.p1.z() < 0 || seg.p2.z() < 0))
            throw Error("solve_charges: electrodes must lie in z >= 0");
        // keep sub-segments at least a few radii long so the thin-wire
        // kernel stays valid
        const int n_sub = std::max(
            1, std::min(subdivisions_per_segment,
                        int(len / (3.0 * seg.wire_radius))));
        for (int k = 0; k < n_sub; ++k) {
            const double f0 = double(k) / n_sub;
            const double f1 = double(k + 1) / n_sub;
            ChargeSolution::Piece piece;
            piece.p1 = seg.p1 + f0 * (seg.p2 - seg.p1);
            piece.p2 = seg.p1 + f1 * (seg.p2 - seg.p1);
            piece.electrode = int(e);
            sol.pieces.push_back(piece);
        }
    }

    const int n = int(sol.pieces.size());
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd rhs(n);

    for (int i = 0; i < n; ++i) {
        const auto& pi_ = sol.pieces[i];
        const auto& seg = geom.electrodes[pi_.electrode];
        // collocation: the potential averaged over four points on the wire
        // surface around the sub-segment midpoint equals the voltage
        const Vector3d mid = 0.5 * (pi_.p1 + pi_.p2);
        const Vector3d u = (pi_.p2 - pi_.p1).normalized();
        Vector3d perp1 = std::abs(u.z()) < 0.9 ? u.cross(Vector3d::UnitZ())
                                               : u.cross(Vector3d::UnitX());
        perp1.normalize();
        const Vector3d perp2 = u.cross(perp1);
        const std::array<Vector3d, 4> cps{
            mid + seg.wire_radius * perp1, mid - seg.wire_radius * perp1,
            mid + seg.wire_radius * perp2, mid - seg.wire_radius * perp2};

        for (int j = 0; j < n; ++j) {
            const auto& pj = sol.pieces[j];
            double g = 0;
            for (const auto& cp : cps) {
                g += segment_potential_unit(pj.p1, pj.p2, cp);
                if (geom.ground_plane) {
                    const Vector3d m1(pj.p1.x(), pj.p1.y(), -pj.p1.z());
                    const Vector3d m2(pj.p2.x(), pj.p2.y(), -pj.p2.z());
                    g -= segment_potential_unit(m1, m2, cp);
                }
            }
            A(i, j) = 0.25 * g;
        }
        double bias_pot = 0;
        for (const auto& cp : cps) bias_pot += geom.bias_field.dot(cp);
        rhs[i] = seg.voltage + 0.25 * bias_pot;
    }

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible())
        throw NumericsError("solve_charges: singular collocation system "
                            "(coincident electrodes?)");
    const Eigen::VectorXd lambda = lu.solve(rhs);
    for (int i = 0; i < n; ++i) sol.pieces[i].lambda = lambda[i];
    return sol;
}

double potential_at(const TrapGeometry& geom, const ChargeSolution& sol,
                    const Eigen::Vector3d& r) {
    double phi = -geom.bias_field.dot(r);
    for (const auto& p : sol.pieces) {
        phi += p.lambda * segment_potential_unit(p.p1, p.p2, r);
        if (sol.ground_plane) {
            const Vector3d m1(p.p1.x(), p.p1.y(), -p.p1.z());
            const Vector3d m2(p.p2.x(), p.p2.y(), -p.p2.z());
            phi -= p.lambda * segment_potential_unit(m1, m2, r);
        }
    }
    return phi;
}

Eigen::Vector3d field_at(const TrapGeometry& geom, const ChargeSolution& sol,
                         const Eigen::Vector3d& r) {
    check_not_inside(geom, r);
    Vector3d E = geom.bias_field;
    for (const auto& p : sol.pieces) {
        E += p.lambda * segment_field_unit(p.p1, p.p2, r);
        if (sol.ground_plane) {
            const Vector3d m1(p.p1.x(), p.p1.y(), -p.p1.z());
            const Vector3d m2(p.p2.x(), p.p2.y(), -p.p2.z());
            E -= p.lambda * segment_field_unit(m1, m2, r);
        }
    }
    return E;
}

namespace {

// Stark potential of a tracked rotor state as a function of field
// magnitude, with the zero-field rotor energy subtracted.
class StarkPotential {
  public:
    StarkPotential(const MoleculeSpec& mol, RotorBasisState state, int N_max)
        : mol_(mol), state_(state), N_max_(N_max),
          E0_(tracked_energy(mol, state, 0.0, N_max)) {}

    double operator()(double field_magnitude) const {
        return tracked_energy(mol_, state_, field_magnitude, N_max_) - E0_;
    }

  private:
    MoleculeSpec mol_;
    RotorBasisState state_;
    int N_max_;
    double E0_;
};

struct PotentialField {
    const TrapGeometry* geom;
    const ChargeSolution* sol;
    const StarkPotential* stark;

    double operator()(const Vector3d& r) const {
        return (*stark)(field_at(*geom, *sol, r).norm());
    }
};

// |E(r)|; for a weak-field seeker below the Stark turnover this has the
// same minimum as the potential but cannot be fooled by the
// high-field-seeking region next to the electrodes.
struct FieldMagnitude {
    const TrapGeometry* geom;
    const ChargeSolution* sol;

    double operator()(const Vector3d& r) const {
        return field_at(*geom, *sol, r).norm();
    }
};

// Nelder-Mead on 3D, small and deterministic.
template <typename Fn>
Vector3d nelder_mead(const Fn& U, const Vector3d& start, double scale,
                     int max_iter = 600) {
    std::array<Vector3d, 4> x;
    std::array<double, 4> f;
    x[0] = start;
    for (int i = 0; i < 3; ++i) {
        x[i + 1] = start;
        x[i + 1][i] += scale;
    }
    for (int i = 0; i < 4; ++i) f[i] = U(x[i]);

    auto order = [&] {
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (f[j] < f[i]) {
                    std::swap(f[i], f[j]);
                    std::swap(x[i], x[j]);
                }
    };

    for (int it = 0; it < max_iter; ++it) {
        order();
        if ((x[3] - x[0]).norm() < 1e-7 * scale) break;
        const Vector3d c = (x[0] + x[1] + x[2]) / 3.0;
        const Vector3d xr = c + (c - x[3]);
        const double fr = U(xr);
        if (fr < f[0]) {
            const Vector3d xe = c + 2.0 * (c - x[3]);
            const double fe = U(xe);
            if (fe < fr) {
                x[3] = xe;
                f[3] = fe;
            } else {
                x[3] = xr;
                f[3] = fr;
            }
        } else if (fr < f[2]) {
            x[3] = xr;
            f[3] = fr;
        } else {
            const Vector3d xc = c + 0.5 * (x[3] - c);
            const double fc = U(xc);
            if (fc < f[3]) {
                x[3] = xc;
                f[3] = fc;
            } else {
                for (int i = 1; i < 4; ++i) {
                    x[i] = x[0] + 0.5 * (x[i] - x[0]);
                    f[i] = U(x[i]);
                }
            }
        }
    }
    order();
    return x[0];
}

Matrix3d hessian(const PotentialField& U, const Vector3d& r0, double h) {
    Matrix3d H;
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            Vector3d ei = Vector3d::Zero(), ej = Vector3d::Zero();
            ei[i] = h;
            ej[j] = h;
            double v;
            if (i == j) {
                v = (U(r0 + ei) - 2.0 * U(r0) + U(r0 - ei)) / (h * h);
            } else {
                v = (U(r0 + ei + ej) - U(r0 + ei - ej) - U(r0 - ei + ej) +
                     U(r0 - ei - ej)) /
                    (4.0 * h * h);
            }
            H(i, j) = v;
            H(j, i) = v;
        }
    }
    return H;
}

}  // namespace

TrapCharacterization characterize_trap(const TrapGeometry& geom,
                                       const MoleculeSpec& mol, int N_max,
                                       int subdivisions_per_segment) {
    if (!(geom.w > 0)) throw Error("characterize_trap: geometry w must be > 0");
    const ChargeSolution sol = solve_charges(geom, subdivisions_per_segment);
    const StarkPotential stark1(mol, {1, 0}, N_max);
    const StarkPotential stark2(mol, {2, 0}, N_max);
    const PotentialField U1{&geom, &sol, &stark1};
    const PotentialField U2{&geom, &sol, &stark2};

    // seeded grid scan for the field-magnitude minimum above the plane
    const FieldMagnitude Emag{&geom, &sol};
    const double w = geom.w;
    Vector3d best(0, 0, w);
    double best_val = std::numeric_limits<double>::infinity();
    const int nx = 17, ny = 17, nz = 15;
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            for (int iz = 0; iz < nz; ++iz) {
                const Vector3d r(-2.5 * w + 5.0 * w * ix / (nx - 1),
                                 -2.5 * w + 5.0 * w * iy / (ny - 1),
                                 0.25 * w + 2.75 * w * iz / (nz - 1));
                double val;
                try {
                    val = Emag(r);
                } catch (const Error&) {
                    continue;  // inside an electrode
                }
                if (val < best_val) {
                    best_val = val;
                    best = r;
                }
            }
    if (!std::isfinite(best_val))
        throw PhysicsError("characterize_trap: no trap minimum found");

    TrapCharacterization out;
    out.r0 = nelder_mead(Emag, best, 0.05 * w);
    out.E_off = field_at(geom, sol, out.r0).norm();
    if (!(out.E_off > 0))
        throw PhysicsError("characterize_trap: field zero at trap center");

    // principal frequencies from the Hessian
    const double h = 2e-3 * w;
    const Matrix3d H1 = hessian(U1, out.r0, h);
    Eigen::SelfAdjointEigenSolver<Matrix3d> es(H1);
    Eigen::Vector3d evals = es.eigenvalues();
    Matrix3d axes = es.eigenvectors();
    if (evals.minCoeff() <= 0)
        throw PhysicsError("characterize_trap: saddle point, not a minimum");

    // order axes so the one closest to z comes last (cooling axis)
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return std::abs(axes(2, a)) < std::abs(axes(2, b));
    });
    for (int k = 0; k < 3; ++k) {
        out.omega_t[k] = std::sqrt(evals[idx[k]] / mol.mass);
        out.axes.col(k) = axes.col(idx[k]);
    }

    const Matrix3d H2 = hessian(U2, out.r0, h);
    Eigen::SelfAdjointEigenSolver<Matrix3d> es2(H2);
    Eigen::Vector3d evals2 = es2.eigenvalues();
    Matrix3d axes2 = es2.eigenvectors();
    std::array<int, 3> idx2{0, 1, 2};
    std::sort(idx2.begin(), idx2.end(), [&](int a, int b) {
        return std::abs(axes2(2, a)) < std::abs(axes2(2, b));
    });
    for (int k = 0; k < 3; ++k)
        out.omega_t_state2[k] =
            evals2[idx2[k]] > 0 ? std::sqrt(evals2[idx2[k]] / mol.mass) : 0.0;

    // escape barrier: lowest maximum of U along +-x, +-y, +-z rays
    const double U_min = U1(out.r0);
    double lowest_barrier = std::numeric_limits<double>::infinity();
    const std::array<Vector3d, 6> dirs{
        Vector3d::UnitX(),  -Vector3d::UnitX(), Vector3d::UnitY(),
        -Vector3d::UnitY(), Vector3d::UnitZ(),  -Vector3d::UnitZ()};
    for (const auto& dir : dirs) {
        double barrier = 0.0;
        const int n_steps = 400;
        for (int k = 1; k <= n_steps; ++k) {
            const Vector3d r = out.r0 + dir * (8.0 * w * k / n_steps);
            if (r.z() <= 1e-3 * w) break;  // reached the chip surface
            double val;
            try {
                val = U1(r);
            } catch (const Error&) {
                break;  // ray enters an electrode
            }
            barrier = std::max(barrier, val - U_min);
        }
        lowest_barrier = std::min(lowest_barrier, barrier);
    }
    out.depth = lowest_barrier;

    // surface attraction correction on the cooling (z) axis
    const auto vdw = vdw_correction(out.r0.z(), out.omega_t[2], mol);
    out.vdw_shift = (out.omega_t[2] - vdw.omega_t_prime) / out.omega_t[2];
    out.depth_vdw = std::min(out.depth, vdw.surface_barrier);
    return out;
}

VdwResult vdw_correction(double z0, double omega_t, const MoleculeSpec& mol) {
    if (!(z0 > 0) || !(omega_t > 0))
        throw Error("vdw_correction: z0 and omega_t must be > 0");
    VdwResult out;
    out.C3 = mol.mu * mol.mu / (32.0 * pi * epsilon_0);
    const double w2 =
        omega_t * omega_t - 12.0 * out.C3 / (mol.mass * std::pow(z0, 5));
    if (w2 <= 0)
        throw PhysicsError("vdw_correction: surface attraction destroys "
                           "the trap (omega_t'^2 <= 0)");
    out.omega_t_prime = std::sqrt(w2);

    // barrier toward z = 0 of 0.5 m w^2 (z-z0)^2 - C3/z^3 + C3/z0^3
    const double k = mol.mass * omega_t * omega_t;
    auto V = [&](double z) {
        return 0.5 * k * (z - z0) * (z - z0) - out.C3 / (z * z * z) +
               out.C3 / (z0 * z0 * z0);
    };
    double barrier = 0.0;
    const int n = 4000;
    for (int i = 1; i < n; ++i) {
        const double z = z0 * i / n;
        barrier = std::max(barrier, V(z));
    }
    out.surface_barrier = barrier;
    out.depth_reduction = 0.5 * k * z0 * z0 - barrier;
    return out;
}

double loading_phase_space_target(double w, double U0) {
    if (!(w > 0) || !(U0 > 0))
        throw Error("loading_phase_space_target: inputs must be > 0");
    const double w_cm = w * 1e2;
    const double U_kelvin = U0 / k_B;
    return std::pow(w_cm, -3.0) * std::pow(U_kelvin, -1.5);
}

TrapGeometry ez_reference_geometry(double scale) {
    // Two interlocking L-shaped thin electrodes: long arms run parallel
    // along x with spacing w, each arm bends toward the other electrode at
    // one end (axial endcaps). A transverse bias cancels the two-wire
    // field at the working height and sets the offset field.
    const double um = 1e-6 * scale;
    const double w = 0.1 * um;
    const double V = 0.13 * scale;  // electrode voltage, V (scales with size)
    const double rw = 0.01 * um;

    TrapGeometry g;
    g.w = w;
    auto seg = [&](double x1, double y1, double z1, double x2, double y2,
                   double z2, double volt) {
        LineSegment s;
        s.p1 = Vector3d(x1 * um, y1 * um, z1 * um);
        s.p2 = Vector3d(x2 * um, y2 * um, z2 * um);
        s.voltage = volt;
        s.wire_radius = rw;
        return s;
    };
    // electrode A (+V): long arm at y = -w/2, bend up at x = +0.15 um
    g.electrodes.push_back(seg(-0.45, -0.05, 0, 0.15, -0.05, 0, +V));
    g.electrodes.push_back(seg(0.15, -0.05, 0, 0.15, 0.02, 0, +V));
    // electrode B (-V): long arm at y = +w/2, bend down at x = -0.15 um
    g.electrodes.push_back(seg(0.45, 0.05, 0, -0.15, 0.05, 0, -V));
    g.electrodes.push_back(seg(-0.15, 0.05, 0, -0.15, -0.02, 0, -V));
    // transverse bias, V/m (a field, unchanged under geometric scaling)
    g.bias_field = Vector3d(0.0, -3.0e5, 0.0);
    return g;
}

}  // namespace molqed
