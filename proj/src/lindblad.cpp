#include "molqed/lindblad.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "molqed/constants.hpp"
#include "molqed/error.hpp"

namespace molqed {

using namespace constants;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using std::complex;

void CoolingModel::validate() const {
    if (N_fock < 2 || N_motion < 2)
        throw Error("cooling model: truncations must be >= 2");
    if (!(omega_t > 0)) throw Error("cooling model: omega_t must be > 0");
    if (kappa < 0 || n_thermal < 0 || g0 < 0)
        throw Error("cooling model: rates must be >= 0");
}

CoolingModel build_cooling_model(const CouplingResult& coupling,
                                 const ResonatorSpec& res, double omega_t,
                                 double Omega_drive, double n_thermal,
                                 int N_fock, int N_motion) {
    CoolingModel m;
    m.g0 = coupling.g;
    m.eta = coupling.eta;
    m.omega_t = omega_t;
    m.kappa = res.kappa();
    m.Omega_drive = Omega_drive;
    m.drive_detuning = -omega_t;  // red sideband
    m.cavity_detuning = 0.0;      // cavity resonant with the qubit
    m.n_thermal = n_thermal;
    m.N_fock = N_fock;
    m.N_motion = N_motion;
    m.validate();
    return m;
}

namespace {

MatrixXcd kron(const MatrixXcd& A, const MatrixXcd& B) {
    MatrixXcd out(A.rows() * B.rows(), A.cols() * B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) =
                A(i, j) * B;
    return out;
}

MatrixXcd destroy(int dim) {
    MatrixXcd a = MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

}  // namespace

CoolingOperators build_operators(const CoolingModel& m) {
    m.validate();
    const MatrixXcd iq = MatrixXcd::Identity(2, 2);
    const MatrixXcd ic = MatrixXcd::Identity(m.N_fock, m.N_fock);
    const MatrixXcd im = MatrixXcd::Identity(m.N_motion, m.N_motion);

    MatrixXcd sm = MatrixXcd::Zero(2, 2);
    sm(0, 1) = 1.0;  // |1><2|, basis {ground, excited}
    const MatrixXcd sp = sm.adjoint();
    const MatrixXcd a = destroy(m.N_fock);
    const MatrixXcd b = destroy(m.N_motion);

    const MatrixXcd See = kron(kron(sp * sm, ic), im);
    const MatrixXcd Nc = kron(kron(iq, a.adjoint() * a), im);
    const MatrixXcd Nm = kron(kron(iq, ic), b.adjoint() * b);
    const MatrixXcd X = kron(kron(iq, ic), b + b.adjoint());
    const MatrixXcd Asp = kron(kron(sm, a.adjoint()), im);  // a' s-
    const MatrixXcd Drv = kron(kron(sp, ic), im);           // s+

    CoolingOperators ops;
    // X commutes with the qubit/cavity parts, so X*jc is Hermitian.
    const MatrixXcd jc = Asp + Asp.adjoint();
    const MatrixXcd drive = Drv + Drv.adjoint();
    ops.H = -m.drive_detuning * See +
            (m.cavity_detuning - m.drive_detuning) * Nc + m.omega_t * Nm +
            m.omega_t_excited_offset * See * Nm +
            m.g0 * (jc + m.eta * X * jc) +
            0.5 * m.Omega_drive * (drive + m.eta * X * drive);

    const MatrixXcd ac = kron(kron(iq, a), im);
    if (m.kappa > 0) {
        ops.collapse.push_back(std::sqrt(m.kappa * (m.n_thermal + 1)) * ac);
        if (m.n_thermal > 0)
            ops.collapse.push_back(std::sqrt(m.kappa * m.n_thermal) *
                                   ac.adjoint());
    }
    ops.n_motion = Nm;
    ops.n_cavity = Nc;
    ops.sigma_ee = See;
    return ops;
}

Eigen::MatrixXcd thermal_state(double n_bar, int dim) {
    Eigen::VectorXd p(dim);
    if (n_bar <= 0) {
        p.setZero();
        p[0] = 1.0;
    } else {
        const double r = n_bar / (n_bar + 1.0);
        double w = 1.0 / (n_bar + 1.0);
        for (int n = 0; n < dim; ++n) {
            p[n] = w;
            w *= r;
        }
        p /= p.sum();  // renormalize the truncated tail
    }
    return p.cast<complex<double>>().asDiagonal();
}

Eigen::MatrixXcd initial_state(const CoolingModel& m, bool qubit_excited,
                               const Eigen::MatrixXcd& motion_state) {
    MatrixXcd q = MatrixXcd::Zero(2, 2);
    q(qubit_excited ? 1 : 0, qubit_excited ? 1 : 0) = 1.0;
    MatrixXcd cav = MatrixXcd::Zero(m.N_fock, m.N_fock);
    cav(0, 0) = 1.0;
    return kron(kron(q, cav), motion_state);
}

namespace {

using SparseC = Eigen::SparseMatrix<complex<double>>;

SparseC sparse_kron(const SparseC& A, const SparseC& B) {
    SparseC out(A.rows() * B.rows(), A.cols() * B.cols());
    std::vector<Eigen::Triplet<complex<double>>> trips;
    trips.reserve(size_t(A.nonZeros()) * B.nonZeros());
    for (int ka = 0; ka < A.outerSize(); ++ka)
        for (SparseC::InnerIterator ia(A, ka); ia; ++ia)
            for (int kb = 0; kb < B.outerSize(); ++kb)
                for (SparseC::InnerIterator ib(B, kb); ib; ++ib)
                    trips.emplace_back(ia.row() * B.rows() + ib.row(),
                                       ia.col() * B.cols() + ib.col(),
                                       ia.value() * ib.value());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

// Liouvillian as a superoperator on vec(rho) (column-major):
// vec(H rho - rho H) etc. via vec(A X B) = (B^T (x) A) vec(X).
SparseC liouvillian(const CoolingOperators& ops) {
    const int d = int(ops.H.rows());
    SparseC id(d, d);
    id.setIdentity();
    const SparseC H = ops.H.sparseView(1e-300);
    const SparseC Ht = SparseC(H.transpose());

    const complex<double> mi(0.0, -1.0);
    SparseC L = mi * (sparse_kron(id, H) - sparse_kron(Ht, id));
    for (const auto& cd : ops.collapse) {
        const SparseC c = cd.sparseView(1e-300);
        const SparseC cc = SparseC((cd.adjoint() * cd).sparseView(1e-300));
        const SparseC cconj = SparseC(c.conjugate());
        const SparseC cct = SparseC(cc.transpose());
        L = L + sparse_kron(cconj, c) - 0.5 * sparse_kron(id, cc) -
            0.5 * sparse_kron(cct, id);
    }
    L.makeCompressed();
    return L;
}

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33,
                 A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600,
                 E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640,
                 E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

}  // namespace

CoolingTrajectory evolve(const CoolingModel& model,
                         const Eigen::MatrixXcd& rho0, double t_final,
                         double dt_output, double rtol, double atol) {
    model.validate();
    const int d = model.dimension();
    if (rho0.rows() != d || rho0.cols() != d)
        throw Error("evolve: rho0 dimension mismatch");
    if (std::abs(rho0.trace().real() - 1.0) > 1e-9 ||
        std::abs(rho0.trace().imag()) > 1e-12)
        throw Error("evolve: rho0 must have unit trace");
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw Error("evolve: rho0 must be Hermitian");
    if (!(t_final > 0) || !(dt_output > 0))
        throw Error("evolve: t_final and dt_output must be > 0");

    const CoolingOperators ops = build_operators(model);
    const SparseC L = liouvillian(ops);

    const int n_out = int(std::round(t_final / dt_output)) + 1;
    CoolingTrajectory traj;
    traj.times.resize(n_out);
    traj.mean_n_motion.resize(n_out);
    traj.mean_n_cavity.resize(n_out);
    traj.excited_population.resize(n_out);
    traj.trace_error.resize(n_out);
    traj.min_eigenvalue = std::numeric_limits<double>::infinity();

    MatrixXcd rho = rho0;
    Eigen::Map<VectorXcd> y(rho.data(), d * d);

    auto sample = [&](int idx, double t) {
        traj.times[idx] = t;
        traj.mean_n_motion[idx] = (ops.n_motion * rho).trace().real();
        traj.mean_n_cavity[idx] = (ops.n_cavity * rho).trace().real();
        traj.excited_population[idx] = (ops.sigma_ee * rho).trace().real();
        traj.trace_error[idx] = std::abs(rho.trace().real() - 1.0);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho,
                                                    Eigen::EigenvaluesOnly);
        traj.min_eigenvalue =
            std::min(traj.min_eigenvalue, es.eigenvalues().minCoeff());
        if (traj.mean_n_motion[idx] > model.N_motion - 2)
            throw PhysicsError("evolve: motional truncation breach");
        if (traj.mean_n_cavity[idx] > model.N_fock - 2)
            throw PhysicsError("evolve: cavity truncation breach");
    };
    sample(0, 0.0);

    // step scale from the fastest Hamiltonian frequency
    const double w_fast = std::max(
        {model.omega_t, std::abs(model.drive_detuning),
         std::abs(model.cavity_detuning - model.drive_detuning), model.kappa,
         model.g0, model.Omega_drive, 1.0 / t_final});
    double h = 0.1 / w_fast;

    VectorXcd k1 = L * y, k2(d * d), k3(d * d), k4(d * d), k5(d * d),
              k6(d * d), k7(d * d), ytmp(d * d), ynew(d * d), yerr(d * d);

    double t = 0.0;
    int out_idx = 1;
    const double h_min = t_final * 1e-14;
    while (out_idx < n_out) {
        const double t_target = traj.times[out_idx - 1] + dt_output;
        bool at_output = false;
        double h_try = h;
        if (t + h_try >= t_target) {
            h_try = t_target - t;
            at_output = true;
        }

        ytmp = y + h_try * A21 * k1;
        k2 = L * ytmp;
        ytmp = y + h_try * (A31 * k1 + A32 * k2);
        k3 = L * ytmp;
        ytmp = y + h_try * (A41 * k1 + A42 * k2 + A43 * k3);
        k4 = L * ytmp;
        ytmp = y + h_try * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
        k5 = L * ytmp;
        ytmp = y + h_try * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 +
                            A65 * k5);
        k6 = L * ytmp;
        ynew = y + h_try * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        k7 = L * ynew;
        yerr = h_try * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 +
                        E7 * k7);

        // scaled RMS error
        double err2 = 0.0;
        for (int i = 0; i < yerr.size(); ++i) {
            const double sc =
                atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double e = std::abs(yerr[i]) / sc;
            err2 += e * e;
        }
        const double err = std::sqrt(err2 / yerr.size());

        const double grow =
            err > 0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)))
                    : 5.0;
        if (err <= 1.0) {
            t += h_try;
            y = ynew;
            rho = 0.5 * (rho + rho.adjoint().eval());  // keep Hermitian
            k1 = L * y;  // restart (symmetrization invalidates FSAL)
            if (at_output) {
                sample(out_idx, t);
                ++out_idx;
            }
            // do not let output-grid clamping throttle the natural step
            h = at_output ? std::max(h, h_try * grow) : h_try * grow;
        } else {
            h = h_try * grow;
        }
        if (h < h_min) throw NumericsError("evolve: step size underflow");
    }
    return traj;
}

Eigen::MatrixXcd steady_state(const CoolingModel& model) {
    model.validate();
    if (!(model.kappa > 0))
        throw Error("steady_state: needs a dissipative channel");
    const CoolingOperators ops = build_operators(model);
    SparseC L = liouvillian(ops);
    const int d = model.dimension();

    // replace the first row by the trace functional, rhs = 1
    std::vector<Eigen::Triplet<complex<double>>> trips;
    for (int k = 0; k < L.outerSize(); ++k)
        for (SparseC::InnerIterator it(L, k); it; ++it)
            if (it.row() != 0)
                trips.emplace_back(it.row(), it.col(), it.value());
    for (int i = 0; i < d; ++i)
        trips.emplace_back(0, i * d + i, complex<double>(1.0, 0.0));
    SparseC A(d * d, d * d);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();

    Eigen::SparseLU<SparseC> solver;
    solver.compute(A);
    if (solver.info() != Eigen::Success)
        throw NumericsError("steady_state: singular Liouvillian system");
    VectorXcd rhs = VectorXcd::Zero(d * d);
    rhs[0] = 1.0;
    const VectorXcd x = solver.solve(rhs);

    MatrixXcd rho = Eigen::Map<const MatrixXcd>(x.data(), d, d);
    rho = 0.5 * (rho + rho.adjoint().eval());
    rho /= rho.trace().real();
    return rho;
}

CoolingRates cooling_rate_analytic(double g, double kappa, double eta,
                                   double Omega) {
    if (!(g > 0) || !(kappa > 0))
        throw Error("cooling_rate_analytic: g and kappa must be > 0");
    CoolingRates out;
    out.gamma_sp = 2.0 * g * g / kappa;
    out.gamma_purcell = 4.0 * g * g / kappa;
    const double etaOmega = eta * Omega;
    out.R = etaOmega * etaOmega / out.gamma_sp;
    out.R_purcell = etaOmega * etaOmega / out.gamma_purcell;
    out.Gamma_c_weak = out.gamma_sp * out.R / (2.0 * out.R + out.gamma_sp);
    out.Gamma_c_weak_purcell = out.gamma_purcell * out.R_purcell /
                               (2.0 * out.R_purcell + out.gamma_purcell);
    out.Gamma_c_saturated = std::min(g * g / kappa, kappa / 2.0);
    return out;
}

FinalTemperature final_temperature(double omega_t, double omega,
                                   double T_resonator) {
    if (!(omega_t > 0) || !(omega > 0) || !(T_resonator > 0))
        throw Error("final_temperature: inputs must be > 0");
    FinalTemperature out;
    out.R_ratio = omega_t / omega;
    out.n_gamma = 1.0 / std::expm1(hbar * omega / (k_B * T_resonator));
    // solve n(T_trap, omega_t) = n_gamma
    out.T_trap = hbar * omega_t / (k_B * std::log1p(1.0 / out.n_gamma));
    return out;
}

}  // namespace molqed
