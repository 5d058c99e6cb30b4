#pragma once

#include <Eigen/Dense>
#include <vector>

#include "molqed/molecule.hpp"

namespace molqed {

/// One straight thin-wire electrode segment held at a fixed voltage.
struct LineSegment {
    Eigen::Vector3d p1{0, 0, 0};  // m
    Eigen::Vector3d p2{0, 0, 0};  // m
    double voltage = 0;           // V
    double wire_radius = 0;       // m
};

/// Electrode layout + uniform bias field. With ground_plane set, the
/// z = 0 plane is held at zero potential via image charges. Segments must
/// lie in z >= 0.
struct TrapGeometry {
    std::vector<LineSegment> electrodes;
    Eigen::Vector3d bias_field{0, 0, 0};  // V/m
    bool ground_plane = false;
    double w = 0;  // characteristic electrode spacing, m
};

/// Per-sub-segment piecewise-constant line charge densities from surface
/// collocation: the potential at each sub-segment midpoint (displaced by
/// the wire radius) equals the electrode voltage, including the bias-field
/// and (optionally) image contributions.
struct ChargeSolution {
    struct Piece {
        Eigen::Vector3d p1, p2;
        double lambda = 0;  // C/m
        int electrode = 0;  // owning segment index
    };
    std::vector<Piece> pieces;
    bool ground_plane = false;
};

ChargeSolution solve_charges(const TrapGeometry& geom,
                             int subdivisions_per_segment = 8);

/// Electrostatic potential (V) and field (V/m) of the solved charges plus
/// bias. field_at throws if r is inside a wire radius.
double potential_at(const TrapGeometry& geom, const ChargeSolution& sol,
                    const Eigen::Vector3d& r);
Eigen::Vector3d field_at(const TrapGeometry& geom, const ChargeSolution& sol,
                         const Eigen::Vector3d& r);

/// Trap summary for the weak-field-seeking qubit states. omega_t holds
/// the three principal frequencies sorted so that entry 2 is the axis
/// closest to z (the cooling axis); axes columns match.
struct TrapCharacterization {
    Eigen::Vector3d r0{0, 0, 0};      // minimum location, m
    double E_off = 0;                 // |E| at the minimum, V/m
    double depth = 0;                 // J, lowest escape barrier, state |1>
    Eigen::Vector3d omega_t{0, 0, 0};         // rad/s, state |1>
    Eigen::Vector3d omega_t_state2{0, 0, 0};  // rad/s, state |2>
    Eigen::Matrix3d axes = Eigen::Matrix3d::Identity();
    double vdw_shift = 0;    // relative change of the z-axis frequency
    double depth_vdw = 0;    // J, depth including the surface attraction
};

TrapCharacterization characterize_trap(const TrapGeometry& geom,
                                       const MoleculeSpec& mol,
                                       int N_max = 10,
                                       int subdivisions_per_segment = 8);

/// Image-dipole surface potential -C3/z^3 with C3 = mu^2/(32 pi eps0):
/// corrected trap frequency, barrier toward the surface, and the loss of
/// depth relative to the bare harmonic barrier 0.5 m omega_t^2 z0^2.
/// Throws PhysicsError when the correction destroys the trap.
struct VdwResult {
    double omega_t_prime = 0;    // rad/s
    double depth_reduction = 0;  // J
    double C3 = 0;               // J m^3
    double surface_barrier = 0;  // J, barrier toward z = 0 with vdW
};

VdwResult vdw_correction(double z0, double omega_t, const MoleculeSpec& mol);

/// Loading target Phi = w^-3 (U0/k_B)^-3/2 in cm^-3 K^-3/2 units.
double loading_phase_space_target(double w, double U0);

/// Reference Z-style two-electrode microtrap (characteristic spacing
/// 0.1 um x scale, electrode voltages 0.1 V x scale). All lengths and
/// voltages scale together so fields at scaled positions are unchanged.
TrapGeometry ez_reference_geometry(double scale = 1.0);

}  // namespace molqed
