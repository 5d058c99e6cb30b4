#pragma once

// SI physical constants (CODATA 2018). All frequencies elsewhere in the
// library are angular (rad/s); conversion to ordinary frequency happens
// only in the reporting layer.

namespace molqed::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double h_planck = 6.62607015e-34;        // J s
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double k_B = 1.380649e-23;               // J/K
inline constexpr double epsilon_0 = 8.8541878128e-12;     // F/m
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double debye = 3.33564095198e-30;        // C m
inline constexpr double amu = 1.66053906660e-27;          // kg

/// Bundle of the constants shared across all modules.
struct PhysicalConstants {
    double hbar;
    double k_B;
    double epsilon_0;
    double elementary_charge;
    double debye;
    double amu;
};

inline constexpr PhysicalConstants codata{hbar, k_B, epsilon_0,
                                          elementary_charge, debye, amu};

}  // namespace molqed::constants
