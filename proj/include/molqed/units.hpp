#pragma once

#include <string>

namespace molqed::units {

enum class Unit {
    // frequency / energy family (canonical: rad/s)
    rad_per_s,
    hz,
    khz,
    mhz,
    ghz,
    joule,
    kelvin,
    // electric field (canonical: V/m)
    v_per_m,
    v_per_cm,
    kv_per_cm,
    // dipole moment (canonical: C m)
    coulomb_meter,
    debye,
    // length (canonical: m)
    meter,
    micrometer,
    nanometer,
    // time (canonical: s)
    second,
    millisecond,
    microsecond,
};

/// Convert `value` between compatible units. Frequency, angular frequency,
/// energy and temperature interconvert via hbar and k_B. Throws
/// molqed::Error on a dimension mismatch.
double convert(double value, Unit from, Unit to);

std::string unit_name(Unit u);

}  // namespace molqed::units
