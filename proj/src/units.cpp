#include "molqed/units.hpp"

#include "molqed/constants.hpp"
#include "molqed/error.hpp"

namespace molqed::units {

namespace {

enum class Dim { frequency, field, dipole, length, time };

struct UnitInfo {
    Dim dim;
    double to_canonical;  // multiply to get the canonical unit of `dim`
    const char* name;
};

UnitInfo info(Unit u) {
    using namespace molqed::constants;
    switch (u) {
        case Unit::rad_per_s:     return {Dim::frequency, 1.0, "rad/s"};
        case Unit::hz:            return {Dim::frequency, two_pi, "Hz"};
        case Unit::khz:           return {Dim::frequency, two_pi * 1e3, "kHz"};
        case Unit::mhz:           return {Dim::frequency, two_pi * 1e6, "MHz"};
        case Unit::ghz:           return {Dim::frequency, two_pi * 1e9, "GHz"};
        case Unit::joule:         return {Dim::frequency, 1.0 / hbar, "J"};
        case Unit::kelvin:        return {Dim::frequency, k_B / hbar, "K"};
        case Unit::v_per_m:       return {Dim::field, 1.0, "V/m"};
        case Unit::v_per_cm:      return {Dim::field, 1e2, "V/cm"};
        case Unit::kv_per_cm:     return {Dim::field, 1e5, "kV/cm"};
        case Unit::coulomb_meter: return {Dim::dipole, 1.0, "C m"};
        case Unit::debye:         return {Dim::dipole, constants::debye, "D"};
        case Unit::meter:         return {Dim::length, 1.0, "m"};
        case Unit::micrometer:    return {Dim::length, 1e-6, "um"};
        case Unit::nanometer:     return {Dim::length, 1e-9, "nm"};
        case Unit::second:        return {Dim::time, 1.0, "s"};
        case Unit::millisecond:   return {Dim::time, 1e-3, "ms"};
        case Unit::microsecond:   return {Dim::time, 1e-6, "us"};
    }
    throw Error("unknown unit tag");
}

}  // namespace

double convert(double value, Unit from, Unit to) {
    const UnitInfo a = info(from);
    const UnitInfo b = info(to);
    if (a.dim != b.dim)
        throw Error(std::string("incompatible dimensions: ") + a.name +
                    " -> " + b.name);
    return value * (a.to_canonical / b.to_canonical);
}

std::string unit_name(Unit u) { return info(u).name; }

}  // namespace molqed::units
