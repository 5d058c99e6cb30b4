#include "molqed/molecule.hpp"

#include <cmath>
#include <sstream>

#include "molqed/constants.hpp"
#include "molqed/error.hpp"

namespace molqed {

using namespace constants;

namespace {

bool is_half_integer(double x) {
    return x >= 0 && std::abs(2 * x - std::round(2 * x)) < 1e-9;
}

MoleculeSpec cabr() {
    MoleculeSpec m;
    m.name = "CaBr";
    m.mass = 119.0 * amu;  // 40Ca 79Br
    // Dipole fixed by the Stark coupling rate 2pi x 2.25 MHz per V/cm
    // (equivalently 4.47 D; the often-quoted 4.36 D rounds the same datum).
    m.mu = hbar * two_pi * 2.25e6 / 1e2;
    m.B = two_pi * 2.83e9;
    m.gamma_sr = two_pi * 90.7e6;
    m.b_hf = two_pi * 95.3e6;
    m.c_hf = two_pi * 77.6e6;
    m.eqQ = two_pi * 20.0e6;
    m.I_nuc = 1.5;
    m.S_elec = 0.5;
    return m;
}

}  // namespace

void MoleculeSpec::validate() const {
    if (!(mass > 0)) throw Error("molecule '" + name + "': mass must be > 0");
    if (!(mu > 0)) throw Error("molecule '" + name + "': mu must be > 0");
    if (!(B > 0)) throw Error("molecule '" + name + "': B must be > 0");
    if (!is_half_integer(I_nuc))
        throw Error("molecule '" + name + "': I must be a half-integer >= 0");
    if (!is_half_integer(S_elec))
        throw Error("molecule '" + name + "': S must be a half-integer >= 0");
}

MoleculeRegistry MoleculeRegistry::builtin() {
    MoleculeRegistry reg;
    reg.add(cabr());
    return reg;
}

void MoleculeRegistry::add(MoleculeSpec spec) {
    spec.validate();
    for (auto& e : entries_) {
        if (e.name == spec.name) {
            e = std::move(spec);  // config overrides shadow built-ins
            return;
        }
    }
    entries_.push_back(std::move(spec));
}

const MoleculeSpec& MoleculeRegistry::lookup(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.name == name) return e;
    std::ostringstream msg;
    msg << "unknown molecule '" << name << "'; registered species:";
    for (const auto& e : entries_) msg << " " << e.name;
    throw Error(msg.str());
}

std::vector<std::string> MoleculeRegistry::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.name);
    return out;
}

const MoleculeSpec& lookup_molecule(const std::string& name) {
    static const MoleculeRegistry reg = MoleculeRegistry::builtin();
    return reg.lookup(name);
}

}  // namespace molqed
