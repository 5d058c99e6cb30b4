#pragma once

#include <string>
#include <vector>

namespace molqed {

/// Physical constants of one diatomic species. All spectroscopic
/// constants are angular frequencies (rad/s); mass in kg, dipole in C m.
/// Immutable after construction; safe to share across threads.
struct MoleculeSpec {
    std::string name;
    double mass = 0;       // kg
    double mu = 0;         // body-fixed dipole, C m
    double B = 0;          // rotational constant, rad/s
    double gamma_sr = 0;   // spin-rotation constant, rad/s
    double b_hf = 0;       // Fermi-contact-like hyperfine b, rad/s
    double c_hf = 0;       // dipolar hyperfine c (molecule-frame zz), rad/s
    double eqQ = 0;        // nuclear electric quadrupole coupling, rad/s
    double I_nuc = 0;      // nuclear spin quantum number
    double S_elec = 0;     // electron spin quantum number

    /// Throws molqed::Error if mass/mu/B are not positive or the spins
    /// are not half-integers >= 0.
    void validate() const;
};

/// Registry of known species. Ships with CaBr; user configuration may
/// register more. Lookups on a fully built registry are const and
/// thread-safe.
class MoleculeRegistry {
  public:
    /// Registry pre-populated with the built-in species.
    static MoleculeRegistry builtin();

    void add(MoleculeSpec spec);
    const MoleculeSpec& lookup(const std::string& name) const;
    std::vector<std::string> names() const;

  private:
    std::vector<MoleculeSpec> entries_;
};

/// Convenience lookup against the built-in registry.
const MoleculeSpec& lookup_molecule(const std::string& name);

}  // namespace molqed
