#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace molqed {

/// Where a reported number came from.
enum class Provenance {
    formula,             // closed-form expression, exact as quoted
    order_of_magnitude,  // tilde formula, prefactor 1
    numeric,             // diagonalization / root finding / electrostatics
    simulation,          // master-equation trajectory
};

std::string provenance_name(Provenance p);

/// One reported number with unit and origin; warnings ride along.
struct ReportEntry {
    std::string key;
    double value = 0;
    std::string unit;
    Provenance provenance = Provenance::numeric;
    std::vector<std::string> warnings;
};

struct ReportSection {
    std::string name;
    std::vector<ReportEntry> entries;

    ReportEntry& add(const std::string& key, double value,
                     const std::string& unit,
                     Provenance prov = Provenance::numeric);
};

/// Structured design report; rendering is deterministic (no timestamps,
/// fixed numeric formatting).
struct DesignReport {
    std::vector<ReportSection> sections;

    ReportSection& section(const std::string& name);
    void render_text(std::ostream& os) const;
    /// All entries flattened to "section.key" -> entry.
    std::vector<std::pair<std::string, const ReportEntry*>> flat() const;
};

/// Full-precision scientific formatting used in all emitted files.
std::string format_number(double v);

/// CSV with a unit row as the second header line.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> columns,
                       std::vector<std::string> units);
    void add_row(const std::vector<double>& values);
    void write(std::ostream& os) const;

  private:
    std::vector<std::string> columns_, units_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace molqed
