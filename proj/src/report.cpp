#include "molqed/report.hpp"

#include <cstdio>

#include "molqed/error.hpp"

namespace molqed {

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::formula: return "formula";
        case Provenance::order_of_magnitude: return "order-of-magnitude";
        case Provenance::numeric: return "numeric";
        case Provenance::simulation: return "simulation";
    }
    return "?";
}

ReportEntry& ReportSection::add(const std::string& key, double value,
                                const std::string& unit, Provenance prov) {
    entries.push_back({key, value, unit, prov, {}});
    return entries.back();
}

ReportSection& DesignReport::section(const std::string& name) {
    for (auto& s : sections)
        if (s.name == name) return s;
    sections.push_back({name, {}});
    return sections.back();
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

void DesignReport::render_text(std::ostream& os) const {
    for (const auto& sec : sections) {
        os << "[" << sec.name << "]\n";
        for (const auto& e : sec.entries) {
            os << "  " << e.key << " = " << format_number(e.value);
            if (!e.unit.empty()) os << " " << e.unit;
            os << "  [" << provenance_name(e.provenance) << "]\n";
            for (const auto& w : e.warnings)
                os << "  ! warning: " << w << "\n";
        }
        os << "\n";
    }
}

std::vector<std::pair<std::string, const ReportEntry*>> DesignReport::flat()
    const {
    std::vector<std::pair<std::string, const ReportEntry*>> out;
    for (const auto& sec : sections)
        for (const auto& e : sec.entries)
            out.emplace_back(sec.name + "." + e.key, &e);
    return out;
}

CsvWriter::CsvWriter(std::vector<std::string> columns,
                     std::vector<std::string> units)
    : columns_(std::move(columns)), units_(std::move(units)) {
    if (columns_.size() != units_.size())
        throw Error("CsvWriter: column/unit count mismatch");
}

void CsvWriter::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
        throw Error("CsvWriter: row width mismatch");
    rows_.push_back(values);
}

void CsvWriter::write(std::ostream& os) const {
    for (size_t i = 0; i < columns_.size(); ++i)
        os << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
    for (size_t i = 0; i < units_.size(); ++i)
        os << units_[i] << (i + 1 < units_.size() ? "," : "\n");
    for (const auto& row : rows_) {
        for (size_t i = 0; i < row.size(); ++i)
            os << format_number(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
}

}  // namespace molqed
