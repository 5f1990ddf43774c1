#pragma once

// CSV readers and writers for spectra and sweep tables.  Numbers are written
// in shortest round-trip form, so parse(write(x)) == x bit for bit.

#include <hyperdirac/degeneration.hpp>
#include <hyperdirac/error.hpp>
#include <hyperdirac/lattice_spectra.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace hyperdirac::io {

inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    require(res.ec == std::errc{} && res.ptr == s.data() + s.size() && std::isfinite(v), ErrorCode::MalformedInput,
            "not a finite number: '" + std::string(s) + "'");
    return v;
}

inline int parse_integer(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    require(res.ec == std::errc{} && res.ptr == s.data() + s.size(), ErrorCode::MalformedInput,
            "not an integer: '" + std::string(s) + "'");
    return v;
}

inline void write_entries_csv(std::ostream& out, const EigenvalueMultiset& spec, std::string_view value_column) {
    out << value_column << ",multiplicity\n";
    for (const auto& e : spec.entries()) out << format_number(e.value) << ',' << e.multiplicity << '\n';
}

inline void write_spectrum_csv(std::ostream& out, const EigenvalueMultiset& spec) {
    write_entries_csv(out, spec, "value");
}

/// Reads `<value_column>,multiplicity` rows.  The cutoff defaults to the
/// largest |value| listed.
inline EigenvalueMultiset read_entries_csv(std::istream& in, std::string_view value_column,
                                           double cutoff = std::nan("")) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::MalformedInput, "empty spectrum file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    require(line == std::string(value_column) + ",multiplicity", ErrorCode::MalformedInput,
            "expected header '" + std::string(value_column) + ",multiplicity'");
    std::vector<SpectralEntry> entries;
    double largest = 0.0;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        require(comma != std::string::npos && line.find(',', comma + 1) == std::string::npos,
                ErrorCode::MalformedInput, "line " + std::to_string(lineno) + ": expected two columns");
        const std::string_view view(line);
        const double v = parse_number(view.substr(0, comma));
        entries.push_back({v, parse_integer(view.substr(comma + 1))});
        largest = std::max(largest, std::abs(v));
    }
    return EigenvalueMultiset(std::move(entries), std::isnan(cutoff) ? largest : cutoff);
}

inline EigenvalueMultiset read_spectrum_csv(std::istream& in, double cutoff = std::nan("")) {
    return read_entries_csv(in, "value", cutoff);
}

/// Cross-section spectrum `mu,multiplicity`; must be symmetric.
inline EigenvalueMultiset read_cross_section_csv(std::istream& in, double cutoff = std::nan("")) {
    auto spec = read_entries_csv(in, "mu", cutoff);
    require(spec.is_symmetric(), ErrorCode::MalformedInput, "cross-section spectrum is not symmetric");
    return spec;
}

inline void write_cross_section_csv(std::ostream& out, const EigenvalueMultiset& spec) {
    write_entries_csv(out, spec, "mu");
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << "ell,R,count_dirichlet,count_neumann\n";
    for (const auto& p : points)
        out << format_number(p.ell) << ',' << format_number(p.R) << ',' << p.count_dirichlet << ','
            << p.count_neumann << '\n';
}

} // namespace hyperdirac::io
