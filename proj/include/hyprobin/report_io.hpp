#pragma once

#include "hyprobin/verify.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hyprobin::io {

inline constexpr std::string_view kReportSchema = "hyprobin-report/1";

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view text);
std::vector<std::string> split_csv_line(std::string_view line);

void write_report_csv(std::ostream& out, std::span<const verify::DeficitReport> reports,
                      std::uint64_t seed);
std::vector<verify::DeficitReport> read_report_csv(std::istream& in);

void write_report_json(std::ostream& out, std::span<const verify::DeficitReport> reports,
                       std::uint64_t seed);

/// Plot-ready (t, P(Omega_t), P(Omega*_t), margin) table.
void write_comparison_csv(std::ostream& out, const verify::ComparisonTable& table);

/// Plot-ready (t, P, -dP/dt, af_rhs, margin) table.
void write_lemma_csv(std::ostream& out, const verify::LemmaTable& table);

} // namespace hyprobin::io
