#pragma once

// Artifact writers: CSV, JSON reports (schema 1) and a dependency-free SVG
// line plot with fringe annotations.

#include <string>

#include "ghost/config.hpp"

namespace ghost {

// header z2,intensity,incoherent; 12 significant digits
void write_pattern_csv(const std::string& path, const PatternResult& p);

json pattern_to_json(const PatternResult& p, const std::string& cfg_hash);
json report_to_json(const DualityReport& rep, const std::string& cfg_hash);
json comparison_to_json(const oracle::PatternComparison& cmp,
                        const oracle::OracleDiagnostics& diag,
                        const std::string& cfg_hash);

void write_text(const std::string& path, const std::string& content);

// intensity (solid) and incoherent (dashed) vs z2, local maxima annotated
std::string pattern_svg(const PatternResult& p);

std::string format_double(double v);  // %.12g, used by the CSV writers

}  // namespace ghost
