#pragma once

#include "efa/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace efa {

struct CurvePoint {
  double x = 0.0;
  double fidelity = 0.0;
  double ebr = 0.0;
  double ebr_normalized = 0.0;  // 0 when the link can never be entangled
};

/// samples evenly spaced points on [x_lo, x_hi], both ends included.
std::vector<CurvePoint> curve_points(double y1, double y2, double x_lo, double x_hi,
                                     std::size_t samples);

/// CSV with header x,fidelity,ebr,ebr_normalized in %.17e notation.
void write_curves_csv(std::ostream& out, const std::vector<CurvePoint>& points);

std::string report_text(const ScenarioResult& result);

/// One row per (K, link) with the reserve as link "reserve".
void write_report_csv(std::ostream& out, const ScenarioResult& result);

/// Best fitness per generation of every run.
void write_trace_csv(std::ostream& out, const KResult& k_result);

enum class ReportFormat { text, csv, both };

ReportFormat parse_report_format(const std::string& name);

/// Writes <name>_seed<seed>_report.txt, <name>_seed<seed>.csv and one
/// <name>_K<K>_seed<seed>_trace.csv per channel count. Returns the paths.
std::vector<std::filesystem::path> emit_report(const ScenarioResult& result,
                                               const std::filesystem::path& dir,
                                               ReportFormat format);

}  // namespace efa
