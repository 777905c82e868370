#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "softod/experiment.hpp"

namespace softod {

enum class ReportFormat { Json, Csv };

// Throws InconsistentReport if any row's metrics cannot be recomputed from
// its confusion counts.
void check_consistency(const ExperimentReport& report);

// {dataset, config, rows:[...], per_object:[...]} with a fixed field order.
std::string to_json(const ExperimentReport& report);

// Header plus one line per grid row.
std::string to_csv(const ExperimentReport& report);

void emit_report(const ExperimentReport& report, ReportFormat format, std::ostream& out);
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& destination);

ExperimentReport report_from_json(std::string_view text);

}  // namespace softod
