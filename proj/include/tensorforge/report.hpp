#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace tensorforge {

enum class ReportFormat { Json, Csv };

// Deterministic serialization: JSON keys sorted (nlohmann::json default),
// rationals rendered as "p/q" strings by the callers, CSV as header + rows.
std::string report_writer(const nlohmann::json& report, ReportFormat format);

// CSV body for tabular reports.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

// Writes to the path, or stdout when the path is empty.
void write_output(const std::string& text, const std::string& path);

}  // namespace tensorforge
