#include "tensorforge/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace tensorforge {

std::string report_writer(const nlohmann::json& report, ReportFormat format) {
  if (format == ReportFormat::Json) return report.dump();
  // CSV expects {"header": [...], "rows": [[...], ...]} or degenerates to the
  // header-only form
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  if (report.contains("header"))
    for (const auto& h : report["header"]) header.push_back(h.get<std::string>());
  if (report.contains("rows"))
    for (const auto& r : report["rows"]) {
      std::vector<std::string> row;
      for (const auto& c : r)
        row.push_back(c.is_string() ? c.get<std::string>() : c.dump());
      rows.push_back(std::move(row));
    }
  return csv_table(header, rows);
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
  return os.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << std::endl;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace tensorforge
