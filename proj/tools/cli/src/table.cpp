#include "spinflip/cli/table.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "spinflip/cli/config.hpp"

namespace spinflip::cli {

void OutputTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("row has " + std::to_string(row.size()) + " values for " +
                           std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // no negative zero
  return fmt::format("{:.17g}", v);
}

void write_csv(std::ostream& os, const OutputTable& t, const std::string& version) {
  const std::string echo = t.config.dump();
  os << "# spinflip " << version << '\n';
  os << "# command: " << t.command << '\n';
  os << "# config_sha1: " << git_blob_sha1(echo) << '\n';
  os << "# config: " << echo << '\n';
  for (const auto& [key, value] : t.summary) {
    os << "# summary: " << key << '=' << format_number(value) << '\n';
  }
  for (const auto& [key, value] : t.notes) os << "# " << key << ": " << value << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    os << (i ? "," : "") << t.columns[i];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const OutputTable& t, const std::string& version) {
  using nlohmann::json;
  auto number = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json doc;
  doc["version"] = version;
  doc["command"] = t.command;
  doc["config"] = t.config;
  doc["config_sha1"] = git_blob_sha1(t.config.dump());
  doc["columns"] = t.columns;
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = json::array();
    for (double v : r) row.push_back(number(v));
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  json summary = json::object();
  for (const auto& [key, value] : t.summary) summary[key] = number(value);
  doc["summary"] = std::move(summary);
  json notes = json::array();
  for (const auto& [key, value] : t.notes) notes.push_back({{"key", key}, {"value", value}});
  doc["notes"] = std::move(notes);
  os << doc.dump(2) << '\n';
}

}  // namespace spinflip::cli
