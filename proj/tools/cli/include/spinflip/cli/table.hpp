#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace spinflip::cli {

/// Named numeric columns plus '#' metadata. Summary entries keep insertion order.
struct OutputTable {
  std::string command;
  nlohmann::json config;  ///< echoed verbatim in the header
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::pair<std::string, std::string>> notes;

  /// Throws std::logic_error if the row width differs from the column count.
  void add_row(std::vector<double> row);
};

/// 17 significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double v);

void write_csv(std::ostream& os, const OutputTable& t, const std::string& version);
void write_json(std::ostream& os, const OutputTable& t, const std::string& version);

}  // namespace spinflip::cli
