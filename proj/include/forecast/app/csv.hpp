#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "forecast/preprocess/frame.hpp"

namespace forecast {

struct CsvSchema {
  std::string target = "target";
  std::vector<std::string> categorical;  // every other non-date column is numeric
};

struct CsvReadResult {
  TimeSeriesFrame frame;
  std::vector<std::string> warnings;
};

// Header row required, with a `date` column in YYYY-MM-DD form. `NA` or an
// empty cell is missing. Rows come back sorted by date.
CsvReadResult parse_csv(std::string_view text, const CsvSchema& schema,
                        const std::string& source = "<input>");
CsvReadResult read_csv(const std::filesystem::path& path, const CsvSchema& schema);

// Canonical text: numeric cells with 17 significant digits, missing as NA.
std::string format_csv(const TimeSeriesFrame& frame);

}  // namespace forecast
