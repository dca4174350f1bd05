#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "forecast/preprocess/frame.hpp"

namespace forecast {

struct CleaningOptions {
  double missing_row_threshold = 0.10;  // drop rows with a larger missing fraction
  double sigma_k = 3.0;
};

struct FilledCell {
  std::string column;
  std::size_t row;  // index into the cleaned frame
};

struct OutlierCorrection {
  std::string column;
  std::size_t row;  // index into the cleaned frame
  double original;
  double replacement;
  int pass;  // 1-based sigma-rule pass that flagged it
};

struct CleaningReport {
  std::vector<Date> dropped_rows;
  std::vector<FilledCell> filled_cells;
  std::vector<OutlierCorrection> outliers;
  int outlier_passes = 0;
};

// Population mean/stddev of a column; used for the sigma rule.
struct ColumnMoments {
  double mean = 0.0;
  double stddev = 0.0;
};
ColumnMoments column_moments(std::span<const double> values);

// One application of the k-sigma rule. A column whose stddev is zero
// (relative to its magnitude) flags nothing.
std::vector<bool> flag_outliers(std::span<const double> values, double sigma_k);

// Drops sparse rows, fills remaining gaps forward (leading gaps backward),
// then replaces sigma-rule outliers with the nearest preceding inlier until
// no outliers remain, which makes clean(clean(f)) == clean(f).
std::pair<TimeSeriesFrame, CleaningReport> clean(const TimeSeriesFrame& frame,
                                                 const CleaningOptions& options = {});

}  // namespace forecast
