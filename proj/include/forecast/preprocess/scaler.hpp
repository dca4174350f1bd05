#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "forecast/preprocess/frame.hpp"

namespace forecast {

struct ScaleRange {
  double lo = 0.0;
  double hi = 1.0;
};

struct ScaledColumn {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  bool degenerate() const noexcept { return max == min; }
};

// Per-column affine map of [min, max] onto the configured range. Fit it on
// the training segment only; later segments may land outside the range.
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  MinMaxScaler(std::vector<ScaledColumn> columns, ScaleRange range);

  // Fits every numeric column of `frame`. NaN cells are ignored.
  static MinMaxScaler fit(const TimeSeriesFrame& frame, ScaleRange range = {});

  const std::vector<ScaledColumn>& columns() const noexcept { return columns_; }
  ScaleRange range() const noexcept { return range_; }
  const ScaledColumn& column(std::string_view name) const;

  double transform_value(const ScaledColumn& c, double x) const;
  double inverse_value(const ScaledColumn& c, double y) const;

  // Every numeric column of `frame` must have been fitted.
  TimeSeriesFrame transform(const TimeSeriesFrame& frame) const;
  TimeSeriesFrame inverse(const TimeSeriesFrame& frame) const;

  friend bool operator==(const MinMaxScaler& a, const MinMaxScaler& b);

 private:
  std::vector<ScaledColumn> columns_;
  ScaleRange range_;
};

}  // namespace forecast
