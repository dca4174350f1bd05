#include "forecast/preprocess/scaler.hpp"

#include <cmath>
#include <limits>

#include "forecast/error.hpp"

namespace forecast {

MinMaxScaler::MinMaxScaler(std::vector<ScaledColumn> columns, ScaleRange range)
    : columns_(std::move(columns)), range_(range) {
  if (!(range_.lo < range_.hi)) throw ConfigError("scaler range must have lo < hi");
  for (const auto& c : columns_) {
    if (!(c.min <= c.max)) {
      throw ConfigError("scaler column '" + c.name + "' has min > max");
    }
  }
}

MinMaxScaler MinMaxScaler::fit(const TimeSeriesFrame& frame, ScaleRange range) {
  std::vector<ScaledColumn> cols;
  for (const auto& c : frame.numeric) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : c.values) {
      if (std::isnan(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!(lo <= hi)) throw DataError("scaler: column '" + c.name + "' has no values");
    cols.push_back({c.name, lo, hi});
  }
  return MinMaxScaler(std::move(cols), range);
}

const ScaledColumn& MinMaxScaler::column(std::string_view name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return c;
  }
  throw SchemaError("scaler has no column '" + std::string(name) + "'");
}

double MinMaxScaler::transform_value(const ScaledColumn& c, double x) const {
  if (c.degenerate()) return range_.lo;
  return range_.lo + (x - c.min) * (range_.hi - range_.lo) / (c.max - c.min);
}

double MinMaxScaler::inverse_value(const ScaledColumn& c, double y) const {
  if (c.degenerate()) return c.min;
  return c.min + (y - range_.lo) * (c.max - c.min) / (range_.hi - range_.lo);
}

TimeSeriesFrame MinMaxScaler::transform(const TimeSeriesFrame& frame) const {
  TimeSeriesFrame out = frame;
  for (auto& col : out.numeric) {
    const auto& c = column(col.name);
    for (auto& v : col.values) v = transform_value(c, v);
  }
  return out;
}

TimeSeriesFrame MinMaxScaler::inverse(const TimeSeriesFrame& frame) const {
  TimeSeriesFrame out = frame;
  for (auto& col : out.numeric) {
    const auto& c = column(col.name);
    for (auto& v : col.values) v = inverse_value(c, v);
  }
  return out;
}

bool operator==(const MinMaxScaler& a, const MinMaxScaler& b) {
  if (a.range_.lo != b.range_.lo || a.range_.hi != b.range_.hi ||
      a.columns_.size() != b.columns_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.columns_.size(); ++i) {
    const auto& x = a.columns_[i];
    const auto& y = b.columns_[i];
    if (x.name != y.name || x.min != y.min || x.max != y.max) return false;
  }
  return true;
}

}  // namespace forecast
