#include "forecast/preprocess/clean.hpp"

#include <cmath>
#include <algorithm>
#include <optional>

#include "forecast/error.hpp"

namespace forecast {
namespace {

template <typename T, typename IsMissing>
std::vector<std::size_t> fill_gaps(std::vector<T>& values, IsMissing missing,
                                   const std::string& column) {
  std::vector<std::size_t> filled;
  std::optional<std::size_t> first_present;
  for (std::size_t r = 0; r < values.size(); ++r) {
    if (!missing(values[r])) {
      first_present = r;
      break;
    }
  }
  if (!first_present) {
    throw DataError("column '" + column + "' has no values after dropping sparse rows");
  }
  for (std::size_t r = 0; r < *first_present; ++r) {
    values[r] = values[*first_present];
    filled.push_back(r);
  }
  for (std::size_t r = *first_present + 1; r < values.size(); ++r) {
    if (missing(values[r])) {
      values[r] = values[r - 1];
      filled.push_back(r);
    }
  }
  return filled;
}

}  // namespace

ColumnMoments column_moments(std::span<const double> values) {
  ColumnMoments m;
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.stddev = std::sqrt(ss / static_cast<double>(values.size()));
  return m;
}

std::vector<bool> flag_outliers(std::span<const double> values, double sigma_k) {
  std::vector<bool> flags(values.size(), false);
  const auto m = column_moments(values);
  if (m.stddev <= 1e-12 * std::max(1.0, std::abs(m.mean))) return flags;
  const double limit = sigma_k * m.stddev;
  for (std::size_t i = 0; i < values.size(); ++i) {
    flags[i] = std::abs(values[i] - m.mean) > limit;
  }
  return flags;
}

std::pair<TimeSeriesFrame, CleaningReport> clean(const TimeSeriesFrame& frame,
                                                 const CleaningOptions& options) {
  if (frame.rows() == 0) throw DataError("clean: frame has no rows");
  frame.validate();

  CleaningReport report;
  const std::size_t cells = frame.cell_columns();
  std::vector<bool> keep(frame.rows(), true);
  if (cells > 0) {
    for (std::size_t r = 0; r < frame.rows(); ++r) {
      std::size_t missing = 0;
      for (const auto& c : frame.numeric) missing += std::isnan(c.values[r]) ? 1 : 0;
      for (const auto& c : frame.categorical) missing += c.values[r] ? 0 : 1;
      const double frac = static_cast<double>(missing) / static_cast<double>(cells);
      if (frac > options.missing_row_threshold) {
        keep[r] = false;
        report.dropped_rows.push_back(frame.dates[r]);
      }
    }
  }
  TimeSeriesFrame out = frame.keep_rows(keep);
  if (out.rows() == 0) {
    throw DataError("clean: every row exceeded the missing-value threshold");
  }

  for (auto& c : out.numeric) {
    for (auto r : fill_gaps(c.values, [](double v) { return std::isnan(v); }, c.name)) {
      report.filled_cells.push_back({c.name, r});
    }
  }
  for (auto& c : out.categorical) {
    for (auto r : fill_gaps(
             c.values, [](const std::optional<std::string>& v) { return !v; },
             c.name)) {
      report.filled_cells.push_back({c.name, r});
    }
  }

  // Each pass removes every occurrence of the flagged values and introduces
  // none, so the number of distinct values strictly drops: this terminates.
  for (auto& c : out.numeric) {
    for (int pass = 1;; ++pass) {
      const auto flags = flag_outliers(c.values, options.sigma_k);
      bool any = false;
      const std::vector<double> before = c.values;
      for (std::size_t r = 0; r < before.size(); ++r) {
        if (!flags[r]) continue;
        std::optional<std::size_t> source;
        for (std::size_t p = r; p-- > 0;) {
          if (!flags[p]) {
            source = p;
            break;
          }
        }
        if (!source) {
          for (std::size_t n = r + 1; n < before.size(); ++n) {
            if (!flags[n]) {
              source = n;
              break;
            }
          }
        }
        if (!source) continue;
        c.values[r] = before[*source];
        report.outliers.push_back({c.name, r, before[r], before[*source], pass});
        any = true;
      }
      if (!any) break;
      report.outlier_passes = std::max(report.outlier_passes, pass);
    }
  }
  return {std::move(out), std::move(report)};
}

}  // namespace forecast
