#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "forecast/numeric/tensor.hpp"
#include "forecast/preprocess/frame.hpp"

namespace forecast {

struct SplitRatios {
  double train = 0.70;
  double val = 0.15;
  double test = 0.15;
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};

// floor() for train and validation, remainder to test.
SplitSizes split_sizes(std::size_t rows, const SplitRatios& ratios);

struct FrameSplit {
  TimeSeriesFrame train;
  TimeSeriesFrame val;
  TimeSeriesFrame test;
};

// Contiguous chronological segments, never shuffled.
FrameSplit chrono_split(const TimeSeriesFrame& frame, const SplitRatios& ratios = {});

struct WindowedDataset {
  Tensor inputs;   // count x window_len x features
  Tensor targets;  // count x horizon
  std::size_t window_len = 30;
  std::size_t horizon = 7;
  std::vector<Date> target_start;  // date of the first target step per window
  std::optional<std::string> warning;

  std::size_t count() const noexcept { return targets.empty() ? 0 : targets.dim(0); }
  std::size_t features() const { return inputs.dim(2); }
  Tensor input(std::size_t i) const;   // window_len x features
  Tensor target(std::size_t i) const;  // horizon

  // Subset by window index, preserving order.
  WindowedDataset select(const std::vector<std::size_t>& indices) const;
};

// Window i reads rows [i, i + window_len) of every numeric column (in frame
// order) and targets rows [i + window_len, i + window_len + horizon) of the
// target column. Too-short segments produce an empty dataset plus a warning.
WindowedDataset make_windows(const TimeSeriesFrame& segment, std::size_t window_len = 30,
                             std::size_t horizon = 7);

}  // namespace forecast
