#include "forecast/preprocess/split.hpp"

#include <cmath>

#include "forecast/error.hpp"

namespace forecast {

SplitSizes split_sizes(std::size_t rows, const SplitRatios& r) {
  if (!(r.train > 0 && r.val > 0 && r.test > 0) ||
      std::abs(r.train + r.val + r.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be positive and sum to 1");
  }
  const double n = static_cast<double>(rows);
  // The epsilon keeps products like 0.7 * 100 from flooring to 69.
  SplitSizes s;
  s.train = static_cast<std::size_t>(std::floor(r.train * n + 1e-9));
  s.val = static_cast<std::size_t>(std::floor(r.val * n + 1e-9));
  s.test = rows - s.train - s.val;
  return s;
}

FrameSplit chrono_split(const TimeSeriesFrame& frame, const SplitRatios& ratios) {
  if (frame.rows() < 3) {
    throw DataError("split: need at least 3 rows, got " + std::to_string(frame.rows()));
  }
  const auto s = split_sizes(frame.rows(), ratios);
  if (s.train == 0 || s.val == 0 || s.test == 0) {
    throw DataError("split: " + std::to_string(frame.rows()) +
                    " rows leave an empty segment (" + std::to_string(s.train) + "/" +
                    std::to_string(s.val) + "/" + std::to_string(s.test) + ")");
  }
  return {frame.slice(0, s.train), frame.slice(s.train, s.train + s.val),
          frame.slice(s.train + s.val, frame.rows())};
}

Tensor WindowedDataset::input(std::size_t i) const {
  const std::size_t w = inputs.dim(1), f = inputs.dim(2);
  const auto r = inputs.row(i);
  return Tensor({w, f}, std::vector<double>(r.begin(), r.end()));
}

Tensor WindowedDataset::target(std::size_t i) const {
  const auto r = targets.row(i);
  return Tensor::vector(std::vector<double>(r.begin(), r.end()));
}

WindowedDataset WindowedDataset::select(const std::vector<std::size_t>& indices) const {
  WindowedDataset out;
  out.window_len = window_len;
  out.horizon = horizon;
  const std::size_t f = inputs.dim(2);
  std::vector<double> in, tg;
  in.reserve(indices.size() * window_len * f);
  tg.reserve(indices.size() * horizon);
  for (auto i : indices) {
    const auto a = inputs.row(i);
    const auto b = targets.row(i);
    in.insert(in.end(), a.begin(), a.end());
    tg.insert(tg.end(), b.begin(), b.end());
    out.target_start.push_back(target_start[i]);
  }
  out.inputs = Tensor({indices.size(), window_len, f}, std::move(in));
  out.targets = Tensor({indices.size(), horizon}, std::move(tg));
  return out;
}

WindowedDataset make_windows(const TimeSeriesFrame& segment, std::size_t window_len,
                             std::size_t horizon) {
  if (window_len == 0 || horizon == 0) {
    throw ConfigError("window_len and horizon must be at least 1");
  }
  const std::size_t rows = segment.rows();
  const std::size_t features = segment.numeric.size();
  const auto& target = segment.target_column().values;
  WindowedDataset ds;
  ds.window_len = window_len;
  ds.horizon = horizon;
  const std::size_t count = rows >= window_len + horizon ? rows - window_len - horizon + 1 : 0;
  if (count == 0) {
    ds.warning = "segment of " + std::to_string(rows) + " rows is shorter than window " +
                 std::to_string(window_len) + " + horizon " + std::to_string(horizon) +
                 "; no windows produced";
  }
  ds.inputs = Tensor({count, window_len, features});
  ds.targets = Tensor({count, horizon});
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t t = 0; t < window_len; ++t) {
      for (std::size_t f = 0; f < features; ++f) {
        ds.inputs.at(i, t, f) = segment.numeric[f].values[i + t];
      }
    }
    for (std::size_t h = 0; h < horizon; ++h) {
      ds.targets.at(i, h) = target[i + window_len + h];
    }
    ds.target_start.push_back(segment.dates[i + window_len]);
  }
  return ds;
}

}  // namespace forecast
