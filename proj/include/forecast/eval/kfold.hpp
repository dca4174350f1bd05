#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "forecast/eval/metrics.hpp"
#include "forecast/nn/train.hpp"

namespace forecast {

// Contiguous [begin, end) window-index blocks; block i starts at
// floor(i * count / k).
std::vector<std::pair<std::size_t, std::size_t>> fold_blocks(std::size_t count, std::size_t k);

struct FoldResult {
  std::size_t fold = 0;  // validation block index, 1..k-1
  std::size_t train_windows = 0;
  std::size_t val_windows = 0;
  MetricsReport metrics;
  std::size_t epochs = 0;
};

struct MetricSummary {
  double mae = 0.0;
  double rmse = 0.0;
  double mape_percent = 0.0;
  double r2 = 0.0;
};

struct KFoldResult {
  std::size_t k = 0;
  std::vector<FoldResult> folds;  // k - 1 evaluations
  MetricSummary mean;
  MetricSummary stddev;  // population standard deviation across folds
  std::string scheme = "expanding-window: fold i trains on blocks 0..i-1, validates on block i";
};

// Maps scaled model outputs back to original target units.
using TargetInverse = std::function<double(double)>;

// Expanding-window cross-validation. Each fold trains a fresh model for
// hp.max_epochs epochs (no early stopping, so the validation block never
// selects weights) and scores it in original units.
KFoldResult kfold_cv(const WindowedDataset& ds, std::size_t k, const HyperParams& hp,
                     const TargetInverse& to_original, const EpochCallback& on_epoch = {});

}  // namespace forecast
