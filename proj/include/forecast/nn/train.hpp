#pragma once

#include <functional>
#include <vector>

#include "forecast/nn/model.hpp"
#include "forecast/preprocess/onehot.hpp"
#include "forecast/preprocess/scaler.hpp"
#include "forecast/preprocess/split.hpp"

namespace forecast {

struct TrainReport {
  std::vector<double> train_loss;  // mean per-window loss seen during each epoch
  std::vector<double> val_loss;    // validation MSE after each epoch
  std::size_t best_epoch = 0;      // 1-based
  bool stopped_early = false;
  double wall_seconds = 0.0;       // informational; not part of serialized reports

  std::size_t epochs_completed() const noexcept { return val_loss.size(); }
};

struct TrainResult {
  ModelState best;
  TrainReport report;
};

using EpochCallback = std::function<void(std::size_t epoch, double train, double val)>;

// Minibatch SGD on MSE. Batches follow a per-epoch shuffle drawn from
// hp.seed; validation is evaluated in order after each epoch. Stops after
// max_epochs or, with early stopping on, after `patience` epochs without a
// validation improvement larger than 1e-9. Returns the best-validation
// snapshot.
TrainResult train(ModelState model, const WindowedDataset& train_ds,
                  const WindowedDataset& val_ds, const HyperParams& hp,
                  const EpochCallback& on_epoch = {});

// Mean over windows of the per-window MSE.
double evaluate_mse(const ModelState& model, const WindowedDataset& ds);

// Predictions for every window, [count x horizon], in scaled space.
Tensor predict_dataset(const ModelState& model, const WindowedDataset& ds);

// Forecast in original target units from exactly window_len raw rows
// (already cleaned): encode, scale, forward, inverse-scale the target.
// `feature_columns` is the model's expected numeric column order.
Tensor predict(const ModelState& model, const MinMaxScaler& scaler, const OneHotEncoder& encoder,
               const std::vector<std::string>& feature_columns,
               const TimeSeriesFrame& frame_tail);

}  // namespace forecast
