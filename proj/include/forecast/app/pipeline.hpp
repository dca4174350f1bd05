#pragma once

#include <string>
#include <vector>

#include "forecast/app/checkpoint.hpp"
#include "forecast/app/config.hpp"
#include "forecast/app/report.hpp"
#include "forecast/preprocess/clean.hpp"
#include "forecast/preprocess/onehot.hpp"
#include "forecast/preprocess/scaler.hpp"
#include "forecast/preprocess/split.hpp"

namespace forecast {

struct PreparedData {
  TimeSeriesFrame cleaned;  // original units, categorical columns intact
  CleaningReport cleaning;
  SplitSizes sizes;
  OneHotEncoder encoder;
  MinMaxScaler scaler;
  std::vector<std::string> feature_columns;
  WindowedDataset train, val, test;
  std::vector<std::string> warnings;

  double to_original(double scaled_target) const;
};

// clean (whole frame) -> chronological split -> one-hot and min-max fitted
// on the training segment -> windows per segment.
PreparedData prepare_data(const TimeSeriesFrame& raw, const RunConfig& config,
                          const HyperParams& hp);

// Same steps, reusing the encoder and scaler fitted at training time. The
// data must yield exactly the checkpoint's feature columns.
PreparedData prepare_data(const TimeSeriesFrame& raw, const Checkpoint& ck);

// Freshly initialised model; weights come from the "init" child of hp.seed.
ModelState fresh_model(const HyperParams& hp, std::size_t feature_dim);

// Scaled predictions for every window of `ds`, converted to original units.
struct OriginalUnits {
  Tensor actual;
  Tensor predicted;
};
OriginalUnits predict_original(const ModelState& model, const WindowedDataset& ds,
                               const PreparedData& data);

std::vector<PredictionRow> prediction_rows(const WindowedDataset& ds, const OriginalUnits& o);

}  // namespace forecast
