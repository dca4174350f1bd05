#include "forecast/app/pipeline.hpp"

#include "forecast/error.hpp"
#include "forecast/nn/train.hpp"

namespace forecast {
namespace {

struct Segments {
  TimeSeriesFrame train, val, test;
};

void window_all(PreparedData& d, const Segments& enc, const HyperParams& hp) {
  d.train = make_windows(d.scaler.transform(enc.train), hp.window_len, hp.horizon);
  d.val = make_windows(d.scaler.transform(enc.val), hp.window_len, hp.horizon);
  d.test = make_windows(d.scaler.transform(enc.test), hp.window_len, hp.horizon);
  for (const auto* ds : {&d.train, &d.val, &d.test}) {
    if (ds->warning) d.warnings.push_back(*ds->warning);
  }
}

std::vector<std::string> numeric_names(const TimeSeriesFrame& f) {
  std::vector<std::string> names;
  for (const auto& c : f.numeric) names.push_back(c.name);
  return names;
}

void clean_and_split(PreparedData& d, const TimeSeriesFrame& raw, const RunConfig& config,
                     FrameSplit& split) {
  auto [cleaned, report] = clean(raw, config.cleaning);
  d.cleaned = std::move(cleaned);
  d.cleaning = std::move(report);
  d.sizes = split_sizes(d.cleaned.rows(), config.split);
  split = chrono_split(d.cleaned, config.split);
}

}  // namespace

double PreparedData::to_original(double scaled_target) const {
  return scaler.inverse_value(scaler.column(cleaned.target), scaled_target);
}

PreparedData prepare_data(const TimeSeriesFrame& raw, const RunConfig& config,
                          const HyperParams& hp) {
  PreparedData d;
  FrameSplit split;
  clean_and_split(d, raw, config, split);

  Segments enc;
  auto [encoder, train_enc] = OneHotEncoder::fit_transform(split.train, config.categorical);
  d.encoder = std::move(encoder);
  enc.train = std::move(train_enc);
  for (auto [segment, out, name] : {std::tuple{&split.val, &enc.val, "validation"},
                                    std::tuple{&split.test, &enc.test, "test"}}) {
    auto r = d.encoder.transform(*segment);
    if (r.unknown > 0) {
      d.warnings.push_back(std::to_string(r.unknown) + " " + name +
                           " cells hold categories unseen in training; encoded as all zeros");
    }
    *out = std::move(r.frame);
  }
  d.scaler = MinMaxScaler::fit(enc.train, config.scaler_range);
  d.feature_columns = numeric_names(enc.train);
  window_all(d, enc, hp);
  return d;
}

PreparedData prepare_data(const TimeSeriesFrame& raw, const Checkpoint& ck) {
  PreparedData d;
  FrameSplit split;
  clean_and_split(d, raw, ck.config, split);
  d.encoder = ck.encoder;
  d.scaler = ck.scaler;
  d.feature_columns = ck.feature_columns;

  Segments enc;
  for (auto [segment, out] : {std::pair{&split.train, &enc.train}, std::pair{&split.val, &enc.val},
                              std::pair{&split.test, &enc.test}}) {
    auto r = d.encoder.transform(*segment);
    if (r.unknown > 0) {
      d.warnings.push_back(std::to_string(r.unknown) +
                           " cells hold categories unseen in training; encoded as all zeros");
    }
    *out = std::move(r.frame);
  }
  const auto names = numeric_names(enc.train);
  if (names != ck.feature_columns) {
    std::string have, want;
    for (const auto& n : names) have += (have.empty() ? "" : ",") + n;
    for (const auto& n : ck.feature_columns) want += (want.empty() ? "" : ",") + n;
    throw SchemaError("data columns [" + have + "] do not match the checkpoint's [" + want + "]");
  }
  window_all(d, enc, ck.model.hp);
  return d;
}

ModelState fresh_model(const HyperParams& hp, std::size_t feature_dim) {
  return build_model(hp, feature_dim, RngStream(hp.seed).child("init"));
}

OriginalUnits predict_original(const ModelState& model, const WindowedDataset& ds,
                               const PreparedData& data) {
  OriginalUnits o{ds.targets, predict_dataset(model, ds)};
  for (auto& v : o.actual.values()) v = data.to_original(v);
  for (auto& v : o.predicted.values()) v = data.to_original(v);
  return o;
}

std::vector<PredictionRow> prediction_rows(const WindowedDataset& ds, const OriginalUnits& o) {
  std::vector<PredictionRow> rows;
  for (std::size_t i = 0; i < ds.count(); ++i) {
    for (std::size_t h = 0; h < ds.horizon; ++h) {
      rows.push_back({i, ds.target_start[i].to_string(), h + 1, o.actual.at(i, h), o.predicted.at(i, h)});
    }
  }
  return rows;
}

}  // namespace forecast
