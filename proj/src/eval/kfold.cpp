#include "forecast/eval/kfold.hpp"

#include <cmath>
#include <numeric>

#include "forecast/error.hpp"

namespace forecast {

std::vector<std::pair<std::size_t, std::size_t>> fold_blocks(std::size_t count, std::size_t k) {
  if (k < 2) throw ConfigError("kfold: k must be at least 2");
  if (count < k) {
    throw DataError("kfold: " + std::to_string(count) + " windows cannot form " +
                    std::to_string(k) + " blocks");
  }
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t i = 0; i < k; ++i) blocks.emplace_back(i * count / k, (i + 1) * count / k);
  return blocks;
}

namespace {

std::vector<std::size_t> iota_range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> idx(end - begin);
  std::iota(idx.begin(), idx.end(), begin);
  return idx;
}

Tensor to_original_units(const Tensor& scaled, const TargetInverse& inv) {
  Tensor out = scaled;
  for (auto& v : out.values()) v = inv(v);
  return out;
}

}  // namespace

KFoldResult kfold_cv(const WindowedDataset& ds, std::size_t k, const HyperParams& hp,
                     const TargetInverse& to_original, const EpochCallback& on_epoch) {
  hp.validate();
  const auto blocks = fold_blocks(ds.count(), k);
  HyperParams fold_hp = hp;
  fold_hp.early_stopping = false;

  KFoldResult result;
  result.k = k;
  const RngStream root(hp.seed);
  for (std::size_t f = 1; f < k; ++f) {
    const WindowedDataset train_ds = ds.select(iota_range(0, blocks[f].first));
    const WindowedDataset val_ds = ds.select(iota_range(blocks[f].first, blocks[f].second));
    fold_hp.seed = root.child("fold", f).next_u64();
    ModelState model = build_model(fold_hp, ds.features(), RngStream(fold_hp.seed));
    TrainResult trained = train(std::move(model), train_ds, val_ds, fold_hp, on_epoch);

    const Tensor pred = to_original_units(predict_dataset(trained.best, val_ds), to_original);
    const Tensor actual = to_original_units(val_ds.targets, to_original);
    FoldResult fr;
    fr.fold = f;
    fr.train_windows = train_ds.count();
    fr.val_windows = val_ds.count();
    fr.metrics = compute_metrics(actual, pred);
    fr.epochs = trained.report.epochs_completed();
    result.folds.push_back(std::move(fr));
  }

  const double n = static_cast<double>(result.folds.size());
  auto summarize = [&](auto field, double& mean, double& sd) {
    mean = 0.0;
    for (const auto& fr : result.folds) mean += field(fr.metrics);
    mean /= n;
    double ss = 0.0;
    for (const auto& fr : result.folds) {
      const double d = field(fr.metrics) - mean;
      ss += d * d;
    }
    sd = std::sqrt(ss / n);
  };
  summarize([](const MetricsReport& m) { return m.mae; }, result.mean.mae, result.stddev.mae);
  summarize([](const MetricsReport& m) { return m.rmse; }, result.mean.rmse, result.stddev.rmse);
  summarize([](const MetricsReport& m) { return m.mape_percent; }, result.mean.mape_percent,
            result.stddev.mape_percent);
  summarize([](const MetricsReport& m) { return m.r2; }, result.mean.r2, result.stddev.r2);
  return result;
}

}  // namespace forecast
