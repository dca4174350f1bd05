#include "forecast/nn/train.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "forecast/error.hpp"

namespace forecast {

double evaluate_mse(const ModelState& model, const WindowedDataset& ds) {
  if (ds.count() == 0) throw DataError("evaluate_mse: empty dataset");
  double total = 0.0;
  for (std::size_t i = 0; i < ds.count(); ++i) {
    auto [pred, cache] = forward(model, ds.input(i));
    total += mse_loss(pred, ds.target(i)).value;
  }
  return total / static_cast<double>(ds.count());
}

Tensor predict_dataset(const ModelState& model, const WindowedDataset& ds) {
  Tensor out({ds.count(), model.hp.horizon});
  for (std::size_t i = 0; i < ds.count(); ++i) {
    auto [pred, cache] = forward(model, ds.input(i));
    std::copy(pred.values().begin(), pred.values().end(), out.row(i).begin());
  }
  return out;
}

TrainResult train(ModelState model, const WindowedDataset& train_ds,
                  const WindowedDataset& val_ds, const HyperParams& hp,
                  const EpochCallback& on_epoch) {
  hp.validate();
  if (train_ds.count() == 0) throw DataError("train: training set has no windows");
  if (val_ds.count() == 0) throw DataError("train: validation set has no windows");

  const auto started = std::chrono::steady_clock::now();
  const RngStream root(hp.seed);
  const std::size_t n = train_ds.count();
  std::vector<std::size_t> order(n);

  TrainResult result{model, {}};
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= hp.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    RngStream shuffle = root.child("shuffle", epoch);
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[shuffle.below(i)]);
    }

    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += hp.batch_size) {
      const std::size_t end = std::min(n, start + hp.batch_size);
      Network grads;
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t idx = order[b];
        auto [pred, cache] = forward(model, train_ds.input(idx));
        const auto loss = mse_loss(pred, train_ds.target(idx));
        if (!std::isfinite(loss.value)) {
          std::ostringstream os;
          os << "train: non-finite loss at epoch " << epoch << ", window " << idx;
          throw NumericError(os.str());
        }
        epoch_loss += loss.value;
        Network g = backward(model, cache, loss.grad);
        if (b == start) {
          grads = std::move(g);
        } else {
          grads += g;
        }
      }
      grads *= 1.0 / static_cast<double>(end - start);
      sgd_step(model, grads, hp.learning_rate);
    }
    epoch_loss /= static_cast<double>(n);

    const double val = evaluate_mse(model, val_ds);
    if (!std::isfinite(val)) {
      throw NumericError("train: non-finite validation loss at epoch " + std::to_string(epoch));
    }
    result.report.train_loss.push_back(epoch_loss);
    result.report.val_loss.push_back(val);
    if (on_epoch) on_epoch(epoch, epoch_loss, val);

    if (val < best_val - 1e-9) {
      best_val = val;
      result.best = model;
      result.report.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= hp.patience && hp.early_stopping) {
      result.report.stopped_early = epoch < hp.max_epochs;
      break;
    }
  }
  // Without early stopping the caller wants the final weights.
  if (!hp.early_stopping) {
    result.best = std::move(model);
  }
  result.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

Tensor predict(const ModelState& model, const MinMaxScaler& scaler, const OneHotEncoder& encoder,
               const std::vector<std::string>& feature_columns,
               const TimeSeriesFrame& frame_tail) {
  if (frame_tail.rows() != model.hp.window_len) {
    throw SchemaError("predict: need exactly " + std::to_string(model.hp.window_len) +
                      " rows, got " + std::to_string(frame_tail.rows()));
  }
  const auto encoded = encoder.transform(frame_tail).frame;
  if (encoded.numeric.size() != feature_columns.size() ||
      feature_columns.size() != model.feature_dim) {
    throw SchemaError("predict: data has " + std::to_string(encoded.numeric.size()) +
                      " features, model expects " + std::to_string(model.feature_dim));
  }
  for (std::size_t f = 0; f < feature_columns.size(); ++f) {
    if (encoded.numeric[f].name != feature_columns[f]) {
      throw SchemaError("predict: feature " + std::to_string(f) + " is '" +
                        encoded.numeric[f].name + "', model expects '" + feature_columns[f] +
                        "'");
    }
  }
  const auto scaled = scaler.transform(encoded);
  Tensor window({model.hp.window_len, model.feature_dim});
  for (std::size_t t = 0; t < model.hp.window_len; ++t) {
    for (std::size_t f = 0; f < model.feature_dim; ++f) {
      window.at(t, f) = scaled.numeric[f].values[t];
    }
  }
  auto [pred, cache] = forward(model, window);
  const auto& target = scaler.column(frame_tail.target);
  for (auto& v : pred.values()) v = scaler.inverse_value(target, v);
  return pred;
}

}  // namespace forecast
