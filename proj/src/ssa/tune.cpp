#include "forecast/ssa/tune.hpp"

#include <algorithm>
#include <cmath>

#include "forecast/error.hpp"

namespace forecast {
namespace {

std::size_t round_clamped(double v, const Bounds& b) {
  return static_cast<std::size_t>(std::clamp(std::round(v), std::ceil(b.lo), std::floor(b.hi)));
}

}  // namespace

std::vector<Bounds> SearchSpace::bounds() const {
  return {log10_lr, gru_hidden, kernel_len, base_channels};
}

HyperParams SearchSpace::decode(std::span<const double> x, const HyperParams& base) const {
  if (x.size() != 4) throw DimensionError("search space has 4 dimensions");
  HyperParams hp = base;
  hp.learning_rate = std::pow(10.0, std::clamp(x[0], log10_lr.lo, log10_lr.hi));
  hp.gru_hidden = round_clamped(x[1], gru_hidden);
  hp.kernel_len = round_clamped(x[2], kernel_len);
  const std::size_t c1 = round_clamped(x[3], base_channels);
  hp.conv_channels = {c1, 2 * c1, 4 * c1};
  return hp;
}

std::vector<double> SearchSpace::encode(const HyperParams& hp) const {
  auto c = [](double v, const Bounds& b) { return std::clamp(v, b.lo, b.hi); };
  return {c(std::log10(hp.learning_rate), log10_lr), c(double(hp.gru_hidden), gru_hidden),
          c(double(hp.kernel_len), kernel_len), c(double(hp.conv_channels[0]), base_channels)};
}

TuneResult tune_hyperparams(const WindowedDataset& train_ds, const WindowedDataset& val_ds,
                            const SearchSpace& space, SsaConfig config, const HyperParams& base,
                            std::size_t epoch_budget, bool seed_with_base) {
  if (epoch_budget == 0) throw ConfigError("tune: epoch_budget must be positive");
  if (train_ds.count() == 0 || val_ds.count() == 0) {
    throw DataError("tune: training and validation windows are both required");
  }
  config.bounds = space.bounds();
  if (seed_with_base) config.initial_positions = {space.encode(base)};

  TuneResult result;
  const RngStream root(config.seed);
  std::size_t calls = 0;
  const Objective objective = [&](std::span<const double> x) {
    const std::size_t call = calls++;
    TuneEvaluation ev{{x.begin(), x.end()}, std::numeric_limits<double>::infinity()};
    try {
      HyperParams hp = space.decode(x, base);
      hp.max_epochs = epoch_budget;
      hp.early_stopping = false;
      hp.seed = root.child("fitness", call).next_u64();
      hp.validate();
      ModelState model = build_model(hp, train_ds.features(), RngStream(hp.seed));
      TrainResult trained = train(std::move(model), train_ds, val_ds, hp);
      ev.val_mse = trained.report.val_loss.back();
    } catch (const Error&) {
      // counted as +inf by the optimizer
    }
    result.evaluations.push_back(ev);
    return ev.val_mse;
  };

  const OptimizeResult opt = optimize(objective, config);
  result.initial_population = config.population_size;
  result.trace = opt.trace;
  result.best_val_mse = opt.best_fitness;
  result.best = space.decode(opt.best_position, base);
  return result;
}

}  // namespace forecast
