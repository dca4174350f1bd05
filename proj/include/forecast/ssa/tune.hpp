#pragma once

#include <vector>

#include "forecast/nn/train.hpp"
#include "forecast/ssa/ssa.hpp"

namespace forecast {

// Swarm coordinates: log10(learning rate), GRU hidden width, kernel length
// and the first conv width c1 (the others follow as 2*c1, 4*c1). Integer
// coordinates are rounded to nearest and clamped to their bounds.
struct SearchSpace {
  Bounds log10_lr{-4.0, -2.0};
  Bounds gru_hidden{16.0, 128.0};
  Bounds kernel_len{2.0, 5.0};
  Bounds base_channels{8.0, 32.0};

  std::vector<Bounds> bounds() const;
  HyperParams decode(std::span<const double> x, const HyperParams& base) const;
  // Inverse of decode for the searched fields; clamped into bounds.
  std::vector<double> encode(const HyperParams& hp) const;
};

struct TuneEvaluation {
  std::vector<double> position;
  double val_mse = 0.0;  // +inf when the evaluation failed
};

struct TuneResult {
  HyperParams best;
  double best_val_mse = 0.0;
  std::vector<double> trace;  // global best after init, then per iteration
  std::vector<TuneEvaluation> evaluations;  // in call order
  std::size_t initial_population = 0;       // evaluations[0..n) are the initial swarm
};

// Fitness is the validation MSE of a fresh model trained for epoch_budget
// epochs (early stopping off) with the decoded hyperparameters. Each call
// seeds its model from the tuning seed and the call index. When
// `seed_with_base` is set, individual 0 starts at the encoding of `base`.
TuneResult tune_hyperparams(const WindowedDataset& train_ds, const WindowedDataset& val_ds,
                            const SearchSpace& space, SsaConfig config, const HyperParams& base,
                            std::size_t epoch_budget = 15, bool seed_with_base = false);

}  // namespace forecast
