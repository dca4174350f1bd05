#pragma once

#include <optional>
#include <vector>

#include "forecast/numeric/tensor.hpp"

namespace forecast {

struct PredictionSet {
  std::vector<double> actual;
  std::vector<double> predicted;

  std::size_t size() const noexcept { return actual.size(); }
  // Throws DataError unless both sides are non-empty and equally long.
  void validate() const;
};

double mae(const PredictionSet& ps);
double rmse(const PredictionSet& ps);

struct MapeResult {
  double percent = 0.0;
  std::size_t excluded = 0;  // samples with |actual| < 1e-8
};
// Throws an UNDEFINED_METRIC error when every sample is excluded.
MapeResult mape(const PredictionSet& ps);

// 1 - SSE/SST; throws UNDEFINED_METRIC when SST < 1e-12.
double r2(const PredictionSet& ps);

struct StepMetrics {
  double mae = 0.0;
  double rmse = 0.0;
  std::optional<double> mape_percent;
  std::size_t mape_excluded = 0;
  std::optional<double> r2;
};

struct MetricsReport {
  std::size_t n = 0;  // pooled (sample, step) pairs
  double mae = 0.0;
  double rmse = 0.0;
  double mape_percent = 0.0;
  std::size_t mape_excluded = 0;
  double r2 = 0.0;
  std::vector<StepMetrics> per_step;
};

// actual/predicted: [count x horizon] in original units. Pooled metrics use
// every (sample, step) pair; per_step[h] uses column h only.
MetricsReport compute_metrics(const Tensor& actual, const Tensor& predicted);

}  // namespace forecast
