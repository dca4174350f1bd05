#include "forecast/eval/metrics.hpp"

#include <cmath>

#include "forecast/error.hpp"

namespace forecast {
namespace {

Error undefined_metric(const std::string& what) {
  return Error(ErrorKind::Data, "UNDEFINED_METRIC", what);
}

template <typename Fn>
std::optional<double> try_metric(Fn&& fn) {
  try {
    return fn();
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

void PredictionSet::validate() const {
  if (actual.empty()) throw DataError("prediction set is empty");
  if (actual.size() != predicted.size()) {
    throw DataError("prediction set has " + std::to_string(actual.size()) + " actuals and " +
                    std::to_string(predicted.size()) + " predictions");
  }
}

double mae(const PredictionSet& ps) {
  ps.validate();
  double s = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) s += std::abs(ps.actual[i] - ps.predicted[i]);
  return s / static_cast<double>(ps.size());
}

double rmse(const PredictionSet& ps) {
  ps.validate();
  double s = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double d = ps.actual[i] - ps.predicted[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(ps.size()));
}

MapeResult mape(const PredictionSet& ps) {
  ps.validate();
  MapeResult r;
  double s = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double y = ps.actual[i];
    if (std::abs(y) < 1e-8) {
      ++r.excluded;
      continue;
    }
    s += std::abs((y - ps.predicted[i]) / y);
    ++used;
  }
  if (used == 0) throw undefined_metric("MAPE undefined: every actual value is zero");
  r.percent = 100.0 * s / static_cast<double>(used);
  return r;
}

double r2(const PredictionSet& ps) {
  ps.validate();
  double mean = 0.0;
  for (double y : ps.actual) mean += y;
  mean /= static_cast<double>(ps.size());
  double sse = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double e = ps.actual[i] - ps.predicted[i];
    const double d = ps.actual[i] - mean;
    sse += e * e;
    sst += d * d;
  }
  if (sst < 1e-12) throw undefined_metric("R2 undefined: actual values are constant");
  return 1.0 - sse / sst;
}

MetricsReport compute_metrics(const Tensor& actual, const Tensor& predicted) {
  if (actual.shape() != predicted.shape() || actual.rank() != 2) {
    throw DimensionError("compute_metrics: shapes " + shape_to_string(actual.shape()) + " and " +
                         shape_to_string(predicted.shape()));
  }
  const std::size_t count = actual.dim(0), horizon = actual.dim(1);
  PredictionSet pooled{{actual.values().begin(), actual.values().end()},
                       {predicted.values().begin(), predicted.values().end()}};
  MetricsReport report;
  report.n = pooled.size();
  report.mae = mae(pooled);
  report.rmse = rmse(pooled);
  const auto mp = mape(pooled);
  report.mape_percent = mp.percent;
  report.mape_excluded = mp.excluded;
  report.r2 = r2(pooled);

  for (std::size_t h = 0; h < horizon; ++h) {
    PredictionSet step;
    for (std::size_t i = 0; i < count; ++i) {
      step.actual.push_back(actual.at(i, h));
      step.predicted.push_back(predicted.at(i, h));
    }
    StepMetrics sm;
    sm.mae = mae(step);
    sm.rmse = rmse(step);
    try {
      const auto m = mape(step);
      sm.mape_percent = m.percent;
      sm.mape_excluded = m.excluded;
    } catch (const Error&) {
      sm.mape_excluded = step.size();
    }
    sm.r2 = try_metric([&] { return r2(step); });
    report.per_step.push_back(sm);
  }
  return report;
}

}  // namespace forecast
