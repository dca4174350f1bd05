#include "forecast/app/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "forecast/error.hpp"

namespace forecast {
namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no infinity; failed evaluations serialize as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw DataError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DataError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

json to_json(const CleaningReport& r) {
  json dropped = json::array();
  for (const auto& d : r.dropped_rows) dropped.push_back(d.to_string());
  json filled = json::array();
  for (const auto& f : r.filled_cells) filled.push_back({{"column", f.column}, {"row", f.row}});
  json outliers = json::array();
  for (const auto& o : r.outliers) {
    outliers.push_back({{"column", o.column},
                        {"row", o.row},
                        {"original", o.original},
                        {"replacement", o.replacement},
                        {"pass", o.pass}});
  }
  return {{"dropped_rows", dropped},
          {"filled_cells", filled},
          {"outliers", outliers},
          {"outlier_passes", r.outlier_passes}};
}

json to_json(const TrainReport& r) {
  return {{"train_loss", r.train_loss},
          {"val_loss", r.val_loss},
          {"best_epoch", r.best_epoch},
          {"epochs_completed", r.epochs_completed()},
          {"stopped_early", r.stopped_early}};
}

json to_json(const MetricsReport& m) {
  json steps = json::array();
  for (std::size_t h = 0; h < m.per_step.size(); ++h) {
    const auto& s = m.per_step[h];
    steps.push_back({{"step", h + 1},
                     {"mae", s.mae},
                     {"rmse", s.rmse},
                     {"mape_percent", s.mape_percent ? json(*s.mape_percent) : json(nullptr)},
                     {"mape_excluded", s.mape_excluded},
                     {"r2", s.r2 ? json(*s.r2) : json(nullptr)}});
  }
  return {{"n", m.n},
          {"mae", m.mae},
          {"rmse", m.rmse},
          {"mape_percent", m.mape_percent},
          {"mape_excluded", m.mape_excluded},
          {"r2", m.r2},
          {"per_step", steps}};
}

json to_json(const KFoldResult& k) {
  auto summary = [](const MetricSummary& s) {
    return json{{"mae", s.mae}, {"rmse", s.rmse}, {"mape_percent", s.mape_percent}, {"r2", s.r2}};
  };
  json folds = json::array();
  for (const auto& f : k.folds) {
    folds.push_back({{"fold", f.fold},
                     {"train_windows", f.train_windows},
                     {"val_windows", f.val_windows},
                     {"epochs", f.epochs},
                     {"metrics", to_json(f.metrics)}});
  }
  return {{"k", k.k},
          {"evaluations", k.folds.size()},
          {"scheme", k.scheme},
          {"folds", folds},
          {"mean", summary(k.mean)},
          {"stddev", summary(k.stddev)}};
}

json to_json(const TuneResult& t) {
  json trace = json::array();
  for (double v : t.trace) trace.push_back(number_or_null(v));
  json evals = json::array();
  for (std::size_t i = 0; i < t.evaluations.size(); ++i) {
    evals.push_back({{"call", i},
                     {"position", t.evaluations[i].position},
                     {"val_mse", number_or_null(t.evaluations[i].val_mse)}});
  }
  return {{"best_val_mse", number_or_null(t.best_val_mse)},
          {"trace", trace},
          {"initial_population", t.initial_population},
          {"evaluations", evals}};
}

std::string render_json(const json& j) { return j.dump(2) + "\n"; }

std::string loss_curve_csv(const TrainReport& r) {
  std::string out = "epoch,train_loss,val_loss\n";
  for (std::size_t e = 0; e < r.epochs_completed(); ++e) {
    out += std::to_string(e + 1) + "," + fmt(r.train_loss[e]) + "," + fmt(r.val_loss[e]) + "\n";
  }
  return out;
}

std::string ssa_trace_csv(const TuneResult& t) {
  std::string out = "iteration,best_val_mse\n";
  for (std::size_t i = 0; i < t.trace.size(); ++i) {
    out += std::to_string(i) + "," + fmt(t.trace[i]) + "\n";
  }
  return out;
}

std::string predictions_csv(const std::vector<PredictionRow>& rows) {
  std::string out = "window,target_start,step,actual,predicted\n";
  for (const auto& r : rows) {
    out += std::to_string(r.window) + "," + r.target_start + "," + std::to_string(r.step) + "," + fmt(r.actual) + "," +
           fmt(r.predicted) + "\n";
  }
  return out;
}

}  // namespace forecast
