#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "forecast/eval/kfold.hpp"
#include "forecast/eval/metrics.hpp"
#include "forecast/nn/train.hpp"
#include "forecast/preprocess/clean.hpp"
#include "forecast/ssa/tune.hpp"

namespace forecast {

// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

nlohmann::json to_json(const CleaningReport& r);
// Wall time is left out so reports from identical runs are byte-identical.
nlohmann::json to_json(const TrainReport& r);
nlohmann::json to_json(const MetricsReport& m);
nlohmann::json to_json(const KFoldResult& k);
nlohmann::json to_json(const TuneResult& t);

// Canonical rendering used for every report file.
std::string render_json(const nlohmann::json& j);

std::string loss_curve_csv(const TrainReport& r);
std::string ssa_trace_csv(const TuneResult& t);

struct PredictionRow {
  std::size_t window = 0;
  std::string target_start;  // date of the window's first target row
  std::size_t step = 0;      // 1-based horizon step
  double actual = 0.0;
  double predicted = 0.0;
};
std::string predictions_csv(const std::vector<PredictionRow>& rows);

}  // namespace forecast
