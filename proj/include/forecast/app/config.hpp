#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "forecast/nn/model.hpp"
#include "forecast/preprocess/clean.hpp"
#include "forecast/preprocess/scaler.hpp"
#include "forecast/preprocess/split.hpp"
#include "forecast/ssa/ssa.hpp"

namespace forecast {

// Tuning settings; the search bounds themselves are fixed.
struct TuneSettings {
  std::size_t population_size = 20;
  std::size_t max_iterations = 10;
  double alpha_start = 0.9;
  double alpha_end = 0.4;
  double beta = 1.5;
  double gamma = 1.5;
  std::size_t epoch_budget = 15;
  bool include_defaults = true;  // start one individual at the configured hyperparams

  friend bool operator==(const TuneSettings&, const TuneSettings&) = default;
};

struct RunConfig {
  std::string data;
  std::string target = "target";
  std::vector<std::string> categorical;
  HyperParams hyperparams;  // hyperparams.seed is ignored; `seed` drives everything
  TuneSettings tuning;
  SplitRatios split;
  ScaleRange scaler_range{0.0, 1.0};
  CleaningOptions cleaning;
  std::size_t kfold = 0;  // 0 disables K-fold in `evaluate`
  std::string output_dir = "out";
  std::uint64_t seed = 0;

  // Checks every field; throws ConfigError naming the offending key.
  void validate() const;
  // hyperparams with the run seed applied.
  HyperParams effective_hyperparams() const;
};

// Unknown keys are errors. Missing keys keep their defaults.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::filesystem::path& path);

HyperParams hyperparams_from_json(const nlohmann::json& j, HyperParams base = {});
nlohmann::json hyperparams_to_json(const HyperParams& hp);

}  // namespace forecast
