#include "forecast/app/config.hpp"

#include <fstream>
#include <set>

#include "forecast/error.hpp"

namespace forecast {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> known) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key `" + (where.empty() ? key : where + "." + key) + "`");
    }
  }
}

std::string path_of(const std::string& where, const char* key) {
  return where.empty() ? key : where + "." + key;
}

void read(const json& j, const std::string& where, const char* key, std::size_t& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) throw ConfigError("`" + path_of(where, key) + "` must be a non-negative integer");
  out = v.get<std::size_t>();
}

void read(const json& j, const std::string& where, const char* key, double& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("`" + path_of(where, key) + "` must be a number");
  out = v.get<double>();
}

void read(const json& j, const std::string& where, const char* key, bool& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError("`" + path_of(where, key) + "` must be true or false");
  out = v.get<bool>();
}

void read(const json& j, const std::string& where, const char* key, std::string& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError("`" + path_of(where, key) + "` must be a string");
  out = v.get<std::string>();
}

void read(const json& j, const std::string& where, const char* key, std::vector<std::string>& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError("`" + path_of(where, key) + "` must be a list of strings");
  out.clear();
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError("`" + path_of(where, key) + "` must be a list of strings");
    out.push_back(e.get<std::string>());
  }
}

}  // namespace

HyperParams hyperparams_from_json(const json& j, HyperParams hp) {
  const std::string w = "hyperparams";
  reject_unknown(j, w,
                 {"learning_rate", "batch_size", "max_epochs", "conv_channels", "kernel_len",
                  "gru_hidden", "gru_layers", "window_len", "horizon", "bidirectional", "patience",
                  "early_stopping", "seed"});
  read(j, w, "learning_rate", hp.learning_rate);
  read(j, w, "batch_size", hp.batch_size);
  read(j, w, "max_epochs", hp.max_epochs);
  if (j.contains("conv_channels")) {
    const auto& c = j.at("conv_channels");
    if (!c.is_array() || c.size() != 3) throw ConfigError("`hyperparams.conv_channels` must list 3 integers");
    for (std::size_t i = 0; i < 3; ++i) {
      if (!c[i].is_number_unsigned()) throw ConfigError("`hyperparams.conv_channels` must list 3 integers");
      hp.conv_channels[i] = c[i].get<std::size_t>();
    }
  }
  read(j, w, "kernel_len", hp.kernel_len);
  read(j, w, "gru_hidden", hp.gru_hidden);
  read(j, w, "gru_layers", hp.gru_layers);
  read(j, w, "window_len", hp.window_len);
  read(j, w, "horizon", hp.horizon);
  read(j, w, "bidirectional", hp.bidirectional);
  read(j, w, "patience", hp.patience);
  read(j, w, "early_stopping", hp.early_stopping);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("`hyperparams.seed` must be a non-negative integer");
    hp.seed = j.at("seed").get<std::uint64_t>();
  }
  return hp;
}

json hyperparams_to_json(const HyperParams& hp) {
  return {{"learning_rate", hp.learning_rate},
          {"batch_size", hp.batch_size},
          {"max_epochs", hp.max_epochs},
          {"conv_channels", hp.conv_channels},
          {"kernel_len", hp.kernel_len},
          {"gru_hidden", hp.gru_hidden},
          {"gru_layers", hp.gru_layers},
          {"window_len", hp.window_len},
          {"horizon", hp.horizon},
          {"bidirectional", hp.bidirectional},
          {"patience", hp.patience},
          {"early_stopping", hp.early_stopping},
          {"seed", hp.seed}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  reject_unknown(j, "",
                 {"data", "target", "categorical", "hyperparams", "tuning", "split", "scaler_range",
                  "cleaning", "kfold", "output_dir", "seed"});
  read(j, "", "data", c.data);
  read(j, "", "target", c.target);
  read(j, "", "categorical", c.categorical);
  if (j.contains("hyperparams")) c.hyperparams = hyperparams_from_json(j.at("hyperparams"));
  if (j.contains("tuning")) {
    const auto& t = j.at("tuning");
    const std::string w = "tuning";
    reject_unknown(t, w,
                   {"population_size", "max_iterations", "alpha_start", "alpha_end", "beta", "gamma",
                    "epoch_budget", "include_defaults"});
    read(t, w, "population_size", c.tuning.population_size);
    read(t, w, "max_iterations", c.tuning.max_iterations);
    read(t, w, "alpha_start", c.tuning.alpha_start);
    read(t, w, "alpha_end", c.tuning.alpha_end);
    read(t, w, "beta", c.tuning.beta);
    read(t, w, "gamma", c.tuning.gamma);
    read(t, w, "epoch_budget", c.tuning.epoch_budget);
    read(t, w, "include_defaults", c.tuning.include_defaults);
  }
  if (j.contains("split")) {
    const auto& s = j.at("split");
    reject_unknown(s, "split", {"train", "val", "test"});
    read(s, "split", "train", c.split.train);
    read(s, "split", "val", c.split.val);
    read(s, "split", "test", c.split.test);
  }
  if (j.contains("scaler_range")) {
    const auto& r = j.at("scaler_range");
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
      throw ConfigError("`scaler_range` must be [lo, hi]");
    }
    c.scaler_range = {r[0].get<double>(), r[1].get<double>()};
  }
  if (j.contains("cleaning")) {
    const auto& cl = j.at("cleaning");
    reject_unknown(cl, "cleaning", {"missing_row_threshold", "sigma_k"});
    read(cl, "cleaning", "missing_row_threshold", c.cleaning.missing_row_threshold);
    read(cl, "cleaning", "sigma_k", c.cleaning.sigma_k);
  }
  read(j, "", "kfold", c.kfold);
  read(j, "", "output_dir", c.output_dir);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("`seed` must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  c.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  return {{"data", c.data},
          {"target", c.target},
          {"categorical", c.categorical},
          {"hyperparams", hyperparams_to_json(c.hyperparams)},
          {"tuning",
           {{"population_size", c.tuning.population_size},
            {"max_iterations", c.tuning.max_iterations},
            {"alpha_start", c.tuning.alpha_start},
            {"alpha_end", c.tuning.alpha_end},
            {"beta", c.tuning.beta},
            {"gamma", c.tuning.gamma},
            {"epoch_budget", c.tuning.epoch_budget},
            {"include_defaults", c.tuning.include_defaults}}},
          {"split", {{"train", c.split.train}, {"val", c.split.val}, {"test", c.split.test}}},
          {"scaler_range", {c.scaler_range.lo, c.scaler_range.hi}},
          {"cleaning",
           {{"missing_row_threshold", c.cleaning.missing_row_threshold},
            {"sigma_k", c.cleaning.sigma_k}}},
          {"kfold", c.kfold},
          {"output_dir", c.output_dir},
          {"seed", c.seed}};
}

void RunConfig::validate() const {
  if (target.empty()) throw ConfigError("`target` must be a column name");
  effective_hyperparams().validate();
  split_sizes(1000, split);  // ratio checks only
  if (!(scaler_range.lo < scaler_range.hi)) throw ConfigError("`scaler_range` needs lo < hi");
  if (!(cleaning.missing_row_threshold >= 0.0 && cleaning.missing_row_threshold <= 1.0)) {
    throw ConfigError("`cleaning.missing_row_threshold` must lie in [0, 1]");
  }
  if (!(cleaning.sigma_k > 0.0)) throw ConfigError("`cleaning.sigma_k` must be positive");
  if (kfold == 1) throw ConfigError("`kfold` must be 0 (off) or at least 2");
  if (tuning.epoch_budget == 0) throw ConfigError("`tuning.epoch_budget` must be positive");
  SsaConfig ssa;
  ssa.population_size = tuning.population_size;
  ssa.max_iterations = tuning.max_iterations;
  ssa.alpha_start = tuning.alpha_start;
  ssa.alpha_end = tuning.alpha_end;
  ssa.beta = tuning.beta;
  ssa.gamma = tuning.gamma;
  ssa.bounds = {Bounds{}};
  ssa.validate();
}

HyperParams RunConfig::effective_hyperparams() const {
  HyperParams hp = hyperparams;
  hp.seed = seed;
  return hp;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace forecast
