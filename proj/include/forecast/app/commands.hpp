#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "forecast/app/config.hpp"

namespace forecast {

// Command-line overrides shared by the subcommands.
struct CommandOptions {
  std::optional<std::string> config;
  std::optional<std::string> data;
  std::optional<std::string> checkpoint;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;  // suppress per-epoch progress
};

// Config file (or defaults) with --data/--seed applied.
RunConfig resolve_config(const CommandOptions& opts);

// Each command writes into --out, defaulting to <output_dir>/<command>, and
// logs progress to `log`. Failures throw forecast::Error.
void cmd_preprocess(const CommandOptions& opts, std::ostream& log);
void cmd_train(const CommandOptions& opts, std::ostream& log);
void cmd_tune(const CommandOptions& opts, std::ostream& log);
void cmd_evaluate(const CommandOptions& opts, std::ostream& log);
// Also returns the forecast CSV.
std::string cmd_predict(const CommandOptions& opts, std::ostream& log);
void cmd_synth(const std::string& kind, std::size_t rows, std::uint64_t seed,
               const std::string& out_path);

}  // namespace forecast
