// forecast: CNN-BiGRU price forecasting from the command line.

#include <iostream>

#include <CLI11.hpp>

#include "forecast/app/commands.hpp"
#include "forecast/error.hpp"

namespace {

void add_common(CLI::App* cmd, forecast::CommandOptions& o, bool needs_checkpoint) {
  cmd->add_option("--config", o.config, "JSON run configuration (defaults apply when omitted)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--data", o.data, "input CSV; overrides `data` in the config");
  auto* ck = cmd->add_option("--checkpoint", o.checkpoint,
                             needs_checkpoint ? "checkpoint to load"
                                              : "where to write the checkpoint (default <out>/model.ckpt)");
  if (needs_checkpoint) ck->required();
  cmd->add_option("--out", o.out, "output directory (default <output_dir>/<command>)");
  cmd->add_option("--seed", o.seed, "run seed; overrides `seed` in the config");
  cmd->add_flag("--quiet", o.quiet, "suppress per-epoch progress");
}

int fail(const std::string& code, const std::string& detail, int exit_code) {
  std::cerr << "error[" << code << "]: " << detail << "\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CNN-BiGRU time-series forecaster with swarm hyperparameter search"};
  app.require_subcommand(1);

  forecast::CommandOptions opts;
  auto* pre = app.add_subcommand("preprocess", "clean the data and report split/window sizes");
  add_common(pre, opts, false);
  auto* tr = app.add_subcommand("train", "train a model and write a checkpoint and report");
  add_common(tr, opts, false);
  auto* tu = app.add_subcommand("tune", "search hyperparameters, then train the best configuration");
  add_common(tu, opts, false);
  auto* ev = app.add_subcommand("evaluate", "score a checkpoint on the test split (and K-fold)");
  add_common(ev, opts, true);
  auto* pr = app.add_subcommand("predict", "forecast the horizon after the last input row");
  add_common(pr, opts, true);

  std::string kind, synth_out;
  std::size_t rows = 800;
  std::uint64_t synth_seed = 0;
  auto* sy = app.add_subcommand("synth", "write a synthetic dataset");
  sy->add_option("kind", kind, "sinusoid | trend_season_noise | ar1")->required();
  sy->add_option("--rows", rows, "number of data rows")->capture_default_str();
  sy->add_option("--seed", synth_seed, "noise seed")->capture_default_str();
  sy->add_option("--out", synth_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("USAGE", e.what(), 1);
  }

  try {
    if (*pre) forecast::cmd_preprocess(opts, std::cerr);
    else if (*tr) forecast::cmd_train(opts, std::cerr);
    else if (*tu) forecast::cmd_tune(opts, std::cerr);
    else if (*ev) forecast::cmd_evaluate(opts, std::cerr);
    else if (*pr) std::cout << forecast::cmd_predict(opts, std::cerr);
    else if (*sy) forecast::cmd_synth(kind, rows, synth_seed, synth_out);
  } catch (const forecast::Error& e) {
    return fail(e.code(), e.what(), static_cast<int>(e.kind()));
  } catch (const std::exception& e) {
    return fail("INTERNAL", e.what(), 3);
  }
  return 0;
}
