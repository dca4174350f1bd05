#include "forecast/app/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <ostream>

#include "forecast/app/checkpoint.hpp"
#include "forecast/app/csv.hpp"
#include "forecast/app/pipeline.hpp"
#include "forecast/app/report.hpp"
#include "forecast/app/synth.hpp"
#include "forecast/error.hpp"
#include "forecast/eval/kfold.hpp"
#include "forecast/ssa/tune.hpp"

namespace forecast {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path out_dir(const CommandOptions& opts, const RunConfig& config, const char* command) {
  if (opts.out) return *opts.out;
  return fs::path(config.output_dir) / command;
}

std::string data_path(const CommandOptions& opts, const RunConfig& config) {
  if (opts.data) return *opts.data;
  if (config.data.empty()) throw ConfigError("no input data: pass --data or set `data` in the config");
  return config.data;
}

CsvReadResult load_frame(const std::string& path, const RunConfig& config, std::ostream& log) {
  auto r = read_csv(path, CsvSchema{config.target, config.categorical});
  for (const auto& w : r.warnings) log << "warning: " << w << "\n";
  return r;
}

json split_json(const PreparedData& d) {
  return {{"rows", {{"train", d.sizes.train}, {"val", d.sizes.val}, {"test", d.sizes.test}}},
          {"windows", {{"train", d.train.count()}, {"val", d.val.count()}, {"test", d.test.count()}}}};
}

std::vector<std::string> merged_warnings(const CsvReadResult& input, const PreparedData& d) {
  std::vector<std::string> w = input.warnings;
  w.insert(w.end(), d.warnings.begin(), d.warnings.end());
  return w;
}

void log_warnings(const PreparedData& d, std::ostream& log) {
  for (const auto& w : d.warnings) log << "warning: " << w << "\n";
}

void require_windows(const WindowedDataset& ds, const char* segment) {
  if (ds.count() == 0) {
    throw DataError(std::string("the ") + segment + " segment is too short to form a window" +
                    (ds.warning ? " (" + *ds.warning + ")" : ""));
  }
}

EpochCallback progress(const CommandOptions& opts, std::ostream& log, std::string label) {
  if (opts.quiet) return {};
  return [&log, label](std::size_t epoch, double tr, double val) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s epoch %zu  train %.6g  val %.6g\n", label.c_str(), epoch,
                  tr, val);
    log << buf << std::flush;
  };
}

struct Trained {
  TrainResult result;
  MetricsReport val_metrics;
  OriginalUnits val_units;
  double val_mse = 0.0;  // scaled space
};

Trained train_full(const PreparedData& d, const HyperParams& hp, const EpochCallback& cb) {
  require_windows(d.train, "training");
  require_windows(d.val, "validation");
  Trained t{train(fresh_model(hp, d.train.features()), d.train, d.val, hp, cb), {}, {}, 0.0};
  t.val_mse = evaluate_mse(t.result.best, d.val);
  t.val_units = predict_original(t.result.best, d.val, d);
  t.val_metrics = compute_metrics(t.val_units.actual, t.val_units.predicted);
  return t;
}

Checkpoint make_checkpoint(const RunConfig& config, const PreparedData& d, const Trained& t) {
  return {config, t.result.best, d.scaler, d.encoder, d.feature_columns, t.result.report.best_epoch};
}

fs::path checkpoint_target(const CommandOptions& opts, const fs::path& dir) {
  return opts.checkpoint ? fs::path(*opts.checkpoint) : dir / "model.ckpt";
}

void log_metrics(std::ostream& log, const char* label, const MetricsReport& m) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s: MAE %.6g  RMSE %.6g  MAPE %.4g%%  R2 %.6g  (n=%zu)\n", label,
                m.mae, m.rmse, m.mape_percent, m.r2, m.n);
  log << buf;
}

}  // namespace

RunConfig resolve_config(const CommandOptions& opts) {
  RunConfig c = opts.config ? load_config(*opts.config) : RunConfig{};
  if (opts.data) c.data = *opts.data;
  if (opts.seed) c.seed = *opts.seed;
  c.validate();
  return c;
}

void cmd_preprocess(const CommandOptions& opts, std::ostream& log) {
  const RunConfig config = resolve_config(opts);
  const auto input = load_frame(data_path(opts, config), config, log);
  const PreparedData d = prepare_data(input.frame, config, config.effective_hyperparams());
  log_warnings(d, log);
  const fs::path dir = out_dir(opts, config, "preprocess");
  write_file_atomic(dir / "cleaned.csv", format_csv(d.cleaned));
  const json report = {{"command", "preprocess"},
                       {"config", config_to_json(config)},
                       {"input_rows", input.frame.rows()},
                       {"cleaned_rows", d.cleaned.rows()},
                       {"feature_columns", d.feature_columns},
                       {"cleaning", to_json(d.cleaning)},
                       {"split", split_json(d)},
                       {"warnings", merged_warnings(input, d)}};
  write_file_atomic(dir / "report.json", render_json(report));
  log << "cleaned " << input.frame.rows() << " rows -> " << d.cleaned.rows() << " rows; "
      << d.cleaning.outliers.size() << " outliers corrected; wrote " << (dir / "cleaned.csv").string()
      << "\n";
}

void cmd_train(const CommandOptions& opts, std::ostream& log) {
  const RunConfig config = resolve_config(opts);
  const HyperParams hp = config.effective_hyperparams();
  const auto input = load_frame(data_path(opts, config), config, log);
  const PreparedData d = prepare_data(input.frame, config, hp);
  log_warnings(d, log);
  const Trained t = train_full(d, hp, progress(opts, log, "train"));

  const fs::path dir = out_dir(opts, config, "train");
  const fs::path ckpt = checkpoint_target(opts, dir);
  save_checkpoint(make_checkpoint(config, d, t), ckpt);
  const json report = {{"command", "train"},
                       {"config", config_to_json(config)},
                       {"hyperparams", hyperparams_to_json(hp)},
                       {"feature_columns", d.feature_columns},
                       {"parameter_count", t.result.best.net.parameter_count()},
                       {"cleaning", to_json(d.cleaning)},
                       {"split", split_json(d)},
                       {"training", to_json(t.result.report)},
                       {"validation_mse_scaled", t.val_mse},
                       {"validation_metrics", to_json(t.val_metrics)},
                       {"warnings", merged_warnings(input, d)}};
  write_file_atomic(dir / "report.json", render_json(report));
  write_file_atomic(dir / "loss_curve.csv", loss_curve_csv(t.result.report));
  write_file_atomic(dir / "predictions.csv", predictions_csv(prediction_rows(d.val, t.val_units)));
  log << "best epoch " << t.result.report.best_epoch << " of "
      << t.result.report.epochs_completed() << (t.result.report.stopped_early ? " (stopped early)" : "")
      << "\n";
  log_metrics(log, "validation", t.val_metrics);
  log << "checkpoint: " << ckpt.string() << "\n";
}

void cmd_tune(const CommandOptions& opts, std::ostream& log) {
  const RunConfig config = resolve_config(opts);
  const HyperParams defaults = config.effective_hyperparams();
  const auto input = load_frame(data_path(opts, config), config, log);
  const PreparedData d = prepare_data(input.frame, config, defaults);
  log_warnings(d, log);
  require_windows(d.train, "training");
  require_windows(d.val, "validation");

  SsaConfig ssa;
  ssa.population_size = config.tuning.population_size;
  ssa.max_iterations = config.tuning.max_iterations;
  ssa.alpha_start = config.tuning.alpha_start;
  ssa.alpha_end = config.tuning.alpha_end;
  ssa.beta = config.tuning.beta;
  ssa.gamma = config.tuning.gamma;
  ssa.seed = RngStream(config.seed).child("ssa").next_u64();
  const SearchSpace space;
  const TuneResult tuned = tune_hyperparams(d.train, d.val, space, ssa, defaults,
                                            config.tuning.epoch_budget,
                                            config.tuning.include_defaults);
  HyperParams best = tuned.best;
  best.seed = defaults.seed;
  log << "search best validation MSE " << tuned.best_val_mse << " after "
      << tuned.evaluations.size() << " evaluations\n";

  // Both candidates get the full training schedule before comparison.
  const Trained tuned_run = train_full(d, best, progress(opts, log, "tuned"));
  const bool same = best == defaults;
  const Trained default_run = same ? tuned_run : train_full(d, defaults, progress(opts, log, "defaults"));
  const bool defaults_optimal = default_run.val_mse <= tuned_run.val_mse;
  const Trained& chosen = defaults_optimal ? default_run : tuned_run;
  const HyperParams& chosen_hp = defaults_optimal ? defaults : best;

  RunConfig snapshot = config;
  snapshot.hyperparams = chosen_hp;
  const fs::path dir = out_dir(opts, config, "tune");
  const fs::path ckpt = checkpoint_target(opts, dir);
  save_checkpoint(make_checkpoint(snapshot, d, chosen), ckpt);
  const json report = {
      {"command", "tune"},
      {"config", config_to_json(config)},
      {"search_space",
       {{"log10_learning_rate", {space.log10_lr.lo, space.log10_lr.hi}},
        {"gru_hidden", {space.gru_hidden.lo, space.gru_hidden.hi}},
        {"kernel_len", {space.kernel_len.lo, space.kernel_len.hi}},
        {"base_channels", {space.base_channels.lo, space.base_channels.hi}}}},
      {"search", to_json(tuned)},
      {"tuned_hyperparams", hyperparams_to_json(best)},
      {"tuned_validation_mse", tuned_run.val_mse},
      {"default_hyperparams", hyperparams_to_json(defaults)},
      {"default_validation_mse", default_run.val_mse},
      {"defaults_optimal", defaults_optimal},
      {"selected_hyperparams", hyperparams_to_json(chosen_hp)},
      {"training", to_json(chosen.result.report)},
      {"validation_metrics", to_json(chosen.val_metrics)},
      {"split", split_json(d)},
      {"cleaning", to_json(d.cleaning)},
      {"warnings", merged_warnings(input, d)}};
  write_file_atomic(dir / "report.json", render_json(report));
  write_file_atomic(dir / "ssa_trace.csv", ssa_trace_csv(tuned));
  write_file_atomic(dir / "loss_curve.csv", loss_curve_csv(chosen.result.report));
  write_file_atomic(dir / "predictions.csv",
                    predictions_csv(prediction_rows(d.val, chosen.val_units)));
  log << "tuned validation MSE " << tuned_run.val_mse << ", defaults " << default_run.val_mse
      << (defaults_optimal ? "; defaults kept" : "; tuned hyperparameters selected") << "\n";
  log << "checkpoint: " << ckpt.string() << "\n";
}

void cmd_evaluate(const CommandOptions& opts, std::ostream& log) {
  if (!opts.checkpoint) throw ConfigError("evaluate needs --checkpoint");
  const Checkpoint ck = load_checkpoint(*opts.checkpoint);
  RunConfig config = opts.config ? load_config(*opts.config) : ck.config;
  if (opts.seed) config.seed = *opts.seed;
  const std::string path = opts.data ? *opts.data : (!config.data.empty() ? config.data : ck.config.data);
  if (path.empty()) throw ConfigError("no input data: pass --data or set `data` in the config");
  const auto input = load_frame(path, ck.config, log);
  const PreparedData d = prepare_data(input.frame, ck);
  log_warnings(d, log);
  require_windows(d.test, "test");

  const OriginalUnits test = predict_original(ck.model, d.test, d);
  const MetricsReport metrics = compute_metrics(test.actual, test.predicted);
  log_metrics(log, "test", metrics);
  json report = {{"command", "evaluate"},
                 {"checkpoint_config", config_to_json(ck.config)},
                 {"hyperparams", hyperparams_to_json(ck.model.hp)},
                 {"split", split_json(d)},
                 {"test_metrics", to_json(metrics)},
                 {"warnings", merged_warnings(input, d)}};
  if (config.kfold >= 2) {
    // Folds run over the training and validation windows; test stays held out.
    WindowedDataset pool = d.train;
    const std::size_t nt = d.train.count(), nv = d.val.count();
    Tensor inputs({nt + nv, pool.window_len, pool.features()});
    Tensor targets({nt + nv, pool.horizon});
    std::copy(d.train.inputs.values().begin(), d.train.inputs.values().end(), inputs.values().begin());
    std::copy(d.val.inputs.values().begin(), d.val.inputs.values().end(),
              inputs.values().begin() + static_cast<std::ptrdiff_t>(d.train.inputs.size()));
    std::copy(d.train.targets.values().begin(), d.train.targets.values().end(), targets.values().begin());
    std::copy(d.val.targets.values().begin(), d.val.targets.values().end(),
              targets.values().begin() + static_cast<std::ptrdiff_t>(d.train.targets.size()));
    pool.inputs = std::move(inputs);
    pool.targets = std::move(targets);
    pool.target_start.insert(pool.target_start.end(), d.val.target_start.begin(), d.val.target_start.end());
    HyperParams hp = ck.model.hp;
    hp.seed = config.seed;
    const KFoldResult kf = kfold_cv(pool, config.kfold, hp,
                                    [&](double v) { return d.to_original(v); },
                                    progress(opts, log, "kfold"));
    char buf[200];
    std::snprintf(buf, sizeof buf, "kfold (%zu evaluations): RMSE %.6g +- %.3g  R2 %.6g +- %.3g\n",
                  kf.folds.size(), kf.mean.rmse, kf.stddev.rmse, kf.mean.r2, kf.stddev.r2);
    log << buf;
    report["kfold"] = to_json(kf);
  }
  const fs::path dir = out_dir(opts, config, "evaluate");
  write_file_atomic(dir / "report.json", render_json(report));
  write_file_atomic(dir / "predictions.csv", predictions_csv(prediction_rows(d.test, test)));
}

std::string cmd_predict(const CommandOptions& opts, std::ostream& log) {
  if (!opts.checkpoint) throw ConfigError("predict needs --checkpoint");
  const Checkpoint ck = load_checkpoint(*opts.checkpoint);
  RunConfig config = opts.config ? load_config(*opts.config) : ck.config;
  const std::string path = opts.data ? *opts.data : (!config.data.empty() ? config.data : ck.config.data);
  if (path.empty()) throw ConfigError("no input data: pass --data or set `data` in the config");
  const auto input = load_frame(path, ck.config, log);
  const auto [cleaned, cleaning] = clean(input.frame, ck.config.cleaning);
  const std::size_t w = ck.model.hp.window_len;
  if (cleaned.rows() < w) {
    throw DataError("predict needs at least " + std::to_string(w) + " rows after cleaning, got " +
                    std::to_string(cleaned.rows()));
  }
  const TimeSeriesFrame tail = cleaned.slice(cleaned.rows() - w, cleaned.rows());
  const Tensor forecast = predict(ck.model, ck.scaler, ck.encoder, ck.feature_columns, tail);

  const Date last = tail.dates.back();
  std::string csv = "date," + ck.config.target + "\n";
  char buf[64];
  for (std::size_t h = 0; h < forecast.size(); ++h) {
    std::snprintf(buf, sizeof buf, ",%.17g\n", forecast[h]);
    csv += last.plus_days(static_cast<std::int32_t>(h + 1)).to_string() + buf;
  }
  const fs::path dir = out_dir(opts, config, "predict");
  write_file_atomic(dir / "forecast.csv", csv);
  return csv;
}

void cmd_synth(const std::string& kind, std::size_t rows, std::uint64_t seed,
               const std::string& out_path) {
  write_file_atomic(out_path, synth_generate(parse_synth_kind(kind), rows, seed));
}

}  // namespace forecast
