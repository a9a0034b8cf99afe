// rmode-toa: fit and apply TOA variance models for medium-frequency ranging
// receivers.  Subcommands: simulate, fit, predict, unwrap, export-plot.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rmode/cli.hpp"

namespace {

std::string default_plot_dir(const std::string& model_out, const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  const auto parent = std::filesystem::path(model_out).parent_path();
  return parent.empty() ? std::string(".") : parent.string();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rmode;

  CLI::App app{"TOA variance model toolkit for medium-frequency ranging logs"};
  app.require_subcommand(1);
  int exit_code = cli::kExitOk;

  // simulate
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic measurement log");
  std::string sim_truth, sim_out;
  simulate->add_option("--truth", sim_truth, "truth JSON file")->required();
  simulate->add_option("--out", sim_out, "output measurement CSV")->required();
  simulate->callback([&] {
    exit_code = cli::run_guarded(
        [&] { cli::cmd_simulate(sim_truth, sim_out, std::cout, std::cerr); }, std::cerr);
  });

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit the variance model to a measurement log");
  std::string fit_measurements, fit_config, fit_out, fit_plot_dir;
  std::size_t fit_window_len = 300;
  double fit_spread = 3.0, fit_gap = 10.0;
  std::string fit_space = "variance", fit_weights = "uniform",
              fit_convention = "db-converted-to-linear";
  fit_cmd->add_option("--measurements", fit_measurements, "measurement CSV")->required();
  fit_cmd->add_option("--config", fit_config, "transmitter config JSON")->required();
  fit_cmd->add_option("--out", fit_out, "output model JSON")->required();
  fit_cmd->add_option("--plot-dir", fit_plot_dir,
                      "plot export directory (default: directory of --out)");
  fit_cmd->add_option("--window-len", fit_window_len, "samples per variance window")->capture_default_str();
  fit_cmd->add_option("--max-snr-spread-db", fit_spread,
                      "max SNR spread tolerated inside a window (dB)")->capture_default_str();
  fit_cmd->add_option("--max-gap-s", fit_gap,
                      "epoch gap that restarts phase unwrapping (s)")->capture_default_str();
  fit_cmd->add_option("--residual-space", fit_space, "variance | sigma")->capture_default_str();
  fit_cmd->add_option("--weights", fit_weights,
                      "uniform | window_len | inverse_variance")->capture_default_str();
  fit_cmd->add_option("--snr-convention", fit_convention,
                      "db-converted-to-linear | linear")->capture_default_str();
  fit_cmd->callback([&] {
    exit_code = cli::run_guarded(
        [&] {
          cli::FitOptions opts;
          opts.window.window_len = fit_window_len;
          opts.window.max_snr_spread_db = fit_spread;
          opts.window.max_gap_s = fit_gap;
          opts.residual_space = fit::residual_space_from_string(fit_space);
          opts.weight_mode = fit::weight_mode_from_string(fit_weights);
          opts.snr_convention = snr_convention_from_string(fit_convention);
          cli::cmd_fit(fit_measurements, fit_config, fit_out,
                       default_plot_dir(fit_out, fit_plot_dir), opts, std::cout);
        },
        std::cerr);
  });

  // predict
  auto* predict = app.add_subcommand("predict", "predict TOA variance from a fitted model");
  std::string pred_model, pred_id;
  double pred_db = 0.0, pred_linear = 0.0;
  auto* opt_db = predict->add_option("--snr-db", pred_db, "SNR in dB");
  auto* opt_linear = predict->add_option("--snr-linear", pred_linear, "SNR as a ratio");
  opt_db->excludes(opt_linear);
  opt_linear->excludes(opt_db);
  predict->add_option("--model", pred_model, "model JSON from fit")->required();
  predict->add_option("--transmitter", pred_id, "transmitter id")->required();
  predict->callback([&] {
    exit_code = cli::run_guarded(
        [&] {
          std::optional<double> db, linear;
          if (opt_db->count() > 0) db = pred_db;
          if (opt_linear->count() > 0) linear = pred_linear;
          cli::cmd_predict(pred_model, pred_id, db, linear, std::cout);
        },
        std::cerr);
  });

  // unwrap
  auto* unwrap = app.add_subcommand("unwrap", "unwrap a measurement log to continuous phase");
  std::string unwrap_measurements, unwrap_out;
  double unwrap_gap = 10.0;
  unwrap->add_option("--measurements", unwrap_measurements, "measurement CSV")->required();
  unwrap->add_option("--out", unwrap_out, "output CSV with continuous phase")->required();
  unwrap->add_option("--max-gap-s", unwrap_gap,
                     "epoch gap that restarts phase unwrapping (s)")->capture_default_str();
  unwrap->callback([&] {
    exit_code = cli::run_guarded(
        [&] { cli::cmd_unwrap(unwrap_measurements, unwrap_out, unwrap_gap, std::cout); },
        std::cerr);
  });

  // export-plot
  auto* export_plot =
      app.add_subcommand("export-plot", "export scatter and model curve CSVs");
  std::string plot_model, plot_measurements, plot_config, plot_dir;
  std::size_t plot_window_len = 300;
  double plot_spread = 3.0, plot_gap = 10.0;
  export_plot->add_option("--model", plot_model, "model JSON from fit")->required();
  export_plot->add_option("--measurements", plot_measurements, "measurement CSV")->required();
  export_plot->add_option("--config", plot_config, "transmitter config JSON")->required();
  export_plot->add_option("--out-dir", plot_dir, "output directory")->required();
  export_plot->add_option("--window-len", plot_window_len, "samples per variance window")
      ->capture_default_str();
  export_plot->add_option("--max-snr-spread-db", plot_spread,
                          "max SNR spread tolerated inside a window (dB)")->capture_default_str();
  export_plot->add_option("--max-gap-s", plot_gap,
                          "epoch gap that restarts phase unwrapping (s)")->capture_default_str();
  export_plot->callback([&] {
    exit_code = cli::run_guarded(
        [&] {
          cli::WindowOptions opts;
          opts.window_len = plot_window_len;
          opts.max_snr_spread_db = plot_spread;
          opts.max_gap_s = plot_gap;
          cli::cmd_export_plot(plot_model, plot_measurements, plot_config, plot_dir, opts,
                               std::cout);
        },
        std::cerr);
  });

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}
