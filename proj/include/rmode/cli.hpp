#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmode/fit.hpp"
#include "rmode/ingest.hpp"
#include "rmode/phase.hpp"
#include "rmode/synth.hpp"

namespace rmode::cli {

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;         // unexpected internal error
inline constexpr int kExitInput = 2;           // parse / validation problems
inline constexpr int kExitIdentifiability = 3;
inline constexpr int kExitModelUse = 4;

// Runs a command body and maps the library's exceptions onto the exit codes
// above, printing the message to err.
int run_guarded(const std::function<void()>& body, std::ostream& err);

// Windowing knobs shared by `fit` and `export-plot`.
struct WindowOptions {
  std::size_t window_len = 300;
  double max_snr_spread_db = 3.0;
  double max_gap_s = 10.0;
};

struct FitOptions {
  WindowOptions window;
  fit::ResidualSpace residual_space = fit::ResidualSpace::kVariance;
  fit::WeightMode weight_mode = fit::WeightMode::kUniform;
  SnrConvention snr_convention = SnrConvention::kDbToLinear;
};

// Measurement log rendered back to CSV, bit-faithful to the parsed values
// (shortest round-trip formatting).
std::string render_log(const std::vector<ingest::RawPhaseSeries>& series,
                       const std::optional<std::string>& origin = std::nullopt);

// Writes content to path via a temp file plus rename, so readers never see a
// half-written document.
void atomic_write(const std::string& path, const std::string& content);

// Full fit pipeline shared by `fit` and `export-plot`: parse the log, check
// transmitters against the config, unwrap, scale to range, window.
struct SampleSet {
  std::vector<phase::VarianceSample> samples;
  phase::WindowDiagnostics diagnostics;
  double wavelength_m = 0.0;  // of the last series; informational
};
SampleSet collect_samples(const std::string& measurements_path,
                          const std::string& config_path, const WindowOptions& opts);

// Fit output document (JSON): the model, fit metadata, and the configuration
// that produced it (defaults included, so documents are self-describing).
void write_fit_document(const fit::FitResult& result, const FitOptions& opts,
                        std::ostream& out);
// Reads the model back from either a fit document or a bare model document.
model::VarianceModel read_model_document(std::istream& in);
model::VarianceModel read_model_file(const std::string& path);

// Scatter of windowed samples plus the fitted curve sampled at curve_points
// SNRs, uniform in dB across each transmitter's scatter range.  Curve
// variances come from predict_variance on the model itself — never from a
// reimplementation — so file contents match model predictions exactly.
struct PlotSeries {
  std::string transmitter_id;
  std::vector<double> snr_db;
  std::vector<double> variance_m2;
};
struct PlotExport {
  std::vector<PlotSeries> scatter;
  std::vector<PlotSeries> curve;
  std::vector<std::pair<std::string, std::string>> metadata;  // "# key=value" lines
};
PlotExport build_plot_export(const model::VarianceModel& model,
                             const std::vector<phase::VarianceSample>& samples,
                             int curve_points = 200);
// Writes scatter_<id>.csv and curve_<id>.csv into out_dir; returns the paths.
std::vector<std::string> write_plot_export(const PlotExport& plot,
                                           const std::string& out_dir);

// Subcommand bodies.  They throw (ParseError, IdentifiabilityError,
// ModelUseError); main wraps them in run_guarded.
void cmd_simulate(const std::string& truth_path, const std::string& out_csv,
                  std::ostream& out, std::ostream& err);
void cmd_fit(const std::string& measurements_path, const std::string& config_path,
             const std::string& model_out_path, const std::string& plot_dir,
             const FitOptions& opts, std::ostream& out);
void cmd_predict(const std::string& model_path, const std::string& transmitter_id,
                 std::optional<double> snr_db, std::optional<double> snr_linear,
                 std::ostream& out);
void cmd_unwrap(const std::string& measurements_path, const std::string& out_csv,
                double max_gap_s, std::ostream& out);
void cmd_export_plot(const std::string& model_path, const std::string& measurements_path,
                     const std::string& config_path, const std::string& out_dir,
                     const WindowOptions& opts, std::ostream& out);

}  // namespace rmode::cli
