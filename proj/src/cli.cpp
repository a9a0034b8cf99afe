// Command bodies, document plumbing and plot export for the rmode-toa tool.

#include "rmode/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rmode/errors.hpp"
#include "rmode/model.hpp"
#include "model_json.hpp"
#include "num_text.hpp"

namespace fs = std::filesystem;

namespace rmode::cli {

namespace {

using detail::format_double;

std::string fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

// File names derive from transmitter ids; keep them filesystem-safe.
std::string sanitize_id(const std::string& id) {
  std::string out;
  out.reserve(id.size());
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    out.push_back(ok ? c : '_');
  }
  return out;
}

nlohmann::json parse_json_stream(std::istream& in, const char* what) {
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

}  // namespace

int run_guarded(const std::function<void()>& body, std::ostream& err) {
  try {
    body();
    return kExitOk;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const IdentifiabilityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIdentifiability;
  } catch (const ModelUseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitModelUse;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitFailure;
  }
}

std::string render_log(const std::vector<ingest::RawPhaseSeries>& series,
                       const std::optional<std::string>& origin) {
  std::ostringstream out;
  if (origin) out << "# origin=" << *origin << "\n";
  out << ingest::LogSchema{}.header() << "\n";
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.epochs_s.size(); ++k) {
      out << format_double(s.epochs_s[k]) << ',' << s.transmitter_id << ','
          << format_double(s.phase_rad[k]) << ',' << format_double(s.snr_db[k]) << "\n";
    }
  }
  return out.str();
}

void atomic_write(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path + ": " +
                             ec.message());
  }
}

SampleSet collect_samples(const std::string& measurements_path,
                          const std::string& config_path, const WindowOptions& opts) {
  const auto parsed = ingest::parse_log_file(measurements_path);
  const auto config = ingest::load_config_file(config_path);

  SampleSet out;
  for (const auto& raw : parsed.series) {
    const auto* t = ingest::find_transmitter(config, raw.transmitter_id);
    if (t == nullptr) {
      throw ParseError("measurement log references transmitter '" + raw.transmitter_id +
                       "' which is not in the config");
    }
    const auto cont = phase::unwrap_phase(raw, phase::UnwrapConfig{opts.max_gap_s});
    const auto toa = phase::phase_to_toa(cont, t->wavelength_m, std::nullopt);
    phase::WindowConfig wcfg;
    wcfg.window_len = opts.window_len;
    wcfg.max_snr_spread_db = opts.max_snr_spread_db;
    const auto windowed = phase::windowed_variance(toa, wcfg);

    out.samples.insert(out.samples.end(), windowed.samples.begin(), windowed.samples.end());
    out.diagnostics.windows_total += windowed.diagnostics.windows_total;
    out.diagnostics.windows_used += windowed.diagnostics.windows_used;
    out.diagnostics.skipped_snr_spread += windowed.diagnostics.skipped_snr_spread;
    out.diagnostics.skipped_segment_boundary +=
        windowed.diagnostics.skipped_segment_boundary;
    out.diagnostics.skipped_nonuniform_epochs +=
        windowed.diagnostics.skipped_nonuniform_epochs;
    out.diagnostics.skipped_nonpositive_snr +=
        windowed.diagnostics.skipped_nonpositive_snr;
    out.diagnostics.nominal_epoch_step_s = windowed.diagnostics.nominal_epoch_step_s;
    out.wavelength_m = t->wavelength_m;
  }
  return out;
}

void write_fit_document(const fit::FitResult& result, const FitOptions& opts,
                        std::ostream& out) {
  nlohmann::json doc;
  doc["model"] = model::detail::model_to_json(result.model);
  doc["fit"]["rss_m4"] = result.rss;
  doc["fit"]["n_samples"] = result.n_samples;
  doc["fit"]["solver"] = fit::to_string(result.solver);
  doc["fit"]["residual_space"] = fit::to_string(result.residual_space);
  doc["fit"]["identifiability"] = fit::to_string(result.identifiability);
  doc["fit"]["per_transmitter_rss_m4"] = nlohmann::json::object();
  for (const auto& [id, value] : result.per_transmitter_rss) {
    doc["fit"]["per_transmitter_rss_m4"][id] = value;
  }
  doc["config"]["window_len"] = opts.window.window_len;
  doc["config"]["max_snr_spread_db"] = opts.window.max_snr_spread_db;
  doc["config"]["max_gap_s"] = opts.window.max_gap_s;
  doc["config"]["weights"] = fit::to_string(opts.weight_mode);
  doc["config"]["residual_space"] = fit::to_string(opts.residual_space);
  doc["config"]["snr_convention"] = to_string(opts.snr_convention);
  out << doc.dump(2) << "\n";
}

model::VarianceModel read_model_document(std::istream& in) {
  const nlohmann::json doc = parse_json_stream(in, "model document");
  if (doc.is_object() && doc.contains("model")) {
    return model::detail::model_from_json(doc["model"]);
  }
  return model::detail::model_from_json(doc);
}

model::VarianceModel read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model document: " + path);
  return read_model_document(in);
}

PlotExport build_plot_export(const model::VarianceModel& model,
                             const std::vector<phase::VarianceSample>& samples,
                             int curve_points) {
  if (curve_points < 2) {
    throw std::invalid_argument("build_plot_export: need at least 2 curve points");
  }
  if (samples.empty()) {
    throw std::invalid_argument("build_plot_export: no samples");
  }

  std::map<std::string, PlotSeries> scatter;
  for (const auto& s : samples) {
    auto& series = scatter[s.transmitter_id];
    series.transmitter_id = s.transmitter_id;
    series.snr_db.push_back(linear_to_db(s.snr_linear));
    series.variance_m2.push_back(s.variance_m2);
  }

  PlotExport plot;
  for (auto& [id, series] : scatter) {
    double db_min = series.snr_db.front();
    double db_max = series.snr_db.front();
    for (double db : series.snr_db) {
      db_min = std::min(db_min, db);
      db_max = std::max(db_max, db);
    }

    PlotSeries curve;
    curve.transmitter_id = id;
    if (db_min == db_max) {
      curve.snr_db.push_back(db_min);
      curve.variance_m2.push_back(
          model::predict_variance(model, id, db_to_linear(db_min)));
    } else {
      const double step = (db_max - db_min) / static_cast<double>(curve_points - 1);
      for (int k = 0; k < curve_points; ++k) {
        // Curve y-values come straight from predict_variance so that what is
        // plotted is the model, not a re-derivation of it.
        const double db = (k == curve_points - 1) ? db_max : db_min + step * k;
        curve.snr_db.push_back(db);
        curve.variance_m2.push_back(model::predict_variance(model, id, db_to_linear(db)));
      }
    }
    plot.curve.push_back(std::move(curve));
    plot.scatter.push_back(std::move(series));
  }

  plot.metadata.emplace_back("c_const", format_double(model.c_const));
  for (const auto& [id, j] : model.jitter) {
    plot.metadata.emplace_back("jitter_" + sanitize_id(id), format_double(j));
  }
  plot.metadata.emplace_back("snr_convention", to_string(model.snr_convention));
  plot.metadata.emplace_back("unit", model::to_string(model.unit));
  return plot;
}

namespace {

std::string plot_csv(const PlotSeries& series,
                     const std::vector<std::pair<std::string, std::string>>& metadata) {
  std::ostringstream out;
  for (const auto& [key, value] : metadata) out << "# " << key << "=" << value << "\n";
  out << "snr_db,variance_m2\n";
  for (std::size_t k = 0; k < series.snr_db.size(); ++k) {
    out << format_double(series.snr_db[k]) << ',' << format_double(series.variance_m2[k])
        << "\n";
  }
  return out.str();
}

}  // namespace

std::vector<std::string> write_plot_export(const PlotExport& plot,
                                           const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::vector<std::string> paths;
  for (const auto& series : plot.scatter) {
    const auto path =
        (fs::path(out_dir) / ("scatter_" + sanitize_id(series.transmitter_id) + ".csv"))
            .string();
    atomic_write(path, plot_csv(series, plot.metadata));
    paths.push_back(path);
  }
  for (const auto& series : plot.curve) {
    const auto path =
        (fs::path(out_dir) / ("curve_" + sanitize_id(series.transmitter_id) + ".csv"))
            .string();
    atomic_write(path, plot_csv(series, plot.metadata));
    paths.push_back(path);
  }
  return paths;
}

void cmd_simulate(const std::string& truth_path, const std::string& out_csv,
                  std::ostream& out, std::ostream& err) {
  const auto truth = synth::load_truth_file(truth_path);
  for (const auto& warning : synth::noise_warnings(truth)) {
    err << "warning: " << warning << "\n";
  }
  const auto series = synth::generate(truth);
  atomic_write(out_csv, render_log(series, truth.origin));

  const std::string sidecar = out_csv + ".truth.json";
  std::ostringstream truth_text;
  synth::write_truth(truth, truth_text);
  atomic_write(sidecar, truth_text.str());

  std::uint64_t epochs = 0;
  for (const auto& seg : truth.snr_profile) epochs += seg.epochs;
  out << "simulate: " << epochs << " epochs x " << series.size()
      << " transmitters (seed " << truth.rng_seed << ")\n";
  out << "log written to: " << out_csv << "\n";
  out << "truth sidecar written to: " << sidecar << "\n";
}

void cmd_fit(const std::string& measurements_path, const std::string& config_path,
             const std::string& model_out_path, const std::string& plot_dir,
             const FitOptions& opts, std::ostream& out) {
  const auto set = collect_samples(measurements_path, config_path, opts.window);
  if (set.samples.empty()) {
    const auto& d = set.diagnostics;
    throw ParseError(
        "no variance samples survived windowing (windows: " +
        std::to_string(d.windows_total) + " total, " +
        std::to_string(d.skipped_snr_spread) + " snr spread, " +
        std::to_string(d.skipped_segment_boundary) + " segment boundary, " +
        std::to_string(d.skipped_nonuniform_epochs) + " non-uniform epochs)");
  }

  fit::FitInput input;
  input.samples = set.samples;
  input.weights = fit::make_weights(set.samples, opts.weight_mode);
  fit::FitConfig fit_cfg;
  fit_cfg.residual_space = opts.residual_space;
  fit_cfg.snr_convention = opts.snr_convention;
  const auto result = fit::fit_model(input, fit_cfg);

  std::ostringstream doc;
  write_fit_document(result, opts, doc);
  atomic_write(model_out_path, doc.str());

  auto plot = build_plot_export(result.model, set.samples);
  plot.metadata.emplace_back("window_len", std::to_string(opts.window.window_len));
  plot.metadata.emplace_back("max_snr_spread_db",
                             format_double(opts.window.max_snr_spread_db));
  plot.metadata.emplace_back("max_gap_s", format_double(opts.window.max_gap_s));
  plot.metadata.emplace_back("weights", fit::to_string(opts.weight_mode));
  plot.metadata.emplace_back("residual_space", fit::to_string(opts.residual_space));
  plot.metadata.emplace_back("solver", fit::to_string(result.solver));
  const auto plot_paths = write_plot_export(plot, plot_dir);

  const auto& d = set.diagnostics;
  out << "fit: " << result.n_samples << " variance samples from "
      << result.model.jitter.size() << " transmitters (windows used " << d.windows_used
      << " of " << d.windows_total << ")\n";
  out << "  C = " << fixed6(result.model.c_const) << "\n";
  for (const auto& [id, j] : result.model.jitter) {
    out << "  J[" << id << "] = " << fixed6(j) << "\n";
  }
  out << "  rss = " << format_double(result.rss) << " m^4 (solver "
      << fit::to_string(result.solver) << ", residual space "
      << fit::to_string(result.residual_space) << ", identifiability "
      << fit::to_string(result.identifiability) << ")\n";
  out << "model written to: " << model_out_path << "\n";
  for (const auto& path : plot_paths) out << "plot written to: " << path << "\n";
}

void cmd_predict(const std::string& model_path, const std::string& transmitter_id,
                 std::optional<double> snr_db, std::optional<double> snr_linear,
                 std::ostream& out) {
  if (snr_db.has_value() == snr_linear.has_value()) {
    throw ParseError("predict needs exactly one of --snr-db and --snr-linear");
  }
  const auto model = read_model_file(model_path);

  const double variance = snr_db ? model::predict_from_db(model, transmitter_id, *snr_db)
                                 : model::predict_from_linear(model, transmitter_id,
                                                              *snr_linear);
  const double sigma = std::sqrt(variance);

  const auto to_unit = [&](double value, model::SigmaUnit unit, bool is_variance) {
    return model::convert_sigma_units(value, model.unit, unit, is_variance);
  };

  out << "transmitter: " << transmitter_id << "\n";
  if (snr_db) {
    out << "snr: " << format_double(*snr_db) << " dB\n";
  } else {
    out << "snr: " << format_double(*snr_linear) << " (linear ratio)\n";
  }
  out << "sigma^2 = " << format_double(to_unit(variance, model::SigmaUnit::kMeters, true))
      << " m^2 (" << format_double(to_unit(variance, model::SigmaUnit::kNanoseconds, true))
      << " ns^2)\n";
  out << "sigma = " << format_double(to_unit(sigma, model::SigmaUnit::kMeters, false))
      << " m (" << format_double(to_unit(sigma, model::SigmaUnit::kNanoseconds, false))
      << " ns)\n";
}

void cmd_unwrap(const std::string& measurements_path, const std::string& out_csv,
                double max_gap_s, std::ostream& out) {
  const auto parsed = ingest::parse_log_file(measurements_path);

  std::ostringstream text;
  if (parsed.origin) text << "# origin=" << *parsed.origin << "\n";
  text << "epoch_s,transmitter_id,phase_cont_rad,snr_db\n";
  std::ostringstream summary;
  for (const auto& raw : parsed.series) {
    const auto cont = phase::unwrap_phase(raw, phase::UnwrapConfig{max_gap_s});
    for (std::size_t k = 0; k < cont.epochs_s.size(); ++k) {
      text << format_double(cont.epochs_s[k]) << ',' << cont.transmitter_id << ','
           << format_double(cont.phase_cont_rad[k]) << ','
           << format_double(cont.snr_db[k]) << "\n";
    }
    summary << "unwrap: " << cont.transmitter_id << ": " << cont.epochs_s.size()
            << " samples, " << cont.segment_starts.size() << " segment(s)\n";
  }
  atomic_write(out_csv, text.str());
  out << summary.str();
  out << "unwrapped log written to: " << out_csv << "\n";
}

void cmd_export_plot(const std::string& model_path, const std::string& measurements_path,
                     const std::string& config_path, const std::string& out_dir,
                     const WindowOptions& opts, std::ostream& out) {
  const auto model = read_model_file(model_path);
  const auto set = collect_samples(measurements_path, config_path, opts);
  if (set.samples.empty()) {
    throw ParseError("no variance samples survived windowing; nothing to plot");
  }

  auto plot = build_plot_export(model, set.samples);
  plot.metadata.emplace_back("window_len", std::to_string(opts.window_len));
  plot.metadata.emplace_back("max_snr_spread_db", format_double(opts.max_snr_spread_db));
  plot.metadata.emplace_back("max_gap_s", format_double(opts.max_gap_s));
  const auto paths = write_plot_export(plot, out_dir);
  for (const auto& path : paths) out << "plot written to: " << path << "\n";
}

}  // namespace rmode::cli
