#include <doctest.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rmode/cli.hpp"
#include "rmode/errors.hpp"
#include "rmode/model.hpp"
#include "rmode/units.hpp"
#include "support/proc.hpp"

using namespace rmode;
using testsupport::read_file;
using testsupport::run_cmd;
using testsupport::TempDir;
using testsupport::toa_binary;
using testsupport::write_file;

namespace {

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  REQUIRE(result.ec == std::errc());
  return value;
}

// Parses "a,b" data rows of a two-column csv, skipping comments and header.
std::vector<std::pair<double, double>> read_plot_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line == "snr_db,variance_m2") continue;
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    rows.emplace_back(parse_number(std::string_view(line).substr(0, comma)),
                      parse_number(std::string_view(line).substr(comma + 1)));
  }
  return rows;
}

const std::string kTruthJson = R"({
  "transmitters": [{"id": "PALMI", "jitter_m": 0.0}, {"id": "CHUNGJU", "jitter_m": 2.65}],
  "c_const_m": 23.75,
  "snr_profile": [{"epochs": 1800, "snr_db": 10.0}, {"epochs": 1800, "snr_db": 20.0}],
  "wavelength_m": 1000.0,
  "epoch_step_s": 1.0,
  "rng_seed": 4242,
  "origin": "2025-07-01T00:00:00Z"
})";

const std::string kConfigJson = R"({"transmitters": [
  {"id": "PALMI", "name": "Palmi", "carrier_frequency_hz": 299792.458},
  {"id": "CHUNGJU", "name": "Chungju", "carrier_frequency_hz": 299792.458}
]})";

model::VarianceModel reference_model() {
  model::VarianceModel m;
  m.jitter = {{"PALMI", 0.0}, {"CHUNGJU", 2.65}};
  m.c_const = 23.75;
  return m;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("render_log and parse_log round trip every bit") {
  ingest::RawPhaseSeries a;
  a.transmitter_id = "PALMI";
  a.epochs_s = {0.0, 0.1, 0.2, 0.3};
  a.phase_rad = {0.0, 1e-10, 0.1 + 0.2, std::nextafter(kTwoPi, 0.0)};
  a.snr_db = {-3.7, 40.123456789012345, 0.0, 12.5};

  ingest::RawPhaseSeries b;
  b.transmitter_id = "B-2";
  b.epochs_s = {0.05, 1.15};
  b.phase_rad = {6.2831853071795, 2.6500000000000004};
  b.snr_db = {33.3, 33.4};

  const auto rendered = cli::render_log({a, b}, std::string("2025-01-02T03:04:05Z"));
  std::istringstream in(rendered);
  const auto parsed = ingest::parse_log(in);

  REQUIRE(parsed.origin.has_value());
  CHECK(*parsed.origin == "2025-01-02T03:04:05Z");
  REQUIRE(parsed.series.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& want = (k == 0) ? a : b;
    const auto& got = parsed.series[k];
    CHECK(got.transmitter_id == want.transmitter_id);
    CHECK(got.epochs_s == want.epochs_s);
    CHECK(got.phase_rad == want.phase_rad);
    CHECK(got.snr_db == want.snr_db);
  }

  // Without an origin no comment line is emitted.
  const auto plain = cli::render_log({a});
  CHECK(plain.rfind("epoch_s,", 0) == 0);
}

TEST_CASE("atomic_write creates parents, replaces files, and leaves no temps") {
  TempDir dir("atomic");
  const auto nested = dir.file("deep/nested/out.txt");
  cli::atomic_write(nested, "first");
  CHECK(read_file(nested) == "first");

  cli::atomic_write(nested, "second");
  CHECK(read_file(nested) == "second");
  CHECK_FALSE(std::filesystem::exists(nested + ".tmp"));

  // A parent that is a regular file cannot be created as a directory.
  write_file(dir.file("blocker"), "x");
  CHECK_THROWS_AS(cli::atomic_write(dir.file("blocker/child.txt"), "nope"),
                  std::runtime_error);
}

TEST_CASE("run_guarded maps exception types onto stable exit codes") {
  std::ostringstream err;
  CHECK(cli::run_guarded([] {}, err) == cli::kExitOk);
  CHECK(cli::run_guarded([] { throw ParseError("bad line"); }, err) == cli::kExitInput);
  CHECK(cli::run_guarded([] { throw IdentifiabilityError("flat"); }, err) ==
        cli::kExitIdentifiability);
  CHECK(cli::run_guarded([] { throw ModelUseError("wrong snr kind"); }, err) ==
        cli::kExitModelUse);
  CHECK(cli::run_guarded([] { throw std::invalid_argument("shape"); }, err) ==
        cli::kExitInput);
  CHECK(cli::run_guarded([] { throw std::runtime_error("disk on fire"); }, err) ==
        cli::kExitFailure);
  const auto messages = err.str();
  CHECK(messages.find("error: bad line") != std::string::npos);
  CHECK(messages.find("internal error: disk on fire") != std::string::npos);
}

TEST_CASE("fit documents carry the model, fit stats, and echoed config") {
  fit::FitResult result;
  result.model = reference_model();
  result.rss = 12.5;
  result.n_samples = 24;
  result.per_transmitter_rss = {{"PALMI", 4.5}, {"CHUNGJU", 8.0}};
  result.solver = fit::Solver::kNnls;
  result.residual_space = fit::ResidualSpace::kVariance;

  cli::FitOptions opts;
  opts.weight_mode = fit::WeightMode::kInverseVariance;

  std::stringstream buf;
  cli::write_fit_document(result, opts, buf);

  const auto doc = nlohmann::json::parse(buf.str());
  CHECK(doc["model"]["c_const"].get<double>() == 23.75);
  CHECK(doc["model"]["jitter"]["CHUNGJU"].get<double>() == 2.65);
  CHECK(doc["fit"]["rss_m4"].get<double>() == 12.5);
  CHECK(doc["fit"]["n_samples"].get<std::size_t>() == 24);
  CHECK(doc["fit"]["solver"] == "nnls");
  CHECK(doc["fit"]["identifiability"] == "ok");
  CHECK(doc["fit"]["per_transmitter_rss_m4"]["PALMI"].get<double>() == 4.5);
  CHECK(doc["config"]["window_len"].get<std::size_t>() == 300);
  CHECK(doc["config"]["max_snr_spread_db"].get<double>() == 3.0);
  CHECK(doc["config"]["max_gap_s"].get<double>() == 10.0);
  CHECK(doc["config"]["weights"] == "inverse_variance");
  CHECK(doc["config"]["residual_space"] == "variance");
  CHECK(doc["config"]["snr_convention"] == "db-converted-to-linear");

  // The model reads back from a fit document and from a bare model alike.
  buf.clear();
  buf.seekg(0);
  const auto from_fit_doc = cli::read_model_document(buf);
  CHECK(from_fit_doc.c_const == 23.75);
  CHECK(from_fit_doc.jitter.at("CHUNGJU") == 2.65);

  std::stringstream bare;
  model::write_model(result.model, bare);
  const auto from_bare = cli::read_model_document(bare);
  CHECK(from_bare.c_const == 23.75);
  CHECK(from_bare.jitter.at("PALMI") == 0.0);

  CHECK_THROWS_WITH_AS(cli::read_model_file("/nonexistent/model.json"),
                       doctest::Contains("cannot open"), ParseError);
}

TEST_CASE("plot export mirrors the samples and the model exactly") {
  const auto m = reference_model();

  std::vector<phase::VarianceSample> samples;
  const auto add = [&samples](const char* id, double snr_linear, double v) {
    phase::VarianceSample s;
    s.transmitter_id = id;
    s.snr_linear = snr_linear;
    s.variance_m2 = v;
    samples.push_back(s);
  };
  add("PALMI", 10.0, 56.0);
  add("PALMI", 100.0, 5.7);
  add("CHUNGJU", 10.0, 63.0);
  add("CHUNGJU", 31.622776601683793, 25.0);

  const auto plot = cli::build_plot_export(m, samples, 50);
  REQUIRE(plot.scatter.size() == 2);  // sorted by id: CHUNGJU, PALMI
  REQUIRE(plot.curve.size() == 2);
  CHECK(plot.scatter[0].transmitter_id == "CHUNGJU");
  CHECK(plot.scatter[1].transmitter_id == "PALMI");

  // Scatter is the samples, converted to dB, in input order per transmitter.
  CHECK(plot.scatter[1].snr_db ==
        std::vector<double>{linear_to_db(10.0), linear_to_db(100.0)});
  CHECK(plot.scatter[1].variance_m2 == std::vector<double>{56.0, 5.7});

  for (const auto& curve : plot.curve) {
    REQUIRE(curve.snr_db.size() == 50);
    // The curve spans exactly the transmitter's scatter range in dB.
    const auto& scatter = curve.transmitter_id == "PALMI" ? plot.scatter[1]
                                                          : plot.scatter[0];
    const double db_min = *std::min_element(scatter.snr_db.begin(), scatter.snr_db.end());
    const double db_max = *std::max_element(scatter.snr_db.begin(), scatter.snr_db.end());
    CHECK(curve.snr_db.front() == db_min);
    CHECK(curve.snr_db.back() == db_max);
    // Every curve point is the model's own prediction, bit for bit.
    for (std::size_t k = 0; k < curve.snr_db.size(); ++k) {
      CHECK(curve.variance_m2[k] ==
            model::predict_variance(m, curve.transmitter_id,
                                    db_to_linear(curve.snr_db[k])));
    }
  }

  bool has_c = false, has_jitter = false, has_unit = false;
  for (const auto& [key, value] : plot.metadata) {
    if (key == "c_const" && value == "23.75") has_c = true;
    if (key == "jitter_CHUNGJU" && value == "2.65") has_jitter = true;
    if (key == "unit" && value == "meters") has_unit = true;
  }
  CHECK(has_c);
  CHECK(has_jitter);
  CHECK(has_unit);

  CHECK_THROWS_AS(cli::build_plot_export(m, {}, 50), std::invalid_argument);
  CHECK_THROWS_AS(cli::build_plot_export(m, samples, 1), std::invalid_argument);
}

TEST_CASE("a transmitter stuck at one snr gets a single-point curve") {
  model::VarianceModel m;
  m.jitter = {{"ONLY", 1.0}};
  m.c_const = 5.0;

  phase::VarianceSample s;
  s.transmitter_id = "ONLY";
  s.snr_linear = 10.0;
  s.variance_m2 = 3.5;

  const auto plot = cli::build_plot_export(m, {s, s}, 200);
  REQUIRE(plot.curve.size() == 1);
  CHECK(plot.curve[0].snr_db.size() == 1);
  CHECK(plot.curve[0].variance_m2[0] == model::predict_variance(m, "ONLY", 10.0));
}

TEST_CASE("plot files round trip the numbers and sanitize file names") {
  TempDir dir("plots");
  model::VarianceModel m;
  m.jitter = {{"weird id/7", 0.5}};
  m.c_const = 4.0;

  std::vector<phase::VarianceSample> samples;
  phase::VarianceSample s;
  s.transmitter_id = "weird id/7";
  for (double snr : {2.0, 5.0, 17.3, 100.0}) {
    s.snr_linear = snr;
    s.variance_m2 = 16.0 / snr + 0.25;
    samples.push_back(s);
  }

  const auto plot = cli::build_plot_export(m, samples, 37);
  const auto paths = cli::write_plot_export(plot, dir.file("out"));
  REQUIRE(paths.size() == 2);
  CHECK(paths[0] == dir.file("out/scatter_weird_id_7.csv"));
  CHECK(paths[1] == dir.file("out/curve_weird_id_7.csv"));

  const auto scatter_rows = read_plot_csv(paths[0]);
  REQUIRE(scatter_rows.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(scatter_rows[k].first == plot.scatter[0].snr_db[k]);
    CHECK(scatter_rows[k].second == plot.scatter[0].variance_m2[k]);
  }

  const auto curve_rows = read_plot_csv(paths[1]);
  REQUIRE(curve_rows.size() == 37);
  for (std::size_t k = 0; k < curve_rows.size(); ++k) {
    CHECK(curve_rows[k].first == plot.curve[0].snr_db[k]);
    CHECK(curve_rows[k].second == plot.curve[0].variance_m2[k]);
  }

  const auto text = read_file(paths[1]);
  CHECK(text.find("# c_const=4\n") != std::string::npos);
  CHECK(text.find("snr_db,variance_m2\n") != std::string::npos);
}

TEST_CASE("collect_samples windows each configured transmitter") {
  TempDir dir("collect");
  std::string log = "epoch_s,transmitter_id,phase_rad,snr_db\n";
  for (int k = 0; k < 10; ++k) {
    log += std::to_string(k) + ".0,A,1.0,40.0\n";
  }
  // B has an outage between samples 2 and 3, so its first window straddles a
  // restart and must be dropped.
  const double b_epochs[] = {0, 1, 2, 50, 51, 52, 53, 54, 55, 56};
  for (double e : b_epochs) {
    log += std::to_string(static_cast<int>(e)) + ".0,B,2.0,35.0\n";
  }
  write_file(dir.file("log.csv"), log);
  write_file(dir.file("config.json"), R"({"transmitters": [
    {"id": "A", "carrier_frequency_hz": 299792458.0},
    {"id": "B", "carrier_frequency_hz": 299792458.0}
  ]})");

  cli::WindowOptions opts;
  opts.window_len = 5;
  const auto set = cli::collect_samples(dir.file("log.csv"), dir.file("config.json"), opts);

  CHECK(set.wavelength_m == 1.0);
  CHECK(set.diagnostics.windows_total == 4);
  CHECK(set.diagnostics.windows_used == 3);
  CHECK(set.diagnostics.skipped_segment_boundary == 1);
  REQUIRE(set.samples.size() == 3);
  CHECK(set.samples[0].transmitter_id == "A");
  CHECK(set.samples[0].variance_m2 == 0.0);
  CHECK(set.samples[2].transmitter_id == "B");
  CHECK(set.samples[2].window_start_s == 52.0);

  write_file(dir.file("ghost.csv"),
             "epoch_s,transmitter_id,phase_rad,snr_db\n0.0,GHOST,1.0,40.0\n");
  CHECK_THROWS_WITH_AS(
      cli::collect_samples(dir.file("ghost.csv"), dir.file("config.json"), opts),
      doctest::Contains("not in the config"), ParseError);
}

TEST_CASE("simulate, fit, and predict cooperate end to end") {
  TempDir dir("endtoend");
  write_file(dir.file("truth.json"), kTruthJson);
  write_file(dir.file("config.json"), kConfigJson);
  const auto bin = toa_binary();

  const auto sim = run_cmd(bin + " simulate --truth " + dir.file("truth.json") +
                           " --out " + dir.file("log.csv"));
  CHECK(sim.exit_code == 0);
  CHECK(sim.output.find("simulate: 3600 epochs x 2 transmitters (seed 4242)") !=
        std::string::npos);
  REQUIRE(std::filesystem::exists(dir.file("log.csv")));
  CHECK(std::filesystem::exists(dir.file("log.csv.truth.json")));
  CHECK(read_file(dir.file("log.csv")).rfind("# origin=2025-07-01T00:00:00Z\n", 0) == 0);

  // Same truth, second run: the log must be byte-identical.
  const auto rerun = run_cmd(bin + " simulate --truth " + dir.file("truth.json") +
                             " --out " + dir.file("log2.csv"));
  CHECK(rerun.exit_code == 0);
  CHECK(read_file(dir.file("log.csv")) == read_file(dir.file("log2.csv")));

  const auto fitted = run_cmd(bin + " fit --measurements " + dir.file("log.csv") +
                              " --config " + dir.file("config.json") + " --out " +
                              dir.file("model.json") + " --plot-dir " + dir.file("plots") +
                              " --weights inverse_variance");
  CHECK(fitted.exit_code == 0);
  CHECK(fitted.output.find("fit: 24 variance samples from 2 transmitters") !=
        std::string::npos);
  CHECK(fitted.output.find("windows used 24 of 24") != std::string::npos);
  CHECK(fitted.output.find("C = 2") != std::string::npos);
  CHECK(std::filesystem::exists(dir.file("model.json")));
  CHECK(std::filesystem::exists(dir.file("plots/scatter_PALMI.csv")));
  CHECK(std::filesystem::exists(dir.file("plots/curve_CHUNGJU.csv")));

  // The fitted parameters should sit near the truth that generated the log.
  const auto written = cli::read_model_file(dir.file("model.json"));
  CHECK(written.c_const == doctest::Approx(23.75).epsilon(0.10));
  CHECK(written.jitter.at("CHUNGJU") == doctest::Approx(2.65).epsilon(0.25));
  CHECK(written.jitter.at("PALMI") < 1.0);

  const auto predicted = run_cmd(bin + " predict --model " + dir.file("model.json") +
                                 " --transmitter CHUNGJU --snr-db 15");
  CHECK(predicted.exit_code == 0);
  CHECK(predicted.output.find("transmitter: CHUNGJU") != std::string::npos);
  CHECK(predicted.output.find("snr: 15 dB") != std::string::npos);
  CHECK(predicted.output.find("sigma^2 = ") != std::string::npos);
  CHECK(predicted.output.find(" ns)") != std::string::npos);

  const auto exported = run_cmd(bin + " export-plot --model " + dir.file("model.json") +
                                " --measurements " + dir.file("log.csv") + " --config " +
                                dir.file("config.json") + " --out-dir " +
                                dir.file("plots2"));
  CHECK(exported.exit_code == 0);
  CHECK(std::filesystem::exists(dir.file("plots2/curve_PALMI.csv")));
}

TEST_CASE("predict evaluates a hand-written model exactly") {
  TempDir dir("predict");
  write_file(dir.file("model.json"), R"({
    "unit": "meters",
    "snr_convention": "db-converted-to-linear",
    "c_const": 23.75,
    "jitter": {"PALMI": 0.0}
  })");

  const auto result = run_cmd(toa_binary() + " predict --model " + dir.file("model.json") +
                              " --transmitter PALMI --snr-db 0");
  CHECK(result.exit_code == 0);
  // 0 dB is a ratio of exactly 1: sigma^2 = 23.75^2 = 564.0625 exactly.
  CHECK(result.output.find("sigma^2 = 564.0625 m^2") != std::string::npos);
  CHECK(result.output.find("sigma = 23.75 m") != std::string::npos);
}

TEST_CASE("unwrap writes a continuous-phase csv") {
  TempDir dir("unwrap");
  write_file(dir.file("log.csv"),
             "# origin=2025-05-05T00:00:00Z\n"
             "epoch_s,transmitter_id,phase_rad,snr_db\n"
             "0.0,PALMI,0.1,40.0\n"
             "1.0,PALMI,6.2,40.0\n"
             "2.0,PALMI,0.1,40.0\n");

  const auto result = run_cmd(toa_binary() + " unwrap --measurements " +
                              dir.file("log.csv") + " --out " + dir.file("cont.csv"));
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("unwrap: PALMI: 3 samples, 1 segment(s)") != std::string::npos);

  const auto text = read_file(dir.file("cont.csv"));
  CHECK(text.rfind("# origin=2025-05-05T00:00:00Z\n", 0) == 0);
  CHECK(text.find("epoch_s,transmitter_id,phase_cont_rad,snr_db\n") != std::string::npos);
  // The wrapped middle sample comes out one whole cycle down.
  char expect[64];
  const auto middle = 6.2 - kTwoPi;
  const auto [end, ec] = std::to_chars(expect, expect + sizeof(expect), middle);
  REQUIRE(ec == std::errc());
  CHECK(text.find("1,PALMI," + std::string(expect, end) + ",40") != std::string::npos);
}

TEST_CASE("the binary reports failures with the documented exit codes") {
  TempDir dir("exitcodes");
  const auto bin = toa_binary();
  write_file(dir.file("config.json"), kConfigJson);

  // Truncated data row: an input problem.
  write_file(dir.file("bad.csv"),
             "epoch_s,transmitter_id,phase_rad,snr_db\n0.0,PALMI,0.1\n");
  const auto bad_row = run_cmd(bin + " fit --measurements " + dir.file("bad.csv") +
                               " --config " + dir.file("config.json") + " --out " +
                               dir.file("m.json"));
  CHECK(bad_row.exit_code == 2);
  CHECK(bad_row.output.find("error:") != std::string::npos);
  CHECK(bad_row.output.find("line 2") != std::string::npos);

  // A log whose transmitters never change SNR cannot separate J from C.
  std::string flat = "epoch_s,transmitter_id,phase_rad,snr_db\n";
  for (int k = 0; k < 10; ++k) flat += std::to_string(k) + ".0,PALMI,1.0,30.0\n";
  write_file(dir.file("flat.csv"), flat);
  const auto unidentifiable =
      run_cmd(bin + " fit --measurements " + dir.file("flat.csv") + " --config " +
              dir.file("config.json") + " --out " + dir.file("m.json") +
              " --window-len 5");
  CHECK(unidentifiable.exit_code == 3);
  CHECK(unidentifiable.output.find("single SNR level") != std::string::npos);

  // Too little data for even one window: also an input problem, with the
  // windowing diagnostics in the message.
  const auto empty = run_cmd(bin + " fit --measurements " + dir.file("flat.csv") +
                             " --config " + dir.file("config.json") + " --out " +
                             dir.file("m.json") + " --window-len 300");
  CHECK(empty.exit_code == 2);
  CHECK(empty.output.find("no variance samples survived") != std::string::npos);

  write_file(dir.file("model.json"), R"({
    "unit": "meters",
    "snr_convention": "db-converted-to-linear",
    "c_const": 23.75,
    "jitter": {"PALMI": 0.0}
  })");

  // Unknown transmitter and convention mismatch are model-use errors.
  const auto unknown_tx = run_cmd(bin + " predict --model " + dir.file("model.json") +
                                  " --transmitter NOPE --snr-db 10");
  CHECK(unknown_tx.exit_code == 4);
  CHECK(unknown_tx.output.find("no transmitter 'NOPE'") != std::string::npos);

  const auto wrong_kind = run_cmd(bin + " predict --model " + dir.file("model.json") +
                                  " --transmitter PALMI --snr-linear 100");
  CHECK(wrong_kind.exit_code == 4);
  CHECK(wrong_kind.output.find("not a linear ratio") != std::string::npos);

  // Neither snr flag given: rejected as bad input by the command itself.
  const auto no_snr = run_cmd(bin + " predict --model " + dir.file("model.json") +
                              " --transmitter PALMI");
  CHECK(no_snr.exit_code == 2);
  CHECK(no_snr.output.find("exactly one of") != std::string::npos);

  // Both flags: the argument parser refuses before the command runs.
  const auto both_snr = run_cmd(bin + " predict --model " + dir.file("model.json") +
                                " --transmitter PALMI --snr-db 10 --snr-linear 10");
  CHECK(both_snr.exit_code != 0);

  // Bad enum value for --weights.
  const auto bad_weights = run_cmd(bin + " fit --measurements " + dir.file("flat.csv") +
                                   " --config " + dir.file("config.json") + " --out " +
                                   dir.file("m.json") + " --weights bogus");
  CHECK(bad_weights.exit_code == 2);
  CHECK(bad_weights.output.find("unknown weight mode") != std::string::npos);

  // Malformed truth file.
  write_file(dir.file("truth.json"), R"({"transmitters": []})");
  const auto bad_truth = run_cmd(bin + " simulate --truth " + dir.file("truth.json") +
                                 " --out " + dir.file("log.csv"));
  CHECK(bad_truth.exit_code == 2);

  // Missing file.
  const auto missing = run_cmd(bin + " predict --model " + dir.file("nope.json") +
                               " --transmitter PALMI --snr-db 10");
  CHECK(missing.exit_code == 2);
  CHECK(missing.output.find("cannot open") != std::string::npos);

  // Unknown subcommand is a usage error from the parser, not a success.
  CHECK(run_cmd(bin + " frobnicate").exit_code != 0);
}

TEST_CASE("the binary documents itself") {
  const auto help = run_cmd(toa_binary() + " --help");
  CHECK(help.exit_code == 0);
  for (const char* word : {"simulate", "fit", "predict", "unwrap", "export-plot"}) {
    CHECK(help.output.find(word) != std::string::npos);
  }
}

}  // TEST_SUITE
