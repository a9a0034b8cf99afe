// Measurement CSV and transmitter config ingestion.

#include "rmode/ingest.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "rmode/errors.hpp"
#include "rmode/units.hpp"
#include "num_text.hpp"

namespace rmode::ingest {

namespace {

using detail::format_double;
using detail::parse_double;
using detail::trim;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

double numeric_field(std::string_view text, const char* column, std::size_t line_no) {
  auto value = parse_double(text);
  if (!value) {
    fail(line_no, std::string("bad ") + column + " value '" + std::string(text) + "'");
  }
  if (!std::isfinite(*value)) {
    fail(line_no, std::string(column) + " must be finite, got '" + std::string(text) + "'");
  }
  return *value;
}

}  // namespace

std::string LogSchema::header() const {
  return epoch_column + "," + id_column + "," + phase_column + "," + snr_column;
}

LogParseResult parse_log(std::istream& in, const LogSchema& schema) {
  LogParseResult result;
  std::unordered_map<std::string, std::size_t> series_index;

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t rows = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      std::string_view comment = trim(view.substr(1));
      if (!result.origin && comment.starts_with("origin=")) {
        result.origin = std::string(trim(comment.substr(7)));
      }
      continue;
    }
    if (!header_seen) {
      if (std::string(view) != schema.header()) {
        fail(line_no, "header mismatch: expected '" + schema.header() + "', got '" +
                          std::string(view) + "'");
      }
      header_seen = true;
      continue;
    }

    auto fields = split_fields(view);
    if (fields.size() != 4) {
      fail(line_no, "expected 4 comma-separated fields, got " +
                        std::to_string(fields.size()));
    }

    double epoch = numeric_field(fields[0], schema.epoch_column.c_str(), line_no);
    std::string id(fields[1]);
    if (id.empty()) fail(line_no, schema.id_column + " is empty");
    double phase = numeric_field(fields[2], schema.phase_column.c_str(), line_no);
    double snr = numeric_field(fields[3], schema.snr_column.c_str(), line_no);

    if (phase < 0.0 || phase >= kTwoPi) {
      fail(line_no, schema.phase_column + " " + format_double(phase) +
                        " outside [0, 2*pi)");
    }

    auto [it, inserted] = series_index.try_emplace(id, result.series.size());
    if (inserted) {
      result.series.push_back(RawPhaseSeries{.transmitter_id = id, .epochs_s = {},
                                             .phase_rad = {}, .snr_db = {}});
    }
    RawPhaseSeries& series = result.series[it->second];
    if (!series.epochs_s.empty() && epoch <= series.epochs_s.back()) {
      fail(line_no, "epochs for " + id + " not strictly increasing (" +
                        format_double(epoch) + " after " +
                        format_double(series.epochs_s.back()) + ")");
    }
    series.epochs_s.push_back(epoch);
    series.phase_rad.push_back(phase);
    series.snr_db.push_back(snr);
    ++rows;
  }

  if (!header_seen) throw ParseError("empty log: no header line");
  if (rows == 0) throw ParseError("log has a header but no data rows");
  return result;
}

LogParseResult parse_log_file(const std::string& path, const LogSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open measurement log: " + path);
  return parse_log(in, schema);
}

std::vector<TransmitterConfig> load_config(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }

  if (!doc.is_object() || !doc.contains("transmitters") || !doc["transmitters"].is_array()) {
    throw ParseError("config must be an object with a 'transmitters' array");
  }

  std::vector<TransmitterConfig> config;
  for (const auto& entry : doc["transmitters"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string()) {
      throw ParseError("config transmitter entry missing string 'id'");
    }
    TransmitterConfig t;
    t.id = entry["id"].get<std::string>();
    if (t.id.empty()) throw ParseError("config transmitter id is empty");
    if (entry.contains("name")) {
      if (!entry["name"].is_string()) {
        throw ParseError("config 'name' for " + t.id + " must be a string");
      }
      t.name = entry["name"].get<std::string>();
    }
    if (!entry.contains("carrier_frequency_hz") || !entry["carrier_frequency_hz"].is_number()) {
      throw ParseError("config for " + t.id + " missing numeric 'carrier_frequency_hz'");
    }
    t.carrier_frequency_hz = entry["carrier_frequency_hz"].get<double>();
    if (!(t.carrier_frequency_hz > 0.0) || !std::isfinite(t.carrier_frequency_hz)) {
      throw ParseError("carrier_frequency_hz for " + t.id + " must be positive and finite");
    }
    t.wavelength_m = kSpeedOfLight / t.carrier_frequency_hz;
    if (find_transmitter(config, t.id) != nullptr) {
      throw ParseError("duplicate transmitter id in config: " + t.id);
    }
    config.push_back(std::move(t));
  }
  if (config.empty()) throw ParseError("config lists no transmitters");
  return config;
}

std::vector<TransmitterConfig> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config: " + path);
  return load_config(in);
}

const TransmitterConfig* find_transmitter(const std::vector<TransmitterConfig>& config,
                                          const std::string& id) {
  for (const auto& t : config) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

}  // namespace rmode::ingest
