#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace rmode::ingest {

// One transmitter from the station config.  wavelength_m is derived from the
// carrier frequency on load and never stored in the file.
struct TransmitterConfig {
  std::string id;
  std::string name;
  double carrier_frequency_hz = 0.0;
  double wavelength_m = 0.0;
};

// Wrapped-phase measurements of a single transmitter, in log order.
// Invariants: epochs strictly increasing, every phase in [0, 2*pi),
// all three columns the same length.
struct RawPhaseSeries {
  std::string transmitter_id;
  std::vector<double> epochs_s;
  std::vector<double> phase_rad;
  std::vector<double> snr_db;

  bool operator==(const RawPhaseSeries&) const = default;
};

// Column names expected in the measurement CSV header.
struct LogSchema {
  std::string epoch_column = "epoch_s";
  std::string id_column = "transmitter_id";
  std::string phase_column = "phase_rad";
  std::string snr_column = "snr_db";

  std::string header() const;
};

struct LogParseResult {
  // One series per transmitter, ordered by first appearance in the log.
  std::vector<RawPhaseSeries> series;
  // Value of the optional "# origin=<timestamp>" header comment.
  std::optional<std::string> origin;
};

// Parses a measurement log.  Rows may interleave transmitters arbitrarily;
// they are grouped per transmitter without reordering.  Throws ParseError
// (with a line number) on malformed rows, a wrong header, phases outside
// [0, 2*pi), non-finite values, epochs that do not strictly increase within
// a transmitter, or a log with no data rows.
LogParseResult parse_log(std::istream& in, const LogSchema& schema = {});
LogParseResult parse_log_file(const std::string& path, const LogSchema& schema = {});

// Loads the transmitter config (JSON).  Each entry carries id, name and
// carrier_frequency_hz; wavelength follows from the speed of light.  Throws
// ParseError on missing fields, non-positive frequencies or duplicate ids.
std::vector<TransmitterConfig> load_config(std::istream& in);
std::vector<TransmitterConfig> load_config_file(const std::string& path);

// nullptr when the id is not configured.
const TransmitterConfig* find_transmitter(const std::vector<TransmitterConfig>& config,
                                          const std::string& id);

}  // namespace rmode::ingest
