// Synthetic wrapped-phase log generation with known ground truth.

#include "rmode/synth.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "rmode/errors.hpp"
#include "rmode/units.hpp"
#include "num_text.hpp"

namespace rmode::synth {

namespace {

// Per-transmitter substream seed: splitmix64-style mixing so neighbouring
// stream indices land far apart in mt19937_64's seed space.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Marsaglia polar Gaussian over mt19937_64.  Hand-rolled (and not
// std::normal_distribution) because the standard leaves distribution
// algorithms unspecified, and generated logs must be reproducible bit for
// bit across standard libraries.
struct GaussianStream {
  std::mt19937_64 engine;
  bool has_spare = false;
  double spare = 0.0;

  explicit GaussianStream(std::uint64_t seed) : engine(seed) {}

  double uniform01() {  // [0, 1), 53-bit resolution
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  }

  double next() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    while (true) {
      const double u = 2.0 * uniform01() - 1.0;
      const double v = 2.0 * uniform01() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) {
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare = v * f;
        has_spare = true;
        return u * f;
      }
    }
  }
};

void validate_truth(const SynthTruth& truth) {
  if (truth.transmitters.empty()) {
    throw ParseError("truth has no transmitters");
  }
  std::set<std::string> ids;
  for (const auto& t : truth.transmitters) {
    if (t.id.empty()) throw ParseError("truth transmitter id is empty");
    if (!ids.insert(t.id).second) {
      throw ParseError("duplicate transmitter id in truth: " + t.id);
    }
    if (!(t.jitter_m >= 0.0) || !std::isfinite(t.jitter_m)) {
      throw ParseError("jitter_m for " + t.id + " must be non-negative and finite");
    }
  }
  if (!(truth.c_const_m >= 0.0) || !std::isfinite(truth.c_const_m)) {
    throw ParseError("c_const_m must be non-negative and finite");
  }
  if (!(truth.wavelength_m > 0.0) || !std::isfinite(truth.wavelength_m)) {
    throw ParseError("wavelength_m must be positive and finite");
  }
  if (!(truth.epoch_step_s > 0.0) || !std::isfinite(truth.epoch_step_s)) {
    throw ParseError("epoch_step_s must be positive and finite");
  }
  if (truth.snr_profile.empty()) {
    throw ParseError("truth has an empty snr_profile");
  }
  for (const auto& seg : truth.snr_profile) {
    if (seg.epochs == 0) throw ParseError("snr_profile segment with zero epochs");
    if (!std::isfinite(seg.snr_db)) throw ParseError("snr_profile snr_db must be finite");
  }
}

double sigma_m_for(const SynthTruth& truth, const TransmitterTruth& t, double snr_db) {
  return std::sqrt(t.jitter_m * t.jitter_m +
                   truth.c_const_m * truth.c_const_m / db_to_linear(snr_db));
}

}  // namespace

double wrap_phase(double phase_rad) {
  if (!std::isfinite(phase_rad)) {
    throw std::invalid_argument("wrap_phase: non-finite phase");
  }
  double r = std::fmod(phase_rad, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // Adding 2*pi to a tiny negative remainder can round up to exactly 2*pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

std::vector<ingest::RawPhaseSeries> generate(const SynthTruth& truth) {
  validate_truth(truth);

  std::uint64_t total_epochs = 0;
  for (const auto& seg : truth.snr_profile) total_epochs += seg.epochs;

  std::vector<ingest::RawPhaseSeries> out;
  out.reserve(truth.transmitters.size());

  const double rad_per_m = kTwoPi / truth.wavelength_m;
  for (std::size_t ti = 0; ti < truth.transmitters.size(); ++ti) {
    const auto& t = truth.transmitters[ti];
    GaussianStream noise(mix_seed(truth.rng_seed, ti));
    const double phi0 = wrap_phase(noise.uniform01() * kTwoPi);

    ingest::RawPhaseSeries series;
    series.transmitter_id = t.id;
    series.epochs_s.reserve(total_epochs);
    series.phase_rad.reserve(total_epochs);
    series.snr_db.reserve(total_epochs);

    std::uint64_t k = 0;
    for (const auto& seg : truth.snr_profile) {
      const double sigma_m = sigma_m_for(truth, t, seg.snr_db);
      for (std::uint64_t i = 0; i < seg.epochs; ++i, ++k) {
        const double toa_error_m = noise.next() * sigma_m;
        series.epochs_s.push_back(static_cast<double>(k) * truth.epoch_step_s);
        series.phase_rad.push_back(wrap_phase(phi0 + toa_error_m * rad_per_m));
        series.snr_db.push_back(seg.snr_db);
      }
    }
    out.push_back(std::move(series));
  }
  return out;
}

std::vector<std::string> noise_warnings(const SynthTruth& truth) {
  validate_truth(truth);
  std::vector<std::string> warnings;
  for (const auto& t : truth.transmitters) {
    for (std::size_t si = 0; si < truth.snr_profile.size(); ++si) {
      const auto& seg = truth.snr_profile[si];
      const double sigma_phase = sigma_m_for(truth, t, seg.snr_db) * kTwoPi /
                                 truth.wavelength_m;
      if (3.0 * sigma_phase >= kPi) {
        warnings.push_back("transmitter " + t.id + " segment " + std::to_string(si) +
                           " (snr " + rmode::detail::format_double(seg.snr_db) +
                           " dB): 3*sigma_phase = " +
                           rmode::detail::format_double(3.0 * sigma_phase) +
                           " rad reaches pi; unwrapping will be unreliable");
      }
    }
  }
  return warnings;
}

SynthTruth load_truth(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("truth file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("truth file must be a JSON object");

  for (const char* field :
       {"transmitters", "c_const_m", "snr_profile", "wavelength_m", "epoch_step_s",
        "rng_seed"}) {
    if (!doc.contains(field)) {
      throw ParseError(std::string("truth file missing field '") + field + "'");
    }
  }

  SynthTruth truth;
  if (!doc["transmitters"].is_array()) throw ParseError("'transmitters' must be an array");
  for (const auto& entry : doc["transmitters"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry.contains("jitter_m") ||
        !entry["id"].is_string() || !entry["jitter_m"].is_number()) {
      throw ParseError("truth transmitter entries need a string 'id' and numeric 'jitter_m'");
    }
    truth.transmitters.push_back(TransmitterTruth{
        entry["id"].get<std::string>(), entry["jitter_m"].get<double>()});
  }
  if (!doc["c_const_m"].is_number()) throw ParseError("'c_const_m' must be a number");
  truth.c_const_m = doc["c_const_m"].get<double>();
  if (!doc["snr_profile"].is_array()) throw ParseError("'snr_profile' must be an array");
  for (const auto& entry : doc["snr_profile"]) {
    if (!entry.is_object() || !entry.contains("epochs") || !entry.contains("snr_db") ||
        !entry["epochs"].is_number_unsigned() || !entry["snr_db"].is_number()) {
      throw ParseError("snr_profile entries need an unsigned 'epochs' and numeric 'snr_db'");
    }
    truth.snr_profile.push_back(SnrSegment{entry["epochs"].get<std::uint64_t>(),
                                           entry["snr_db"].get<double>()});
  }
  if (!doc["wavelength_m"].is_number()) throw ParseError("'wavelength_m' must be a number");
  truth.wavelength_m = doc["wavelength_m"].get<double>();
  if (!doc["epoch_step_s"].is_number()) throw ParseError("'epoch_step_s' must be a number");
  truth.epoch_step_s = doc["epoch_step_s"].get<double>();
  if (!doc["rng_seed"].is_number_unsigned()) {
    throw ParseError("'rng_seed' must be an unsigned integer");
  }
  truth.rng_seed = doc["rng_seed"].get<std::uint64_t>();
  if (doc.contains("origin")) {
    if (!doc["origin"].is_string()) throw ParseError("'origin' must be a string");
    truth.origin = doc["origin"].get<std::string>();
  }

  validate_truth(truth);
  return truth;
}

SynthTruth load_truth_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open truth file: " + path);
  return load_truth(in);
}

void write_truth(const SynthTruth& truth, std::ostream& out) {
  validate_truth(truth);
  nlohmann::json doc;
  doc["transmitters"] = nlohmann::json::array();
  for (const auto& t : truth.transmitters) {
    doc["transmitters"].push_back({{"id", t.id}, {"jitter_m", t.jitter_m}});
  }
  doc["c_const_m"] = truth.c_const_m;
  doc["snr_profile"] = nlohmann::json::array();
  for (const auto& seg : truth.snr_profile) {
    doc["snr_profile"].push_back({{"epochs", seg.epochs}, {"snr_db", seg.snr_db}});
  }
  doc["wavelength_m"] = truth.wavelength_m;
  doc["epoch_step_s"] = truth.epoch_step_s;
  doc["rng_seed"] = truth.rng_seed;
  if (truth.origin) doc["origin"] = *truth.origin;
  out << doc.dump(2) << "\n";
}

}  // namespace rmode::synth
