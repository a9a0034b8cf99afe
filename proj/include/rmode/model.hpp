#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "rmode/units.hpp"

namespace rmode::model {

enum class SigmaUnit {
  kMeters,
  kNanoseconds,
};

std::string to_string(SigmaUnit unit);
SigmaUnit sigma_unit_from_string(const std::string& text);

// TOA error model: per-transmitter variance
//
//   sigma_i^2 = J_i^2 + C^2 / SNR_i
//
// with J_i the transmitter's own jitter floor, C a shared receiver/noise
// constant and SNR_i a linear power ratio.  Units of J and C follow `unit`
// (meters unless converted).  The SNR convention stamped on the model says
// what callers are expected to hand in; predict_variance itself always takes
// a linear ratio.
struct VarianceModel {
  std::map<std::string, double> jitter;  // transmitter id -> J_i, >= 0
  double c_const = 0.0;                  // shared C, >= 0
  SnrConvention snr_convention = SnrConvention::kDbToLinear;
  SigmaUnit unit = SigmaUnit::kMeters;
};

// J_i^2 + C^2 / snr_linear.  Throws ModelUseError for an id the model does
// not cover or an SNR that is not a positive finite ratio.
double predict_variance(const VarianceModel& model, const std::string& transmitter_id,
                        double snr_linear);

// Convention-checked entry points: each refuses (ModelUseError) when the
// model was stamped with the other convention, so a dB value can never be
// silently used as a ratio or vice versa.
double predict_from_db(const VarianceModel& model, const std::string& transmitter_id,
                       double snr_db);
double predict_from_linear(const VarianceModel& model, const std::string& transmitter_id,
                           double snr_linear);

// Published eLoran reference curve: sigma^2 = J^2 + 337.5^2 / (N * SNR),
// with N the number of pulses averaged.  Useful as a sanity benchmark next
// to fitted medium-frequency models.
inline constexpr double kEloranNoiseCoefficient = 337.5;

struct EloranParams {
  double jitter = 0.0;  // J, meters
  int n_pulses = 1;     // N, >= 1
};

double predict_eloran_variance(const EloranParams& params, double snr_linear);

// Converts a sigma (is_variance == false) or sigma^2 (true) value between
// meters and nanoseconds via the speed of light.
double convert_sigma_units(double value, SigmaUnit from, SigmaUnit to, bool is_variance);

// JSON round-trip.  Serialization preserves doubles bit-exactly.
void write_model(const VarianceModel& model, std::ostream& out);
VarianceModel read_model(std::istream& in);

}  // namespace rmode::model
