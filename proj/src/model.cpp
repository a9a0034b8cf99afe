// TOA variance model: prediction, unit conversion, serialization.

#include "rmode/model.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "rmode/errors.hpp"
#include "model_json.hpp"
#include "num_text.hpp"

namespace rmode::model {

std::string to_string(SigmaUnit unit) {
  switch (unit) {
    case SigmaUnit::kMeters:
      return "meters";
    case SigmaUnit::kNanoseconds:
      return "nanoseconds";
  }
  return "meters";
}

SigmaUnit sigma_unit_from_string(const std::string& text) {
  if (text == "meters") return SigmaUnit::kMeters;
  if (text == "nanoseconds") return SigmaUnit::kNanoseconds;
  throw ParseError("unknown sigma unit '" + text + "' (expected 'meters' or 'nanoseconds')");
}

namespace {

void check_snr_ratio(double snr_linear) {
  if (!(snr_linear > 0.0) || !std::isfinite(snr_linear)) {
    throw ModelUseError("snr must be a positive finite ratio, got " +
                        rmode::detail::format_double(snr_linear));
  }
}

}  // namespace

double predict_variance(const VarianceModel& model, const std::string& transmitter_id,
                        double snr_linear) {
  auto it = model.jitter.find(transmitter_id);
  if (it == model.jitter.end()) {
    throw ModelUseError("model has no transmitter '" + transmitter_id + "'");
  }
  check_snr_ratio(snr_linear);
  const double j = it->second;
  return j * j + model.c_const * model.c_const / snr_linear;
}

double predict_from_db(const VarianceModel& model, const std::string& transmitter_id,
                       double snr_db) {
  if (model.snr_convention != SnrConvention::kDbToLinear) {
    throw ModelUseError("model expects linear SNR ratios, not dB (snr_convention is '" +
                        to_string(model.snr_convention) + "')");
  }
  if (!std::isfinite(snr_db)) {
    throw ModelUseError("snr_db must be finite");
  }
  return predict_variance(model, transmitter_id, db_to_linear(snr_db));
}

double predict_from_linear(const VarianceModel& model, const std::string& transmitter_id,
                           double snr_linear) {
  if (model.snr_convention != SnrConvention::kLinear) {
    throw ModelUseError("model expects SNR in dB, not a linear ratio (snr_convention is '" +
                        to_string(model.snr_convention) + "')");
  }
  return predict_variance(model, transmitter_id, snr_linear);
}

double predict_eloran_variance(const EloranParams& params, double snr_linear) {
  if (params.n_pulses < 1) {
    throw std::invalid_argument("predict_eloran_variance: n_pulses must be >= 1");
  }
  if (!(params.jitter >= 0.0) || !std::isfinite(params.jitter)) {
    throw std::invalid_argument("predict_eloran_variance: jitter must be non-negative");
  }
  check_snr_ratio(snr_linear);
  return params.jitter * params.jitter +
         kEloranNoiseCoefficient * kEloranNoiseCoefficient /
             (static_cast<double>(params.n_pulses) * snr_linear);
}

double convert_sigma_units(double value, SigmaUnit from, SigmaUnit to, bool is_variance) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("convert_sigma_units: value must be finite");
  }
  if (from == to) return value;
  // meters -> nanoseconds: t = d / c, scaled to 1e9 ns per second.
  const double factor = (from == SigmaUnit::kMeters) ? 1.0e9 / kSpeedOfLight
                                                     : kSpeedOfLight / 1.0e9;
  return is_variance ? value * (factor * factor) : value * factor;
}

namespace detail {

nlohmann::json model_to_json(const VarianceModel& model) {
  nlohmann::json node;
  node["unit"] = to_string(model.unit);
  node["snr_convention"] = to_string(model.snr_convention);
  node["c_const"] = model.c_const;
  node["jitter"] = nlohmann::json::object();
  for (const auto& [id, j] : model.jitter) node["jitter"][id] = j;
  return node;
}

VarianceModel model_from_json(const nlohmann::json& node) {
  if (!node.is_object()) throw ParseError("model document must be a JSON object");
  for (const char* field : {"unit", "snr_convention", "c_const", "jitter"}) {
    if (!node.contains(field)) {
      throw ParseError(std::string("model document missing field '") + field + "'");
    }
  }
  if (!node["unit"].is_string() || !node["snr_convention"].is_string()) {
    throw ParseError("model 'unit' and 'snr_convention' must be strings");
  }
  if (!node["c_const"].is_number()) throw ParseError("model 'c_const' must be a number");
  if (!node["jitter"].is_object()) throw ParseError("model 'jitter' must be an object");

  VarianceModel model;
  model.unit = sigma_unit_from_string(node["unit"].get<std::string>());
  model.snr_convention = snr_convention_from_string(node["snr_convention"].get<std::string>());
  model.c_const = node["c_const"].get<double>();
  if (!(model.c_const >= 0.0) || !std::isfinite(model.c_const)) {
    throw ParseError("model 'c_const' must be non-negative and finite");
  }
  for (const auto& [id, value] : node["jitter"].items()) {
    if (!value.is_number()) throw ParseError("model jitter for '" + id + "' must be a number");
    const double j = value.get<double>();
    if (!(j >= 0.0) || !std::isfinite(j)) {
      throw ParseError("model jitter for '" + id + "' must be non-negative and finite");
    }
    model.jitter[id] = j;
  }
  if (model.jitter.empty()) throw ParseError("model lists no transmitters");
  return model;
}

}  // namespace detail

void write_model(const VarianceModel& model, std::ostream& out) {
  out << detail::model_to_json(model).dump(2) << "\n";
}

VarianceModel read_model(std::istream& in) {
  nlohmann::json node;
  try {
    node = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model document is not valid JSON: ") + e.what());
  }
  return detail::model_from_json(node);
}

}  // namespace rmode::model
