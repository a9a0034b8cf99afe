#pragma once

#include <cmath>
#include <string>

namespace rmode {

// Speed of light in vacuum, m/s (exact by SI definition).
inline constexpr double kSpeedOfLight = 299792458.0;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

// How SNR values handed to a model are expressed.  Logs carry SNR in dB;
// the model equation itself wants a plain power ratio.  A model stamped
// kDbToLinear expects dB inputs and converts internally; one stamped
// kLinear expects ratios as-is.  Mixing the two is an error, not a guess.
enum class SnrConvention {
  kDbToLinear,
  kLinear,
};

std::string to_string(SnrConvention convention);
SnrConvention snr_convention_from_string(const std::string& text);

}  // namespace rmode
