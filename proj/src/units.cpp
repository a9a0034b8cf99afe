#include "rmode/units.hpp"

#include "rmode/errors.hpp"

namespace rmode {

std::string to_string(SnrConvention convention) {
  switch (convention) {
    case SnrConvention::kDbToLinear:
      return "db-converted-to-linear";
    case SnrConvention::kLinear:
      return "linear";
  }
  return "db-converted-to-linear";
}

SnrConvention snr_convention_from_string(const std::string& text) {
  if (text == "db-converted-to-linear") return SnrConvention::kDbToLinear;
  if (text == "linear") return SnrConvention::kLinear;
  throw ParseError("unknown snr convention '" + text +
                   "' (expected 'db-converted-to-linear' or 'linear')");
}

}  // namespace rmode
