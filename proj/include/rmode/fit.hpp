#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "rmode/model.hpp"
#include "rmode/phase.hpp"

namespace rmode::fit {

// Windowed variance samples plus optional per-sample weights (empty means
// uniform).  Invariants checked by fit_model: at least two samples per
// transmitter, weights (when given) one per sample, positive and finite.
struct FitInput {
  std::vector<phase::VarianceSample> samples;
  std::vector<double> weights;
};

// Space the solver minimizes residuals in.  kVariance fits sigma^2 against
// the model directly (the model is linear in J^2 and C^2 there); kSigma
// fits sigma, which discounts the largest variances.
enum class ResidualSpace {
  kVariance,
  kSigma,
};

enum class WeightMode {
  kUniform,
  kWindowLen,        // weight = window length (longer windows earn more say)
  kInverseVariance,  // weight = 1 / variance^2 (sampling noise of a variance
                     // estimate scales with its square)
};

enum class Solver {
  kNnls,
  kGridRefine,
};

enum class Identifiability {
  kOk,
  kWeak,  // equivalent optima existed; the minimum-norm one was reported
};

struct FitConfig {
  ResidualSpace residual_space = ResidualSpace::kVariance;
  // Convention stamped onto the fitted model (samples always carry linear SNR).
  SnrConvention snr_convention = SnrConvention::kDbToLinear;
  double kkt_rel_tol = 1e-12;
};

struct FitResult {
  model::VarianceModel model;
  // Weighted residual sum of squares in variance space (m^4), whatever space
  // the solver worked in, so numbers are comparable across configurations.
  double rss = 0.0;
  std::size_t n_samples = 0;
  std::map<std::string, double> per_transmitter_rss;
  Solver solver = Solver::kNnls;
  ResidualSpace residual_space = ResidualSpace::kVariance;
  Identifiability identifiability = Identifiability::kOk;
};

std::string to_string(ResidualSpace space);
ResidualSpace residual_space_from_string(const std::string& text);
std::string to_string(WeightMode mode);
WeightMode weight_mode_from_string(const std::string& text);
std::string to_string(Solver solver);
std::string to_string(Identifiability identifiability);

// Builds the weight vector for a sample set under a policy.
std::vector<double> make_weights(const std::vector<phase::VarianceSample>& samples,
                                 WeightMode mode);

// Fits per-transmitter jitter J_i and the shared constant C to windowed
// variance samples, constrained to J_i, C >= 0.  In variance space the
// problem is linear in (J_i^2, C^2) and solved by non-negative least
// squares; in sigma space a deterministic coordinate grid refinement is
// seeded from that solution.  Accumulation follows a canonical sample
// ordering, so permuting the input changes nothing in the result.  Throws
// IdentifiabilityError (naming the transmitters) when no transmitter spans
// two distinct SNR values, std::invalid_argument on malformed input.
FitResult fit_model(const FitInput& input, const FitConfig& cfg = {});

// Weighted residual sum of squares of a model over samples, in variance
// space.  The model must cover every transmitter present (ModelUseError).
// Summation uses the same canonical ordering as fit_model.
double rss(const model::VarianceModel& model, const FitInput& input);

}  // namespace rmode::fit
