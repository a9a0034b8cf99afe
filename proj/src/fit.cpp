// Model fitting: J_i and C from windowed variance samples.

#include "rmode/fit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "rmode/errors.hpp"
#include "rmode/nnls.hpp"

namespace rmode::fit {

std::string to_string(ResidualSpace space) {
  return space == ResidualSpace::kVariance ? "variance" : "sigma";
}

ResidualSpace residual_space_from_string(const std::string& text) {
  if (text == "variance") return ResidualSpace::kVariance;
  if (text == "sigma") return ResidualSpace::kSigma;
  throw ParseError("unknown residual space '" + text + "' (expected 'variance' or 'sigma')");
}

std::string to_string(WeightMode mode) {
  switch (mode) {
    case WeightMode::kUniform:
      return "uniform";
    case WeightMode::kWindowLen:
      return "window_len";
    case WeightMode::kInverseVariance:
      return "inverse_variance";
  }
  return "uniform";
}

WeightMode weight_mode_from_string(const std::string& text) {
  if (text == "uniform") return WeightMode::kUniform;
  if (text == "window_len") return WeightMode::kWindowLen;
  if (text == "inverse_variance") return WeightMode::kInverseVariance;
  throw ParseError("unknown weight mode '" + text +
                   "' (expected 'uniform', 'window_len' or 'inverse_variance')");
}

std::string to_string(Solver solver) {
  return solver == Solver::kNnls ? "nnls" : "grid_refine";
}

std::string to_string(Identifiability identifiability) {
  return identifiability == Identifiability::kOk ? "ok" : "weak";
}

std::vector<double> make_weights(const std::vector<phase::VarianceSample>& samples,
                                 WeightMode mode) {
  std::vector<double> weights;
  weights.reserve(samples.size());
  for (const auto& s : samples) {
    switch (mode) {
      case WeightMode::kUniform:
        weights.push_back(1.0);
        break;
      case WeightMode::kWindowLen:
        if (s.window_len == 0) {
          throw std::invalid_argument("make_weights: window_len weight needs window_len > 0");
        }
        weights.push_back(static_cast<double>(s.window_len));
        break;
      case WeightMode::kInverseVariance:
        // The sampling noise of a variance estimate scales with its square,
        // so 1/v^2 approximates inverse-variance weighting of the samples
        // themselves.  Zero-variance samples would get infinite weight.
        if (!(s.variance_m2 > 0.0)) {
          throw std::invalid_argument(
              "make_weights: inverse_variance weights need strictly positive variances");
        }
        weights.push_back(1.0 / (s.variance_m2 * s.variance_m2));
        break;
    }
  }
  return weights;
}

namespace {

// Indices sorted by (id, snr, variance, weight, window_start): summation
// follows this order everywhere, which makes every reported number
// independent of how the caller happened to order the samples.
std::vector<std::size_t> canonical_order(const std::vector<phase::VarianceSample>& samples,
                                         const std::vector<double>& weights) {
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& sa = samples[a];
    const auto& sb = samples[b];
    return std::tie(sa.transmitter_id, sa.snr_linear, sa.variance_m2, weights[a],
                    sa.window_start_s, sa.window_len) <
           std::tie(sb.transmitter_id, sb.snr_linear, sb.variance_m2, weights[b],
                    sb.window_start_s, sb.window_len);
  });
  return order;
}

std::vector<double> weights_or_uniform(const FitInput& input) {
  if (input.weights.empty()) {
    return std::vector<double>(input.samples.size(), 1.0);
  }
  if (input.weights.size() != input.samples.size()) {
    throw std::invalid_argument("fit: weights must be empty or one per sample");
  }
  for (double w : input.weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("fit: weights must be positive and finite");
    }
  }
  return input.weights;
}

void validate_samples(const std::vector<phase::VarianceSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("fit: no samples");
  for (const auto& s : samples) {
    if (s.transmitter_id.empty()) throw std::invalid_argument("fit: sample with empty id");
    if (!(s.snr_linear > 0.0) || !std::isfinite(s.snr_linear)) {
      throw std::invalid_argument("fit: sample for '" + s.transmitter_id +
                                  "' has non-positive snr");
    }
    if (!(s.variance_m2 >= 0.0) || !std::isfinite(s.variance_m2)) {
      throw std::invalid_argument("fit: sample for '" + s.transmitter_id +
                                  "' has negative or non-finite variance");
    }
  }
}

// Weighted variance-space rss, total and per transmitter, in canonical order.
std::pair<double, std::map<std::string, double>> weighted_rss(
    const model::VarianceModel& model, const std::vector<phase::VarianceSample>& samples,
    const std::vector<double>& weights) {
  const auto order = canonical_order(samples, weights);
  double total = 0.0;
  std::map<std::string, double> per_transmitter;
  for (std::size_t idx : order) {
    const auto& s = samples[idx];
    const double pred = model::predict_variance(model, s.transmitter_id, s.snr_linear);
    const double r = s.variance_m2 - pred;
    const double term = weights[idx] * r * r;
    total += term;
    per_transmitter[s.transmitter_id] += term;
  }
  return {total, per_transmitter};
}

// Sigma-space objective: sum of w * (sigma - model sigma)^2.
double sigma_objective(const std::vector<phase::VarianceSample>& samples,
                       const std::vector<double>& weights,
                       const std::vector<std::size_t>& order,
                       const std::map<std::string, std::size_t>& param_index,
                       const std::vector<double>& params) {
  const double c = params.back();
  double total = 0.0;
  for (std::size_t idx : order) {
    const auto& s = samples[idx];
    const double j = params[param_index.at(s.transmitter_id)];
    const double pred_sigma = std::sqrt(j * j + c * c / s.snr_linear);
    const double r = std::sqrt(s.variance_m2) - pred_sigma;
    total += weights[idx] * r * r;
  }
  return total;
}

// Deterministic coordinate descent on a shrinking grid, constrained to
// params >= 0.  Each coordinate is scanned over a bracket around its current
// value; the bracket shrinks until it is far below the parameter scale.
std::vector<double> grid_refine(const std::vector<phase::VarianceSample>& samples,
                                const std::vector<double>& weights,
                                const std::vector<std::size_t>& order,
                                const std::map<std::string, std::size_t>& param_index,
                                std::vector<double> params, double scale) {
  if (!(scale > 0.0)) return params;
  auto objective = [&](const std::vector<double>& p) {
    return sigma_objective(samples, weights, order, param_index, p);
  };

  constexpr int kPointsPerScan = 25;
  constexpr int kMaxPasses = 60;
  double best = objective(params);
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    const double before = best;
    for (std::size_t i = 0; i < params.size(); ++i) {
      double half_span = std::max(scale, params[i]) * 0.5;
      const double floor_span = 1e-13 * (scale + params[i]);
      while (half_span > floor_span) {
        const double lo = std::max(0.0, params[i] - half_span);
        const double hi = params[i] + half_span;
        double best_p = params[i];
        for (int k = 0; k < kPointsPerScan; ++k) {
          const double cand =
              lo + (hi - lo) * static_cast<double>(k) / (kPointsPerScan - 1);
          std::vector<double> trial = params;
          trial[i] = cand;
          const double value = objective(trial);
          if (value < best) {
            best = value;
            best_p = cand;
          }
        }
        params[i] = best_p;
        half_span *= 0.2;
      }
    }
    if (before - best <= 1e-15 * (1.0 + best)) break;
  }
  return params;
}

}  // namespace

FitResult fit_model(const FitInput& input, const FitConfig& cfg) {
  validate_samples(input.samples);
  const std::vector<double> weights = weights_or_uniform(input);
  const auto& samples = input.samples;

  // Transmitter registry in sorted-id order; parameter m (the last) is C^2.
  std::map<std::string, std::size_t> param_index;
  for (const auto& s : samples) param_index.try_emplace(s.transmitter_id, 0);
  std::size_t next = 0;
  for (auto& [id, idx] : param_index) idx = next++;
  const std::size_t m = param_index.size();

  std::map<std::string, std::size_t> sample_count;
  std::map<std::string, std::set<double>> distinct_snr;
  for (const auto& s : samples) {
    ++sample_count[s.transmitter_id];
    distinct_snr[s.transmitter_id].insert(s.snr_linear);
  }
  for (const auto& [id, count] : sample_count) {
    if (count < 2) {
      throw std::invalid_argument("fit: transmitter '" + id + "' has " +
                                  std::to_string(count) + " sample(s); need at least 2");
    }
  }

  // C is separable from the per-transmitter floors only when at least one
  // transmitter was observed at two different SNR levels.
  bool any_two_levels = false;
  std::string single_level_ids;
  for (const auto& [id, snrs] : distinct_snr) {
    if (snrs.size() >= 2) {
      any_two_levels = true;
    } else {
      if (!single_level_ids.empty()) single_level_ids += ", ";
      single_level_ids += id;
    }
  }
  if (!any_two_levels) {
    throw IdentifiabilityError(
        "cannot separate jitter from the shared constant: every transmitter was "
        "observed at a single SNR level (" +
        single_level_ids + ")");
  }

  const auto order = canonical_order(samples, weights);

  // Normal equations for the reparametrized linear problem
  //   variance ~ a_t + b / snr,   a_t = J_t^2, b = C^2,
  // which the non-negativity constraint turns back into J_t, C >= 0.
  const std::size_t p = m + 1;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p);
  for (std::size_t idx : order) {
    const auto& s = samples[idx];
    const std::size_t t = param_index.at(s.transmitter_id);
    const double w = weights[idx];
    const double u = 1.0 / s.snr_linear;
    gram(t, t) += w;
    gram(t, m) += w * u;
    gram(m, m) += w * u * u;
    rhs(t) += w * s.variance_m2;
    rhs(m) += w * u * s.variance_m2;
  }
  for (std::size_t t = 0; t < m; ++t) gram(m, t) = gram(t, m);

  NnlsOptions nnls_opts;
  nnls_opts.kkt_rel_tol = cfg.kkt_rel_tol;
  const NnlsResult nnls = nnls_normal(gram, rhs, nnls_opts);

  FitResult result;
  result.residual_space = cfg.residual_space;
  result.n_samples = samples.size();
  result.identifiability =
      nnls.rank_deficient ? Identifiability::kWeak : Identifiability::kOk;

  std::vector<double> params(p, 0.0);
  for (const auto& [id, t] : param_index) params[t] = std::sqrt(nnls.x(t));
  params[m] = std::sqrt(nnls.x(m));

  if (cfg.residual_space == ResidualSpace::kVariance) {
    result.solver = Solver::kNnls;
  } else {
    // Sigma-space objective is not linear in (a, b); refine the NNLS seed by
    // deterministic coordinate descent, racing it against a cold start.
    result.solver = Solver::kGridRefine;
    double v_max = 0.0;
    for (const auto& s : samples) v_max = std::max(v_max, s.variance_m2);
    const double scale = std::sqrt(v_max);
    const std::vector<double> warm =
        grid_refine(samples, weights, order, param_index, params, scale);
    const std::vector<double> cold = grid_refine(
        samples, weights, order, param_index, std::vector<double>(p, 0.0), scale);
    const double warm_obj = sigma_objective(samples, weights, order, param_index, warm);
    const double cold_obj = sigma_objective(samples, weights, order, param_index, cold);
    params = (cold_obj < warm_obj) ? cold : warm;
  }

  result.model.snr_convention = cfg.snr_convention;
  result.model.unit = model::SigmaUnit::kMeters;
  result.model.c_const = params[m];
  for (const auto& [id, t] : param_index) result.model.jitter[id] = params[t];

  auto [total, per_transmitter] = weighted_rss(result.model, samples, weights);
  result.rss = total;
  result.per_transmitter_rss = std::move(per_transmitter);
  return result;
}

double rss(const model::VarianceModel& model, const FitInput& input) {
  validate_samples(input.samples);
  const std::vector<double> weights = weights_or_uniform(input);
  return weighted_rss(model, input.samples, weights).first;
}

}  // namespace rmode::fit
