// Phase unwrapping, TOA scaling, and windowed variance estimation.

#include "rmode/phase.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmode::phase {

namespace {

void check_series_shape(const ingest::RawPhaseSeries& raw) {
  if (raw.epochs_s.empty()) {
    throw std::invalid_argument("unwrap_phase: empty series for '" + raw.transmitter_id + "'");
  }
  if (raw.phase_rad.size() != raw.epochs_s.size() ||
      raw.snr_db.size() != raw.epochs_s.size()) {
    throw std::invalid_argument("unwrap_phase: column lengths differ for '" +
                                raw.transmitter_id + "'");
  }
}

}  // namespace

ContinuousPhaseSeries unwrap_phase(const ingest::RawPhaseSeries& raw,
                                   const UnwrapConfig& cfg) {
  check_series_shape(raw);
  if (!(cfg.max_gap_s > 0.0)) {
    throw std::invalid_argument("unwrap_phase: max_gap_s must be positive");
  }

  ContinuousPhaseSeries out;
  out.transmitter_id = raw.transmitter_id;
  out.epochs_s = raw.epochs_s;
  out.snr_db = raw.snr_db;
  out.phase_cont_rad.reserve(raw.phase_rad.size());
  out.segment_starts.push_back(0);

  // Raw phases live in [0, 2*pi), so a wrap shows up as a jump of magnitude
  // strictly greater than pi and one whole cycle always repairs it.  The
  // cycle count is integer bookkeeping; each output sample is raw + k*2*pi.
  long long cycles = 0;
  out.phase_cont_rad.push_back(raw.phase_rad[0]);
  for (std::size_t k = 1; k < raw.phase_rad.size(); ++k) {
    if (raw.epochs_s[k] - raw.epochs_s[k - 1] > cfg.max_gap_s) {
      // Too long an outage: cycle continuity is not measurable across it.
      cycles = 0;
      out.segment_starts.push_back(k);
      out.phase_cont_rad.push_back(raw.phase_rad[k]);
      continue;
    }
    double step = raw.phase_rad[k] - raw.phase_rad[k - 1];
    if (step > kPi) {
      --cycles;
    } else if (step < -kPi) {
      ++cycles;
    }
    out.phase_cont_rad.push_back(raw.phase_rad[k] +
                                 static_cast<double>(cycles) * kTwoPi);
  }
  return out;
}

ToaSeries phase_to_toa(const ContinuousPhaseSeries& cont, double wavelength_m,
                       std::optional<long long> cycle_offset_n) {
  if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m)) {
    throw std::invalid_argument("phase_to_toa: wavelength must be positive and finite");
  }
  if (cont.epochs_s.empty()) {
    throw std::invalid_argument("phase_to_toa: empty series");
  }

  ToaSeries out;
  out.transmitter_id = cont.transmitter_id;
  out.epochs_s = cont.epochs_s;
  out.snr_db = cont.snr_db;
  out.segment_starts = cont.segment_starts;
  out.wavelength_m = wavelength_m;
  out.cycle_offset_n = cycle_offset_n;
  out.range_m.reserve(cont.phase_cont_rad.size());
  // The whole-cycle offset n is deliberately NOT folded in here: keeping
  // range at n = 0 makes every downstream statistic independent of n down
  // to the last bit, and toa_m() adds n * wavelength on demand.
  for (double p : cont.phase_cont_rad) {
    out.range_m.push_back(p / kTwoPi * wavelength_m);
  }
  return out;
}

WindowedVarianceResult windowed_variance(const ToaSeries& toa, const WindowConfig& cfg) {
  if (cfg.window_len < 2) {
    throw std::invalid_argument("windowed_variance: window_len must be at least 2");
  }
  if (!(cfg.max_snr_spread_db >= 0.0) || !(cfg.epoch_step_rel_tol >= 0.0)) {
    throw std::invalid_argument("windowed_variance: negative tolerance");
  }
  const std::size_t n = toa.range_m.size();
  if (n == 0 || toa.epochs_s.size() != n || toa.snr_db.size() != n) {
    throw std::invalid_argument("windowed_variance: empty or ragged series");
  }

  WindowedVarianceResult result;
  WindowDiagnostics& diag = result.diagnostics;

  if (n >= 2) {
    std::vector<double> steps(n - 1);
    for (std::size_t k = 1; k < n; ++k) steps[k - 1] = toa.epochs_s[k] - toa.epochs_s[k - 1];
    std::nth_element(steps.begin(), steps.begin() + (steps.size() - 1) / 2, steps.end());
    diag.nominal_epoch_step_s = steps[(steps.size() - 1) / 2];
  }

  const std::size_t len = cfg.window_len;
  diag.windows_total = n / len;

  for (std::size_t w = 0; w < diag.windows_total; ++w) {
    const std::size_t i0 = w * len;
    const std::size_t i1 = i0 + len;

    bool crosses_segment = false;
    for (std::size_t s : toa.segment_starts) {
      if (s > i0 && s < i1) {
        crosses_segment = true;
        break;
      }
    }
    if (crosses_segment) {
      ++diag.skipped_segment_boundary;
      continue;
    }

    bool uniform = true;
    for (std::size_t k = i0 + 1; k < i1; ++k) {
      double step = toa.epochs_s[k] - toa.epochs_s[k - 1];
      if (std::abs(step - diag.nominal_epoch_step_s) >
          cfg.epoch_step_rel_tol * diag.nominal_epoch_step_s) {
        uniform = false;
        break;
      }
    }
    if (!uniform) {
      ++diag.skipped_nonuniform_epochs;
      continue;
    }

    double snr_min = toa.snr_db[i0];
    double snr_max = toa.snr_db[i0];
    double snr_sum = 0.0;
    for (std::size_t k = i0; k < i1; ++k) {
      snr_min = std::min(snr_min, toa.snr_db[k]);
      snr_max = std::max(snr_max, toa.snr_db[k]);
      snr_sum += toa.snr_db[k];
    }

    double snr_linear = 0.0;
    if (cfg.snr_convention == SnrConvention::kDbToLinear) {
      if (snr_max - snr_min > cfg.max_snr_spread_db) {
        ++diag.skipped_snr_spread;
        continue;
      }
      snr_linear = db_to_linear(snr_sum / static_cast<double>(len));
    } else {
      // Column already holds ratios; the spread gate still works in dB.
      if (!(snr_min > 0.0)) {
        ++diag.skipped_nonpositive_snr;
        continue;
      }
      if (linear_to_db(snr_max / snr_min) > cfg.max_snr_spread_db) {
        ++diag.skipped_snr_spread;
        continue;
      }
      snr_linear = snr_sum / static_cast<double>(len);
    }

    // Two fixed forward passes: mean, then squared deviations.  The order
    // never depends on the data, so equal inputs give equal bits.
    double sum = 0.0;
    for (std::size_t k = i0; k < i1; ++k) sum += toa.range_m[k];
    const double mean = sum / static_cast<double>(len);
    double ssd = 0.0;
    for (std::size_t k = i0; k < i1; ++k) {
      const double d = toa.range_m[k] - mean;
      ssd += d * d;
    }
    const double variance = ssd / static_cast<double>(len - 1);

    result.samples.push_back(VarianceSample{
        .transmitter_id = toa.transmitter_id,
        .snr_linear = snr_linear,
        .variance_m2 = variance,
        .window_start_s = toa.epochs_s[i0],
        .window_len = len,
    });
  }

  diag.windows_used = result.samples.size();
  return result;
}

}  // namespace rmode::phase
