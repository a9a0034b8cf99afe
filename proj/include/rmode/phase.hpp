#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rmode/ingest.hpp"
#include "rmode/units.hpp"

namespace rmode::phase {

struct UnwrapConfig {
  // A gap between consecutive epochs longer than this restarts unwrapping:
  // cycle continuity across a long outage is guesswork, not measurement.
  double max_gap_s = 10.0;
};

// Unwrapped (continuous) phase.  Within a segment consecutive samples differ
// by at most pi in magnitude; segment_starts marks where unwrapping restarted
// after a gap (the first entry is always 0).
struct ContinuousPhaseSeries {
  std::string transmitter_id;
  std::vector<double> epochs_s;
  std::vector<double> phase_cont_rad;
  std::vector<double> snr_db;
  std::vector<std::size_t> segment_starts;
};

// TOA expressed as one-way range.  range_m holds (phase / 2*pi) * wavelength
// without any whole-cycle offset; the offset is kept separately so that
// range statistics are bit-identical no matter which cycle was assumed.
struct ToaSeries {
  std::string transmitter_id;
  std::vector<double> epochs_s;
  std::vector<double> range_m;
  std::vector<double> snr_db;
  std::vector<std::size_t> segment_starts;
  double wavelength_m = 0.0;
  // Whole-cycle ambiguity n.  nullopt means unknown: the offset is absorbed
  // and downstream variance estimates are unaffected.
  std::optional<long long> cycle_offset_n;

  bool cycle_offset_known() const { return cycle_offset_n.has_value(); }
  double offset_m() const {
    return cycle_offset_n ? static_cast<double>(*cycle_offset_n) * wavelength_m : 0.0;
  }
  double toa_m(std::size_t k) const { return range_m[k] + offset_m(); }
};

// One windowed variance estimate: the unit of data the model is fit to.
struct VarianceSample {
  std::string transmitter_id;
  double snr_linear = 0.0;   // window-mean SNR as a power ratio
  double variance_m2 = 0.0;  // unbiased TOA variance over the window
  double window_start_s = 0.0;
  std::size_t window_len = 0;

  bool operator==(const VarianceSample&) const = default;
};

struct WindowConfig {
  std::size_t window_len = 300;
  // Windows whose SNR varies more than this (dB) mix noise regimes and are
  // dropped rather than averaged over.
  double max_snr_spread_db = 3.0;
  // Relative tolerance on the epoch step when checking window uniformity.
  double epoch_step_rel_tol = 0.01;
  // How the snr column of the input is expressed.
  SnrConvention snr_convention = SnrConvention::kDbToLinear;
};

struct WindowDiagnostics {
  std::size_t windows_total = 0;
  std::size_t windows_used = 0;
  std::size_t skipped_snr_spread = 0;
  std::size_t skipped_segment_boundary = 0;
  std::size_t skipped_nonuniform_epochs = 0;
  std::size_t skipped_nonpositive_snr = 0;
  // Median step between consecutive epochs; the uniformity reference.
  double nominal_epoch_step_s = 0.0;
};

struct WindowedVarianceResult {
  std::vector<VarianceSample> samples;
  WindowDiagnostics diagnostics;
};

// Removes 2*pi wrap discontinuities.  A jump of magnitude strictly greater
// than pi between consecutive raw samples is corrected by one whole cycle
// (raw phases live in [0, 2*pi), so a single cycle is always enough).  Gaps
// longer than cfg.max_gap_s split the series into independent segments.
ContinuousPhaseSeries unwrap_phase(const ingest::RawPhaseSeries& raw,
                                   const UnwrapConfig& cfg = {});

// Scales continuous phase to one-way range: toa = (phase / 2*pi + n) * wavelength.
// Pass nullopt when the whole-cycle count is unknown; the series is then
// flagged and only offset-invariant statistics should be read from it.
ToaSeries phase_to_toa(const ContinuousPhaseSeries& cont, double wavelength_m,
                       std::optional<long long> cycle_offset_n = std::nullopt);

// Cuts the series into consecutive non-overlapping windows of cfg.window_len
// samples and emits, per accepted window, the unbiased sample variance of the
// range together with the window-mean SNR (as a linear ratio).  Windows that
// cross a segment boundary, ride an SNR ramp wider than the spread gate, or
// have non-uniform epoch spacing are skipped and counted in the diagnostics.
WindowedVarianceResult windowed_variance(const ToaSeries& toa,
                                         const WindowConfig& cfg = {});

}  // namespace rmode::phase
