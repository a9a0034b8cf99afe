#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rmode/ingest.hpp"

namespace rmode::synth {

// A stretch of epochs transmitted at one SNR level.
struct SnrSegment {
  std::uint64_t epochs = 0;
  double snr_db = 0.0;
};

struct TransmitterTruth {
  std::string id;
  double jitter_m = 0.0;  // J_i >= 0
};

// Ground truth for a synthetic run: the parameters a fit is later judged
// against.  All transmitters share the SNR profile and epoch grid.
struct SynthTruth {
  std::vector<TransmitterTruth> transmitters;
  double c_const_m = 0.0;  // shared C >= 0
  std::vector<SnrSegment> snr_profile;
  double wavelength_m = 0.0;
  double epoch_step_s = 1.0;
  std::uint64_t rng_seed = 0;
  std::optional<std::string> origin;  // echoed into the log header
};

// Maps any finite phase into [0, 2*pi).  Throws std::invalid_argument on
// non-finite input.
double wrap_phase(double phase_rad);

// Simulates wrapped-phase logs: per transmitter, a starting phase drawn
// uniformly in [0, 2*pi) plus Gaussian TOA noise of standard deviation
// sqrt(J_i^2 + C^2/snr) meters, scaled to radians and wrapped.  Identical
// truth (including seed) yields identical output, independent of platform.
std::vector<ingest::RawPhaseSeries> generate(const SynthTruth& truth);

// One human-readable warning per (transmitter, segment) whose phase noise is
// large enough (3*sigma >= pi) that unwrapping the generated log becomes
// unreliable.
std::vector<std::string> noise_warnings(const SynthTruth& truth);

// Truth file round-trip (JSON).  load_truth names the missing field in its
// ParseError; values are validated (non-negative J and C, positive step and
// wavelength, non-empty profile, unique transmitter ids).
SynthTruth load_truth(std::istream& in);
SynthTruth load_truth_file(const std::string& path);
void write_truth(const SynthTruth& truth, std::ostream& out);

}  // namespace rmode::synth
