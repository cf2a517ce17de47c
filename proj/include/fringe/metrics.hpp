#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fringe/image.hpp"

namespace fringe {

// a - b wrapped to [-0.5, 0.5) cycles.
double circular_difference(double a, double b);

// Largest |circular difference| over pixels valid in both maps.
double max_wrapped_error(const PhaseMap& estimate, const PhaseMap& truth);

// RMS circular error over pixels valid in both maps. With `align_offset`, the
// circular mean of the differences is removed first (a global phase offset is
// not an error for distribution-adjusted phase).
double wrapped_rms_error(const PhaseMap& estimate, const PhaseMap& truth, bool align_offset);

struct PeriodAgreement {
  double fraction = 0.0;       // pixels whose period index matches after alignment
  std::size_t compared = 0;
  std::size_t correct = 0;
  std::int64_t global_offset = 0;  // most common integer offset
};

// Compares unwrapped phase with the true unwrapped phase up to one global
// offset: a fractional part (circular mean) and the modal integer period.
// Pixels in `exclude` are skipped.
PeriodAgreement period_agreement(const UnwrappedPhaseMap& estimate, const Plane& truth, const Mask* exclude = nullptr);

// RMS of (estimate - truth - median(estimate - truth)) over valid estimate pixels.
double aligned_depth_rms(const DepthMap& estimate, const DepthMap& truth);

// Histogram of values in [0,1) over `bins` equal bins; masked entries skipped.
std::vector<std::size_t> phase_histogram(const PhaseMap& phase, int bins);
std::vector<std::size_t> phase_histogram(const std::vector<double>& values, int bins);

}  // namespace fringe
