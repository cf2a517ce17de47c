#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fringe/image.hpp"
#include "fringe/pattern.hpp"

namespace fringe {

struct UnwrapConfig {
  double intensity_threshold = 0.1;
  int correction_window = 11;
  // Stripe orientation; the axis along the stripes changes phase least and is
  // preferred both in propagation and in the correction sweep.
  Orientation orientation = Orientation::HorizontalStripes;
  std::size_t max_seed_restarts = 1'000'000;
  // Priority intensities are rounded to this many levels per unit so that
  // sub-quantum differences do not reorder propagation; 0 compares raw values.
  int intensity_levels = 256;
  // Integer period assigned to the first seed.
  std::int64_t seed_period = 0;

  void validate() const;
};

// One propagation tree. A region started next to (8-connected) an already
// unwrapped pixel is unwrapped relative to it and records that pixel in
// `linked_to`; otherwise its global offset is independent of the others.
struct UnwrapRegion {
  std::size_t seed = 0;
  std::int64_t linked_to = -1;
  std::size_t pixels = 0;
};

struct UnwrapResult {
  UnwrappedPhaseMap phase;
  Raster<std::int32_t> region;  // region id per pixel, -1 where unassigned
  std::vector<UnwrapRegion> regions;

  // Number of regions whose integer offset is arbitrary relative to the first.
  std::size_t independent_regions() const;
};

// Best-first propagation of integer periods from a bright seed near the image
// centre: phi_u(p) = phi_a(p) + round(phi_u(q) - phi_a(p)) with q the neighbour
// that dequeued p. Pixels that are masked or below the intensity threshold stay
// masked. Throws Error(NoValidPixels).
UnwrapResult initial_unwrap(const PhaseMap& phase, const Plane& intensity, const UnwrapConfig& config);

// Sequential in-place correction phi += round(window mean - phi), visiting the
// centre line first and sweeping outward along the low-gradient axis.
UnwrappedPhaseMap correct_phase(const UnwrappedPhaseMap& phase, const UnwrapConfig& config);

// Visit order used by correct_phase (exposed for tests and visualisation).
std::vector<std::size_t> correction_order(int width, int height, Orientation orientation);

}  // namespace fringe
