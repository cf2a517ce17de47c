#pragma once

#include "fringe/image.hpp"
#include "fringe/pattern.hpp"

namespace fringe {

// Valid iff (C1 + C2 + C3) / 3 >= tau; tau must lie in [0,1].
Mask threshold_mask(const RgbImage& image, double tau);

// Subtracts the pattern's unwrapped carrier (the phase of the reference plane)
// from every valid pixel, leaving the scene-induced phase shift.
Plane remove_carrier(const UnwrappedPhaseMap& phase, const PatternSpec& spec);

// z = reference_depth + (phi - reference_phase) / kappa on valid pixels.
DepthMap phase_to_depth(const UnwrappedPhaseMap& phase, double kappa, double reference_depth, double reference_phase);
DepthMap phase_to_depth(const Plane& phase, const Mask& valid, double kappa, double reference_depth, double reference_phase);

// Mean of the valid depths in an odd window truncated at borders and masks.
DepthMap mean_smooth(const DepthMap& depth, int window);

// Restricts a depth map to the pixels of `keep`.
DepthMap apply_mask(const DepthMap& depth, const Mask& keep);

}  // namespace fringe
