#pragma once

#include <string>

#include "fringe/image.hpp"

namespace fringe {

// Horizontal stripes: phase advances down the rows (y). Vertical stripes:
// phase advances across the columns (x).
enum class Orientation { HorizontalStripes, VerticalStripes };

Orientation parse_orientation(const std::string& text);
std::string to_string(Orientation orientation);

struct PatternSpec {
  int width = 640;
  int height = 480;
  double cycles = 40.0;
  Orientation orientation = Orientation::HorizontalStripes;
  double mean_a = 0.5;
  double modulation_b = 0.5;

  // Throws Error(InvalidArgument) when the sinusoid would clip or is degenerate.
  void validate() const;

  // Extent of the stripe-normal axis in pixels.
  int stripe_extent() const noexcept {
    return orientation == Orientation::HorizontalStripes ? height : width;
  }
  // Phase advance per pixel along the stripe-normal axis, in cycles.
  double phase_step() const noexcept { return cycles / stripe_extent(); }
};

// frac(cycles * coordinate / extent) along the stripe-normal axis; all valid.
PhaseMap ideal_phase(const PatternSpec& spec);

// Unwrapped carrier cycles * coordinate / extent (the reference-plane phase).
Plane carrier_phase(const PatternSpec& spec);

// C1 = a + b cos(2 pi phi - 2 pi / 3), C2 = a + b cos(2 pi phi), C3 = a + b cos(2 pi phi + 2 pi / 3).
RgbImage synthesize_pattern(const PatternSpec& spec);

}  // namespace fringe
