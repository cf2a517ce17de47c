#include "fringe/pattern.hpp"

#include <cmath>

#include "fringe/error.hpp"
#include "fringe/kernels.hpp"
#include "pixel_ops.hpp"

namespace fringe {

Orientation parse_orientation(const std::string& text) {
  if (text == "horizontal" || text == "horizontal-stripes") return Orientation::HorizontalStripes;
  if (text == "vertical" || text == "vertical-stripes") return Orientation::VerticalStripes;
  fail(ErrorKind::InvalidArgument, "unknown orientation '" + text + "' (expected horizontal or vertical)");
}

std::string to_string(Orientation orientation) {
  return orientation == Orientation::HorizontalStripes ? "horizontal" : "vertical";
}

void PatternSpec::validate() const {
  if (width <= 0 || height <= 0) fail(ErrorKind::InvalidArgument, "pattern dimensions must be positive");
  if (!(cycles >= 1.0) || !std::isfinite(cycles)) fail(ErrorKind::InvalidArgument, "pattern cycles must be >= 1");
  if (!(modulation_b > 0.0)) fail(ErrorKind::InvalidArgument, "pattern modulation b must be > 0");
  if (mean_a - modulation_b < 0.0 || mean_a + modulation_b > 1.0) {
    fail(ErrorKind::InvalidArgument, "pattern a +/- b must stay within [0,1]");
  }
}

PhaseMap ideal_phase(const PatternSpec& spec) {
  spec.validate();
  Plane phase(spec.width, spec.height);
  kernels::omp::carrier(phase, spec.cycles, spec.orientation == Orientation::HorizontalStripes);
  return PhaseMap(std::move(phase), Mask(spec.width, spec.height, 1));
}

Plane carrier_phase(const PatternSpec& spec) {
  spec.validate();
  Plane out(spec.width, spec.height);
  const bool along_rows = spec.orientation == Orientation::HorizontalStripes;
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      out(x, y) = detail::carrier_at(along_rows ? y : x, spec.stripe_extent(), spec.cycles);
    }
  }
  return out;
}

RgbImage synthesize_pattern(const PatternSpec& spec) {
  const PhaseMap phase = ideal_phase(spec);
  RgbImage out(spec.width, spec.height);
  kernels::omp::synthesize(out, phase.phase(), {spec.mean_a, spec.modulation_b});
  return out;
}

}  // namespace fringe
