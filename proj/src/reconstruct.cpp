#include "fringe/reconstruct.hpp"

#include <cmath>

#include "fringe/error.hpp"
#include "fringe/kernels.hpp"

namespace fringe {

Mask threshold_mask(const RgbImage& image, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) fail(ErrorKind::InvalidArgument, "brightness threshold must lie in [0,1]");
  Plane mean(image.width(), image.height());
  kernels::omp::brightness(mean, image);
  Mask valid(image.width(), image.height());
  for (std::size_t i = 0; i < mean.size(); ++i) valid[i] = mean[i] >= tau ? 1 : 0;
  return valid;
}

Plane remove_carrier(const UnwrappedPhaseMap& phase, const PatternSpec& spec) {
  if (phase.width() != spec.width || phase.height() != spec.height) fail(ErrorKind::DimensionMismatch, "phase and pattern dimensions differ");
  const Plane carrier = carrier_phase(spec);
  Plane out(phase.width(), phase.height());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = phase.is_valid(i) ? phase.value(i) - carrier[i] : kMaskedValue;
  return out;
}

DepthMap phase_to_depth(const Plane& phase, const Mask& valid, double kappa, double reference_depth, double reference_phase) {
  if (kappa == 0.0 || !std::isfinite(kappa)) fail(ErrorKind::InvalidArgument, "kappa must be finite and nonzero");
  if (!valid.same_shape(phase)) fail(ErrorKind::DimensionMismatch, "phase and mask shapes differ");
  Plane depth(phase.width(), phase.height(), kMaskedValue);
  Mask keep(phase.width(), phase.height(), 0);
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (!valid[i] || !std::isfinite(phase[i])) continue;
    depth[i] = reference_depth + (phase[i] - reference_phase) / kappa;
    keep[i] = 1;
  }
  return DepthMap(std::move(depth), std::move(keep));
}

DepthMap phase_to_depth(const UnwrappedPhaseMap& phase, double kappa, double reference_depth, double reference_phase) {
  return phase_to_depth(phase.values(), phase.valid(), kappa, reference_depth, reference_phase);
}

DepthMap mean_smooth(const DepthMap& depth, int window) {
  if (window < 1 || window % 2 == 0) fail(ErrorKind::InvalidArgument, "smoothing window must be odd and >= 1");
  if (window == 1) return depth;
  Plane out(depth.width(), depth.height());
  kernels::omp::masked_box_mean(out, depth.depth(), depth.valid(), window);
  return DepthMap(std::move(out), depth.valid());
}

DepthMap apply_mask(const DepthMap& depth, const Mask& keep) {
  if (!keep.same_shape(depth.depth())) fail(ErrorKind::DimensionMismatch, "mask and depth shapes differ");
  DepthMap out = depth;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!keep[i]) out.invalidate(i);
  }
  return out;
}

}  // namespace fringe
