#include "fringe/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fringe/error.hpp"

namespace fringe {

namespace {

void require_positive(int width, int height) {
  if (width <= 0 || height <= 0) {
    fail(ErrorKind::InvalidArgument,
         "raster dimensions must be positive, got " + std::to_string(width) + "x" + std::to_string(height));
  }
}

std::size_t count_valid(const Mask& mask) {
  return static_cast<std::size_t>(std::count_if(mask.data().begin(), mask.data().end(), [](auto v) { return v != 0; }));
}

}  // namespace

RgbImage::RgbImage(int width, int height, double fill) : width_(width), height_(height) {
  require_positive(width, height);
  for (auto& plane : planes_) plane.assign(pixel_count(), fill);
}

void RgbImage::clamp() {
  for (auto& plane : planes_) {
    for (double& v : plane) v = std::clamp(v, 0.0, 1.0);
  }
}

Plane brightness(const RgbImage& image) {
  Plane out(image.width(), image.height());
  const auto r = image.channel(0);
  const auto g = image.channel(1);
  const auto b = image.channel(2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (r[i] + g[i] + b[i]) / 3.0;
  return out;
}

PhaseMap::PhaseMap(int width, int height) : phase_(width, height, kMaskedValue), valid_(width, height, 0) {
  require_positive(width, height);
}

PhaseMap::PhaseMap(Plane phase, Mask valid) : phase_(std::move(phase)), valid_(std::move(valid)) {
  require_positive(phase_.width(), phase_.height());
  if (!valid_.same_shape(phase_)) fail(ErrorKind::DimensionMismatch, "phase and mask shapes differ");
  for (std::size_t i = 0; i < phase_.size(); ++i) {
    if (!valid_[i]) {
      phase_[i] = kMaskedValue;
    } else if (!(phase_[i] >= 0.0 && phase_[i] < 1.0)) {
      fail(ErrorKind::InvalidArgument, "valid wrapped phase outside [0,1)");
    }
  }
}

void PhaseMap::set(std::size_t i, double phase) {
  if (!(phase >= 0.0 && phase < 1.0)) fail(ErrorKind::InvalidArgument, "phase must lie in [0,1)");
  phase_[i] = phase;
  valid_[i] = 1;
}

void PhaseMap::invalidate(std::size_t i) {
  phase_[i] = kMaskedValue;
  valid_[i] = 0;
}

std::size_t PhaseMap::valid_count() const noexcept { return count_valid(valid_); }

UnwrappedPhaseMap::UnwrappedPhaseMap(const PhaseMap& wrapped)
    : wrapped_(wrapped.phase()), period_(wrapped.width(), wrapped.height(), 0), valid_(wrapped.width(), wrapped.height(), 0) {}

UnwrappedPhaseMap UnwrappedPhaseMap::from_values(const Plane& values) {
  PhaseMap wrapped(values.width(), values.height());
  Raster<std::int64_t> period(values.width(), values.height(), 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      wrapped.invalidate(i);
      continue;
    }
    double n = std::floor(values[i]);
    double f = values[i] - n;
    if (f >= 1.0) {
      f = 0.0;
      n += 1.0;
    }
    wrapped.set(i, f);
    period[i] = static_cast<std::int64_t>(n);
  }
  UnwrappedPhaseMap out(wrapped);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (wrapped.is_valid(i)) out.assign(i, period[i]);
  }
  return out;
}

Plane UnwrappedPhaseMap::values() const {
  Plane out(width(), height());
  for (std::size_t i = 0; i < size(); ++i) out[i] = value(i);
  return out;
}

std::size_t UnwrappedPhaseMap::valid_count() const noexcept { return count_valid(valid_); }

DepthMap::DepthMap(int width, int height, double fill) : depth_(width, height, fill), valid_(width, height, 1) {
  require_positive(width, height);
}

DepthMap::DepthMap(Plane depth, Mask valid) : depth_(std::move(depth)), valid_(std::move(valid)) {
  require_positive(depth_.width(), depth_.height());
  if (!valid_.same_shape(depth_)) fail(ErrorKind::DimensionMismatch, "depth and mask shapes differ");
  for (std::size_t i = 0; i < depth_.size(); ++i) {
    if (!valid_[i]) {
      depth_[i] = kMaskedValue;
    } else if (!std::isfinite(depth_[i])) {
      fail(ErrorKind::InvalidArgument, "valid depth must be finite");
    }
  }
}

void DepthMap::set(std::size_t i, double z) {
  if (!std::isfinite(z)) fail(ErrorKind::InvalidArgument, "valid depth must be finite");
  depth_[i] = z;
  valid_[i] = 1;
}

void DepthMap::invalidate(std::size_t i) {
  depth_[i] = kMaskedValue;
  valid_[i] = 0;
}

std::size_t DepthMap::valid_count() const noexcept { return count_valid(valid_); }

}  // namespace fringe
