#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace fringe {

// Row-major 2-D raster. Index i = y * width + x.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, T fill = T{});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }
  bool same_shape(int width, int height) const noexcept { return width_ == width && height_ == height; }
  template <typename U>
  bool same_shape(const Raster<U>& other) const noexcept {
    return same_shape(other.width(), other.height());
  }

  bool operator==(const Raster&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

template <typename T>
Raster<T>::Raster(int width, int height, T fill)
    : width_(width), height_(height),
      data_(static_cast<std::size_t>(width > 0 ? width : 0) * static_cast<std::size_t>(height > 0 ? height : 0), fill) {}

using Plane = Raster<double>;
using Mask = Raster<std::uint8_t>;

// Three planar channels of real intensity, nominally in [0,1]. Values outside
// the range are representable; only clamp() and file output force the range.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, double fill = 0.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<double> channel(int c) noexcept { return planes_[static_cast<std::size_t>(c)]; }
  std::span<const double> channel(int c) const noexcept { return planes_[static_cast<std::size_t>(c)]; }

  double& at(int c, int x, int y) { return planes_[static_cast<std::size_t>(c)][index(x, y)]; }
  double at(int c, int x, int y) const { return planes_[static_cast<std::size_t>(c)][index(x, y)]; }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  void clamp();
  bool operator==(const RgbImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::array<std::vector<double>, 3> planes_;
};

// Channel mean (C1 + C2 + C3) / 3 per pixel.
Plane brightness(const RgbImage& image);

inline constexpr double kMaskedValue = std::numeric_limits<double>::quiet_NaN();

// Wrapped phase in cycles, [0,1) on valid pixels. Masked pixels hold kMaskedValue.
class PhaseMap {
 public:
  PhaseMap() = default;
  PhaseMap(int width, int height);
  PhaseMap(Plane phase, Mask valid);

  int width() const noexcept { return phase_.width(); }
  int height() const noexcept { return phase_.height(); }
  std::size_t size() const noexcept { return phase_.size(); }

  const Plane& phase() const noexcept { return phase_; }
  const Mask& valid() const noexcept { return valid_; }
  bool is_valid(std::size_t i) const noexcept { return valid_[i] != 0; }
  double operator[](std::size_t i) const noexcept { return phase_[i]; }

  void set(std::size_t i, double phase);
  void invalidate(std::size_t i);
  std::size_t valid_count() const noexcept;

 private:
  Plane phase_;
  Mask valid_;
};

// Unwrapped phase stored as (wrapped phase, integer period index) so that the
// wrapped part survives unwrapping bit-for-bit; value() = wrapped + period.
class UnwrappedPhaseMap {
 public:
  UnwrappedPhaseMap() = default;
  explicit UnwrappedPhaseMap(const PhaseMap& wrapped);

  // Splits real-valued phase into floor and fraction; non-finite values are masked.
  static UnwrappedPhaseMap from_values(const Plane& values);

  int width() const noexcept { return wrapped_.width(); }
  int height() const noexcept { return wrapped_.height(); }
  std::size_t size() const noexcept { return wrapped_.size(); }

  bool is_valid(std::size_t i) const noexcept { return valid_[i] != 0; }
  const Mask& valid() const noexcept { return valid_; }
  const Plane& wrapped() const noexcept { return wrapped_; }
  const Raster<std::int64_t>& period() const noexcept { return period_; }

  double value(std::size_t i) const noexcept {
    return valid_[i] ? wrapped_[i] + static_cast<double>(period_[i]) : kMaskedValue;
  }
  Plane values() const;

  void set_period(std::size_t i, std::int64_t n) noexcept { period_[i] = n; }
  void assign(std::size_t i, std::int64_t n) noexcept {
    period_[i] = n;
    valid_[i] = 1;
  }
  void invalidate(std::size_t i) noexcept { valid_[i] = 0; }
  std::size_t valid_count() const noexcept;

 private:
  Plane wrapped_;
  Raster<std::int64_t> period_;
  Mask valid_;
};

// Depth in scene units; masked pixels hold kMaskedValue.
class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int width, int height, double fill = 0.0);
  DepthMap(Plane depth, Mask valid);

  int width() const noexcept { return depth_.width(); }
  int height() const noexcept { return depth_.height(); }
  std::size_t size() const noexcept { return depth_.size(); }

  const Plane& depth() const noexcept { return depth_; }
  const Mask& valid() const noexcept { return valid_; }
  bool is_valid(std::size_t i) const noexcept { return valid_[i] != 0; }
  double operator[](std::size_t i) const noexcept { return depth_[i]; }

  void set(std::size_t i, double z);
  void invalidate(std::size_t i);
  std::size_t valid_count() const noexcept;

 private:
  Plane depth_;
  Mask valid_;
};

}  // namespace fringe
