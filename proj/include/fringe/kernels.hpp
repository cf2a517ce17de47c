#pragma once

// Data-parallel image kernels. Every kernel exists twice:
//   kernels::serial  plain loops, kept as the reference for tests
//   kernels::omp     OpenMP pixel-parallel versions used by the library
// Point-wise kernels share their per-pixel arithmetic and agree bit-for-bit;
// the windowed ones (box means) agree to rounding.

#include <array>
#include <span>

#include "fringe/image.hpp"
#include "fringe/response.hpp"

namespace fringe::kernels {

using Matrix3 = std::array<std::array<double, 3>, 3>;
using Vector3 = std::array<double, 3>;

struct FringeParams {
  double mean = 0.5;
  double modulation = 0.5;
};

struct CameraParams {
  Matrix3 crosstalk{};
  Vector3 offset{};
  std::array<ResponseCurve, 3> response{};
};

// Kernel contracts (identical for both namespaces):
//   carrier          frac(cycles * coord / extent), coord = y when along_rows else x
//   synthesize       three phase-shifted sinusoids from a phase field in cycles
//   reflect          pattern off a surface: shift kappa * (z - z0), per-channel albedo;
//                    masked depth renders black and its observed phase is NaN
//   camera_transfer  w = response(clamp(M C + beta, 0, 1)), no noise
//   compensate       out = Minv (C - beta)
//   box_mean         mean over a window x window box truncated at the borders
//   masked_box_mean  mean over valid pixels in the window; invalid pixels stay NaN
//   wrapped_phase    phase in cycles; invalid where input_valid is off or the colour is grey
//   remap_phase      piecewise-linear monotone remap through knots[0..N], knots[0]=0, knots[N]=1
//   brightness       (C1 + C2 + C3) / 3

namespace serial {
void carrier(Plane& out, double cycles, bool along_rows);
void synthesize(RgbImage& out, const Plane& phase, FringeParams params);
void reflect(RgbImage& out, Plane& observed, const Plane& carrier, const Plane& depth, const Mask& valid,
             const RgbImage& albedo, double kappa, double reference_depth, FringeParams params);
void camera_transfer(RgbImage& out, const RgbImage& in, const CameraParams& cam);
void compensate(RgbImage& out, const RgbImage& in, const Matrix3& inverse, const Vector3& offset);
void box_mean(Plane& out, std::span<const double> in, int width, int height, int window);
void masked_box_mean(Plane& out, const Plane& in, const Mask& valid, int window);
void wrapped_phase(Plane& phase, Mask& valid, const RgbImage& image, const Mask* input_valid);
void remap_phase(Plane& phase, const Mask& valid, std::span<const double> knots);
void brightness(Plane& out, const RgbImage& image);
}  // namespace serial

namespace omp {
void carrier(Plane& out, double cycles, bool along_rows);
void synthesize(RgbImage& out, const Plane& phase, FringeParams params);
void reflect(RgbImage& out, Plane& observed, const Plane& carrier, const Plane& depth, const Mask& valid,
             const RgbImage& albedo, double kappa, double reference_depth, FringeParams params);
void camera_transfer(RgbImage& out, const RgbImage& in, const CameraParams& cam);
void compensate(RgbImage& out, const RgbImage& in, const Matrix3& inverse, const Vector3& offset);
void box_mean(Plane& out, std::span<const double> in, int width, int height, int window);
void masked_box_mean(Plane& out, const Plane& in, const Mask& valid, int window);
void wrapped_phase(Plane& phase, Mask& valid, const RgbImage& image, const Mask* input_valid);
void remap_phase(Plane& phase, const Mask& valid, std::span<const double> knots);
void brightness(Plane& out, const RgbImage& image);
}  // namespace omp

// Position of `phase` on the remap knots, shared by both variants. Ties go to
// the lower bin.
double remap_one(double phase, std::span<const double> knots);

}  // namespace fringe::kernels
