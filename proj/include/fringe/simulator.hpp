#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

#include "fringe/image.hpp"
#include "fringe/pattern.hpp"
#include "fringe/response.hpp"

namespace fringe {

// Projector-to-camera colour chain: crosstalk mixing, offset, per-channel
// response, additive Gaussian read noise.
struct CameraModel {
  Eigen::Matrix3d crosstalk = Eigen::Matrix3d::Identity();  // row i: camera channel i over projector channels
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  std::array<ResponseCurve, 3> response{};
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  // Rejects a crosstalk matrix with condition number above 1e6 and negative noise.
  void validate() const;

  static CameraModel identity();
  // gamma 2.2 on every channel, dominant-diagonal crosstalk with leakage, offset 0.02.
  static CameraModel distortion_preset();
};

inline constexpr double kMaxCrosstalkCondition = 1e6;

double condition_number(const Eigen::Matrix3d& m);

struct SceneModel {
  DepthMap depth;
  RgbImage albedo;
  double kappa = 1.0;  // cycles of phase shift per depth unit
  double reference_depth = 0.0;

  void validate() const;
};

// Analytic surface building blocks, all measured in pixels for x/y and scene
// units for height.
struct SurfaceFeature {
  enum class Kind { Hemisphere, Gaussian };
  Kind kind = Kind::Gaussian;
  double cx = 0.0;
  double cy = 0.0;
  double size = 1.0;  // radius for a hemisphere, standard deviation for a Gaussian
  double height = 1.0;
};

struct DepthSpec {
  double base = 0.0;
  double tilt_x = 0.0;  // depth units per pixel
  double tilt_y = 0.0;
  std::vector<SurfaceFeature> features;
  int supersample = 1;  // n x n samples averaged over each pixel footprint
};

DepthMap build_depth(const DepthSpec& spec, int width, int height);

struct AlbedoSpec {
  std::array<double, 3> mean{1.0, 1.0, 1.0};
  std::array<double, 3> amplitude{0.0, 0.0, 0.0};
  std::array<double, 3> phase{0.0, 0.0, 0.0};  // cycles
  double period_x = 0.0;  // pixels; 0 disables variation along x
  double period_y = 0.0;
};

// rho_c(x,y) = mean_c + amplitude_c * sin(2 pi (x / period_x + y / period_y + phase_c)).
RgbImage build_albedo(const AlbedoSpec& spec, int width, int height);

// Capture of the pattern off the scene before the camera chain.
RgbImage reflect(const PatternSpec& spec, const SceneModel& scene);

// Ground-truth wrapped phase frac(carrier + kappa (z - z0)) seen by the camera.
PhaseMap observed_phase(const PatternSpec& spec, const SceneModel& scene);

// Ground-truth unwrapped phase carrier + kappa (z - z0), NaN where depth is masked.
Plane observed_unwrapped_phase(const PatternSpec& spec, const SceneModel& scene);

// v = M C + beta, w = response(clamp(v)), + N(0, sigma) drawn from mt19937_64(seed)
// in row-major, channel-minor order, final clamp to [0,1].
RgbImage apply_camera(const RgbImage& image, const CameraModel& cam);

// Projector value of column x in a calibration ramp: x / (width - 1).
double ramp_value(int x, int width);

// Image whose channel `channel` ramps 0 -> 1 left to right; other channels zero.
RgbImage calibration_ramp(int channel, int width, int height);

// apply_camera of the three single-channel ramps.
std::array<RgbImage, 3> calibration_captures(const CameraModel& cam, int width, int height);

// Impulse corruption of about `fraction` of the pixels, chosen by a seeded generator.
// White saturates all three channels, leaving the pixel's phase undefined; Channel
// saturates one randomly chosen channel and so corrupts the phase instead.
enum class SaltMode { White, Channel };

RgbImage add_salt_noise(const RgbImage& image, double fraction, std::uint64_t seed, Mask* corrupted = nullptr,
                        SaltMode mode = SaltMode::White);

}  // namespace fringe
