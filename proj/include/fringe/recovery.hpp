#pragma once

#include <Eigen/Core>
#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "fringe/image.hpp"

namespace fringe {

// Affine colour-mixing model C_camera = matrix * C_projector + offset.
struct CrosstalkFit {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Identity();
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  std::size_t samples = 0;
};

// Least-squares fit over the three single-channel ramp captures produced by
// calibration_captures(). Only columns whose projector value lies in
// [lo, hi] contribute. Throws Error(Unfittable) on a rank-deficient design or
// a degenerate (near-singular) fitted matrix.
CrosstalkFit estimate_crosstalk(const std::array<RgbImage, 3>& captures, double lo = 0.2, double hi = 0.8);

// Minv (C - beta) per pixel, unclamped. Throws Error(Singular).
RgbImage compensate_crosstalk(const RgbImage& image, const Eigen::Matrix3d& matrix, const Eigen::Vector3d& offset);

inline constexpr double kBalanceEpsilon = 1e-4;

struct BalancedImage {
  RgbImage image;
  Mask valid;  // off where some channel's local mean is <= kBalanceEpsilon
};

// c_i = C_i / mean_window(C_i). `window` must be odd and >= 3.
BalancedImage local_color_balance(const RgbImage& image, int window);

// atan2(sqrt(3)(C1 - C3), 2 C2 - C1 - C3) / 2 pi wrapped to [0,1); grey pixels are masked.
PhaseMap wrapped_phase(const RgbImage& image);
PhaseMap wrapped_phase(const RgbImage& image, const Mask& valid);

// Sorted phase samples defining an empirical CDF with `bins` equal-count bins.
class PhaseAdjustment {
 public:
  PhaseAdjustment(std::vector<double> quantiles, int bins, double threshold);

  const std::vector<double>& quantiles() const noexcept { return quantiles_; }
  int bins() const noexcept { return bins_; }
  double threshold() const noexcept { return threshold_; }

  // knots[0] = 0, knots[j] = quantiles[floor(j M / N)], knots[N] = 1.
  const std::vector<double>& knots() const noexcept { return knots_; }

  // Adjusted value of a single phase.
  double map(double phase) const;

 private:
  std::vector<double> quantiles_;
  int bins_;
  double threshold_;
  std::vector<double> knots_;
};

// Samples the valid pixels with intensity above `threshold` on a fixed
// row-major stride (about `sample_target` of them) and sorts their phases.
// The stride is coprime with the image width so that the samples cover every
// column instead of aliasing with the stripes.
// Throws Error(InsufficientData) when fewer than `bins` pixels qualify.
PhaseAdjustment build_adjustment(const PhaseMap& phase, const Plane& intensity, double threshold, int bins,
                                 std::size_t sample_target);

// Maps every valid phase through the piecewise-linear empirical CDF.
PhaseMap apply_adjustment(const PhaseMap& phase, const PhaseAdjustment& adjustment);

struct RecoveryParams {
  bool compensate = true;
  bool balance_before_compensation = false;
  int balance_window = 13;  // 0 disables colour balance
  bool adjust = true;
  int bins = 256;
  double threshold = 0.1;
  std::size_t samples = 10000;

  void validate() const;
};

struct RecoveryResult {
  PhaseMap raw_phase;  // before distribution adjustment
  PhaseMap phase;      // final wrapped phase
  Plane brightness;    // of the input capture
  std::optional<PhaseAdjustment> adjustment;
};

// compensate -> balance -> wrapped phase -> adjustment, with each step
// switchable through `params`. `crosstalk` may be null when compensation is off.
RecoveryResult recover_phase(const RgbImage& capture, const RecoveryParams& params, const CrosstalkFit* crosstalk);

}  // namespace fringe
