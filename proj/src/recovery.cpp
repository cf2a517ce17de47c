#include "fringe/recovery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fringe/error.hpp"
#include "fringe/kernels.hpp"
#include "fringe/simulator.hpp"

namespace fringe {

CrosstalkFit estimate_crosstalk(const std::array<RgbImage, 3>& captures, double lo, double hi) {
  const int width = captures[0].width();
  const int height = captures[0].height();
  for (const auto& c : captures) {
    if (c.width() != width || c.height() != height) fail(ErrorKind::DimensionMismatch, "calibration captures differ in size");
  }
  // Normal equations for each camera channel over regressors (p_R, p_G, p_B, 1).
  Eigen::Matrix4d xtx = Eigen::Matrix4d::Zero();
  Eigen::Matrix<double, 4, 3> xty = Eigen::Matrix<double, 4, 3>::Zero();
  std::size_t samples = 0;
  for (int k = 0; k < 3; ++k) {
    const auto& capture = captures[static_cast<std::size_t>(k)];
    for (int x = 0; x < width; ++x) {
      const double p = ramp_value(x, width);
      if (p < lo || p > hi) continue;
      Eigen::Vector4d row = Eigen::Vector4d::Zero();
      row(k) = p;
      row(3) = 1.0;
      Eigen::Vector3d column_sum = Eigen::Vector3d::Zero();
      for (int y = 0; y < height; ++y) {
        for (int c = 0; c < 3; ++c) column_sum(c) += capture.at(c, x, y);
      }
      xtx += static_cast<double>(height) * row * row.transpose();
      xty += row * column_sum.transpose();
      samples += static_cast<std::size_t>(height);
    }
  }
  const Eigen::FullPivLU<Eigen::Matrix4d> lu(xtx);
  if (lu.rank() < 4) fail(ErrorKind::Unfittable, "calibration ramps do not span the affine model");
  const Eigen::Matrix<double, 4, 3> coef = xtx.ldlt().solve(xty);

  CrosstalkFit fit;
  fit.matrix = coef.topRows<3>().transpose();
  fit.offset = coef.row(3).transpose();
  fit.samples = samples;
  if (!fit.matrix.allFinite() || condition_number(fit.matrix) > kMaxCrosstalkCondition) {
    fail(ErrorKind::Unfittable, "fitted crosstalk matrix is degenerate (captures carry no ramp signal)");
  }
  return fit;
}

RgbImage compensate_crosstalk(const RgbImage& image, const Eigen::Matrix3d& matrix, const Eigen::Vector3d& offset) {
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(matrix);
  if (!lu.isInvertible() || condition_number(matrix) > kMaxCrosstalkCondition) {
    fail(ErrorKind::Singular, "crosstalk matrix is not invertible");
  }
  const Eigen::Matrix3d inverse = lu.inverse();
  kernels::Matrix3 inv{};
  kernels::Vector3 beta{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) inv[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = inverse(r, c);
    beta[static_cast<std::size_t>(r)] = offset(r);
  }
  RgbImage out(image.width(), image.height());
  kernels::omp::compensate(out, image, inv, beta);
  return out;
}

BalancedImage local_color_balance(const RgbImage& image, int window) {
  if (window < 3 || window % 2 == 0) fail(ErrorKind::InvalidArgument, "balance window must be odd and >= 3");
  BalancedImage out{RgbImage(image.width(), image.height()), Mask(image.width(), image.height(), 1)};
  Plane mean(image.width(), image.height());
  for (int c = 0; c < 3; ++c) {
    kernels::omp::box_mean(mean, image.channel(c), image.width(), image.height(), window);
    const auto src = image.channel(c);
    auto dst = out.image.channel(c);
    for (std::size_t i = 0; i < mean.size(); ++i) {
      if (mean[i] > kBalanceEpsilon) {
        dst[i] = src[i] / mean[i];
      } else {
        dst[i] = 0.0;
        out.valid[i] = 0;
      }
    }
  }
  return out;
}

PhaseMap wrapped_phase(const RgbImage& image) {
  Plane phase(image.width(), image.height());
  Mask valid(image.width(), image.height());
  kernels::omp::wrapped_phase(phase, valid, image, nullptr);
  return PhaseMap(std::move(phase), std::move(valid));
}

PhaseMap wrapped_phase(const RgbImage& image, const Mask& input_valid) {
  if (!input_valid.same_shape(image.width(), image.height())) fail(ErrorKind::DimensionMismatch, "mask and image shapes differ");
  Plane phase(image.width(), image.height());
  Mask valid(image.width(), image.height());
  kernels::omp::wrapped_phase(phase, valid, image, &input_valid);
  return PhaseMap(std::move(phase), std::move(valid));
}

PhaseAdjustment::PhaseAdjustment(std::vector<double> quantiles, int bins, double threshold)
    : quantiles_(std::move(quantiles)), bins_(bins), threshold_(threshold) {
  if (bins_ < 2) fail(ErrorKind::InvalidArgument, "adjustment needs at least 2 bins");
  if (quantiles_.size() < static_cast<std::size_t>(bins_)) fail(ErrorKind::InsufficientData, "fewer phase samples than bins");
  if (!std::is_sorted(quantiles_.begin(), quantiles_.end())) fail(ErrorKind::InvalidArgument, "quantiles must be sorted");
  if (!(quantiles_.front() >= 0.0) || !(quantiles_.back() < 1.0)) fail(ErrorKind::InvalidArgument, "quantiles must lie in [0,1)");
  const std::size_t m = quantiles_.size();
  const auto n = static_cast<std::size_t>(bins_);
  knots_.resize(n + 1);
  knots_[0] = 0.0;
  for (std::size_t j = 1; j < n; ++j) knots_[j] = quantiles_[j * m / n];
  knots_[n] = 1.0;
}

double PhaseAdjustment::map(double phase) const { return kernels::remap_one(phase, knots_); }

PhaseAdjustment build_adjustment(const PhaseMap& phase, const Plane& intensity, double threshold, int bins,
                                 std::size_t sample_target) {
  if (!intensity.same_shape(phase.width(), phase.height())) fail(ErrorKind::DimensionMismatch, "intensity and phase shapes differ");
  if (bins < 2) fail(ErrorKind::InvalidArgument, "adjustment needs at least 2 bins");
  if (sample_target == 0) fail(ErrorKind::InvalidArgument, "sample target must be positive");
  std::size_t qualifying = 0;
  for (std::size_t i = 0; i < phase.size(); ++i) qualifying += phase.is_valid(i) && intensity[i] > threshold;
  if (qualifying < static_cast<std::size_t>(bins)) {
    fail(ErrorKind::InsufficientData, std::to_string(qualifying) + " pixels above threshold, need at least " + std::to_string(bins));
  }
  // A stride sharing a factor with the row length samples only a subset of columns, which
  // aliases against periodic fringes. Step up to the next stride coprime with the width.
  std::size_t stride = std::max<std::size_t>(1, qualifying / sample_target);
  const auto width = static_cast<std::size_t>(phase.width());
  while (stride > 1 && std::gcd(stride, width) != 1) ++stride;
  std::vector<double> samples;
  samples.reserve(qualifying / stride + 1);
  std::size_t rank = 0;
  for (std::size_t i = 0; i < phase.size(); ++i) {
    if (!phase.is_valid(i) || !(intensity[i] > threshold)) continue;
    if (rank++ % stride == 0) samples.push_back(phase[i]);
  }
  std::sort(samples.begin(), samples.end());
  return PhaseAdjustment(std::move(samples), bins, threshold);
}

PhaseMap apply_adjustment(const PhaseMap& phase, const PhaseAdjustment& adjustment) {
  Plane values = phase.phase();
  kernels::omp::remap_phase(values, phase.valid(), adjustment.knots());
  return PhaseMap(std::move(values), phase.valid());
}

void RecoveryParams::validate() const {
  if (balance_window != 0 && (balance_window < 3 || balance_window % 2 == 0)) {
    fail(ErrorKind::InvalidArgument, "balance window must be 0 (off) or odd and >= 3");
  }
  if (adjust && bins < 2) fail(ErrorKind::InvalidArgument, "adjustment bins must be >= 2");
  if (adjust && samples < static_cast<std::size_t>(bins)) fail(ErrorKind::InvalidArgument, "sample target must be >= bins");
  if (!(threshold >= 0.0 && threshold <= 1.0)) fail(ErrorKind::InvalidArgument, "threshold must lie in [0,1]");
}

RecoveryResult recover_phase(const RgbImage& capture, const RecoveryParams& params, const CrosstalkFit* crosstalk) {
  params.validate();
  if (params.compensate && !crosstalk) fail(ErrorKind::InvalidArgument, "compensation requested without a crosstalk model");

  RecoveryResult result;
  result.brightness = Plane(capture.width(), capture.height());
  kernels::omp::brightness(result.brightness, capture);

  RgbImage working = capture;
  std::optional<Mask> balance_mask;
  auto balance = [&] {
    if (params.balance_window == 0) return;
    BalancedImage balanced = local_color_balance(working, params.balance_window);
    working = std::move(balanced.image);
    balance_mask = std::move(balanced.valid);
  };
  auto compensate = [&] {
    if (params.compensate) working = compensate_crosstalk(working, crosstalk->matrix, crosstalk->offset);
  };
  if (params.balance_before_compensation) {
    balance();
    compensate();
  } else {
    compensate();
    balance();
  }

  result.raw_phase = balance_mask ? wrapped_phase(working, *balance_mask) : wrapped_phase(working);
  if (params.adjust) {
    result.adjustment = build_adjustment(result.raw_phase, result.brightness, params.threshold, params.bins, params.samples);
    result.phase = apply_adjustment(result.raw_phase, *result.adjustment);
  } else {
    result.phase = result.raw_phase;
  }
  return result;
}

}  // namespace fringe
