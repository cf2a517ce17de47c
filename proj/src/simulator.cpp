#include "fringe/simulator.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fringe/error.hpp"
#include "fringe/kernels.hpp"

namespace fringe {

namespace {

kernels::CameraParams to_params(const CameraModel& cam) {
  kernels::CameraParams p;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) p.crosstalk[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = cam.crosstalk(r, c);
    p.offset[static_cast<std::size_t>(r)] = cam.offset(r);
  }
  p.response = cam.response;
  return p;
}

}  // namespace

double condition_number(const Eigen::Matrix3d& m) {
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
  const auto& s = svd.singularValues();
  if (s(2) <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(2);
}

void CameraModel::validate() const {
  if (!crosstalk.allFinite() || !offset.allFinite()) fail(ErrorKind::InvalidArgument, "camera model has non-finite entries");
  if (condition_number(crosstalk) > kMaxCrosstalkCondition) {
    fail(ErrorKind::Singular, "crosstalk matrix condition number exceeds 1e6");
  }
  if (!(noise_sigma >= 0.0)) fail(ErrorKind::InvalidArgument, "noise sigma must be >= 0");
}

CameraModel CameraModel::identity() { return CameraModel{}; }

CameraModel CameraModel::distortion_preset() {
  CameraModel cam;
  cam.crosstalk << 0.9, 0.08, 0.02,
                   0.1, 0.8, 0.1,
                   0.03, 0.12, 0.85;
  cam.offset = Eigen::Vector3d::Constant(0.02);
  cam.response = {ResponseCurve::gamma(2.2), ResponseCurve::gamma(2.2), ResponseCurve::gamma(2.2)};
  return cam;
}

void SceneModel::validate() const {
  if (albedo.width() != depth.width() || albedo.height() != depth.height()) {
    fail(ErrorKind::DimensionMismatch, "albedo and depth dimensions differ");
  }
  if (kappa == 0.0 || !std::isfinite(kappa)) fail(ErrorKind::InvalidArgument, "kappa must be finite and nonzero");
}

namespace {

double surface_at(const DepthSpec& spec, double x, double y) {
  double z = spec.base + spec.tilt_x * x + spec.tilt_y * y;
  for (const auto& f : spec.features) {
    const double dx = x - f.cx;
    const double dy = y - f.cy;
    const double r2 = dx * dx + dy * dy;
    if (f.kind == SurfaceFeature::Kind::Hemisphere) {
      const double s = 1.0 - r2 / (f.size * f.size);
      if (s > 0.0) z += f.height * std::sqrt(s);
    } else {
      z += f.height * std::exp(-r2 / (2.0 * f.size * f.size));
    }
  }
  return z;
}

}  // namespace

DepthMap build_depth(const DepthSpec& spec, int width, int height) {
  if (spec.supersample < 1) fail(ErrorKind::InvalidArgument, "supersample factor must be at least 1");
  DepthMap depth(width, height);
  const int n = spec.supersample;
  const double step = 1.0 / n;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double z = 0.0;
      for (int sy = 0; sy < n; ++sy) {
        for (int sx = 0; sx < n; ++sx) {
          z += surface_at(spec, x + (sx + 0.5) * step - 0.5, y + (sy + 0.5) * step - 0.5);
        }
      }
      depth.set(depth.depth().index(x, y), z / (n * n));
    }
  }
  return depth;
}

RgbImage build_albedo(const AlbedoSpec& spec, int width, int height) {
  RgbImage albedo(width, height);
  const double fx = spec.period_x > 0.0 ? 1.0 / spec.period_x : 0.0;
  const double fy = spec.period_y > 0.0 ? 1.0 / spec.period_y : 0.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c) {
        const auto k = static_cast<std::size_t>(c);
        const double arg = 2.0 * std::numbers::pi * (fx * x + fy * y + spec.phase[k]);
        albedo.at(c, x, y) = spec.mean[k] + spec.amplitude[k] * std::sin(arg);
      }
    }
  }
  return albedo;
}

RgbImage reflect(const PatternSpec& spec, const SceneModel& scene) {
  spec.validate();
  scene.validate();
  if (scene.depth.width() != spec.width || scene.depth.height() != spec.height) {
    fail(ErrorKind::DimensionMismatch, "scene and pattern dimensions differ");
  }
  const PhaseMap carrier = ideal_phase(spec);
  RgbImage out(spec.width, spec.height);
  Plane observed(spec.width, spec.height);
  kernels::omp::reflect(out, observed, carrier.phase(), scene.depth.depth(), scene.depth.valid(), scene.albedo,
                        scene.kappa, scene.reference_depth, {spec.mean_a, spec.modulation_b});
  return out;
}

PhaseMap observed_phase(const PatternSpec& spec, const SceneModel& scene) {
  spec.validate();
  scene.validate();
  if (scene.depth.width() != spec.width || scene.depth.height() != spec.height) {
    fail(ErrorKind::DimensionMismatch, "scene and pattern dimensions differ");
  }
  const PhaseMap carrier = ideal_phase(spec);
  RgbImage scratch(spec.width, spec.height);
  Plane observed(spec.width, spec.height);
  kernels::omp::reflect(scratch, observed, carrier.phase(), scene.depth.depth(), scene.depth.valid(), scene.albedo,
                        scene.kappa, scene.reference_depth, {spec.mean_a, spec.modulation_b});
  return PhaseMap(std::move(observed), scene.depth.valid());
}

Plane observed_unwrapped_phase(const PatternSpec& spec, const SceneModel& scene) {
  scene.validate();
  Plane truth = carrier_phase(spec);
  if (!scene.depth.depth().same_shape(truth)) fail(ErrorKind::DimensionMismatch, "scene and pattern dimensions differ");
  for (std::size_t i = 0; i < truth.size(); ++i) {
    truth[i] = scene.depth.is_valid(i) ? truth[i] + scene.kappa * (scene.depth[i] - scene.reference_depth) : kMaskedValue;
  }
  return truth;
}

RgbImage apply_camera(const RgbImage& image, const CameraModel& cam) {
  cam.validate();
  RgbImage out(image.width(), image.height());
  kernels::omp::camera_transfer(out, image, to_params(cam));
  if (cam.noise_sigma > 0.0) {
    // The draw order is part of the determinism contract, so the stream is
    // generated sequentially and only the addition runs in parallel.
    const std::size_t n = image.pixel_count();
    std::vector<double> noise(3 * n);
    std::mt19937_64 rng(cam.seed);
    std::normal_distribution<double> gauss(0.0, cam.noise_sigma);
    for (double& v : noise) v = gauss(rng);
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < count; ++k) {
      const auto i = static_cast<std::size_t>(k);
      for (int c = 0; c < 3; ++c) out.channel(c)[i] += noise[3 * i + static_cast<std::size_t>(c)];
    }
  }
  out.clamp();
  return out;
}

double ramp_value(int x, int width) { return width > 1 ? static_cast<double>(x) / (width - 1) : 0.0; }

RgbImage calibration_ramp(int channel, int width, int height) {
  RgbImage ramp(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) ramp.at(channel, x, y) = ramp_value(x, width);
  }
  return ramp;
}

std::array<RgbImage, 3> calibration_captures(const CameraModel& cam, int width, int height) {
  cam.validate();
  std::array<RgbImage, 3> captures;
  for (int k = 0; k < 3; ++k) {
    CameraModel shot = cam;
    shot.seed = cam.seed + static_cast<std::uint64_t>(k);
    captures[static_cast<std::size_t>(k)] = apply_camera(calibration_ramp(k, width, height), shot);
  }
  return captures;
}

RgbImage add_salt_noise(const RgbImage& image, double fraction, std::uint64_t seed, Mask* corrupted, SaltMode mode) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) fail(ErrorKind::InvalidArgument, "salt fraction must lie in [0,1]");
  RgbImage out = image;
  Mask hit(image.width(), image.height(), 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  std::uniform_int_distribution<int> channel(0, 2);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    if (pick(rng) >= fraction) continue;
    if (mode == SaltMode::White) {
      for (int c = 0; c < 3; ++c) out.channel(c)[i] = 1.0;
    } else {
      out.channel(channel(rng))[i] = 1.0;
    }
    hit[i] = 1;
  }
  if (corrupted) *corrupted = std::move(hit);
  return out;
}

}  // namespace fringe
