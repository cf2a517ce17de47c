// Acceptance suite: one PASS/FAIL line per criterion with the measured values.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>

#include "fringe/config.hpp"
#include "fringe/metrics.hpp"
#include "fringe/pipeline.hpp"
#include "fringe/recovery.hpp"
#include "fringe/simulator.hpp"
#include "fringe/unwrap.hpp"
#include "support.hpp"

using namespace fringe;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances.
constexpr double kRoundTripTol = 1e-9;
constexpr double kRoundTripSeconds = 1.0;
constexpr double kAffineTol = 1e-12;
constexpr double kFitTolNoisy = 1e-3;
constexpr double kFitTolExact = 1e-9;
constexpr double kFitNoise = 0.002;
constexpr int kHistogramBins = 64;
constexpr double kHistogramSpread = 0.20;
constexpr double kAdjustedRmsMax = 0.02;
constexpr double kNoisyUnwrapFraction = 0.999;
constexpr double kUnwrapNoise = 0.01;
constexpr double kSaltFraction = 0.01;
constexpr double kLinearDepthTol = 1e-6;
constexpr double kDistortedCycleTol = 0.05;
constexpr double kPipelineSeconds = 10.0;
constexpr double kBalanceTol = 5e-3;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

SceneModel flat_scene(int w, int h) {
  SceneModel scene;
  scene.depth = build_depth({}, w, h);
  scene.albedo = build_albedo({}, w, h);
  return scene;
}

// Operator infinity norm: largest absolute row sum.
double inf_norm(const Eigen::Matrix3d& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

Outcome round_trip() {
  const PatternSpec spec;
  const RgbImage capture = apply_camera(reflect(spec, flat_scene(spec.width, spec.height)), CameraModel::identity());
  RecoveryParams params;
  params.compensate = false;
  params.balance_window = 0;
  params.adjust = false;
  const auto start = Clock::now();
  const RecoveryResult r = recover_phase(capture, params, nullptr);
  const double t = seconds_since(start);
  const double err = max_wrapped_error(r.phase, ideal_phase(spec));
  return {err < kRoundTripTol && t < kRoundTripSeconds && r.phase.valid_count() == r.phase.size(),
          fmt("max error %.3e cycles (< %.0e), %.3f s (< %.0f s), %zu/%zu valid", err, kRoundTripTol, t, kRoundTripSeconds,
              r.phase.valid_count(), r.phase.size())};
}

Outcome affine_invariance() {
  constexpr int kColours = 1000;
  constexpr int kPairs = 100;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RgbImage colours(kColours, 1);
  for (int c = 0; c < 3; ++c) {
    for (double& v : colours.channel(c)) v = unit(rng);
  }
  const PhaseMap base = wrapped_phase(colours);
  double worst = 0.0;
  std::size_t exact = 0;
  std::size_t compared = 0;
  bool masks_agree = true;
  for (int p = 0; p < kPairs; ++p) {
    const double alpha = std::exp(std::uniform_real_distribution<double>(std::log(1e-2), std::log(1e2))(rng));
    const double beta = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    RgbImage t = colours;
    for (int c = 0; c < 3; ++c) {
      for (double& v : t.channel(c)) v = alpha * v + beta;
    }
    const PhaseMap out = wrapped_phase(t);
    for (std::size_t i = 0; i < base.size(); ++i) {
      masks_agree &= out.is_valid(i) == base.is_valid(i);
      if (!base.is_valid(i)) continue;
      ++compared;
      const double d = std::abs(circular_difference(out[i], base[i]));
      exact += d == 0.0;
      worst = std::max(worst, d);
    }
  }
  return {masks_agree && worst <= kAffineTol && compared == std::size_t(kColours) * kPairs,
          fmt("max deviation %.3e cycles (<= %.0e), %zu of %zu bit-identical", worst, kAffineTol, exact, compared)};
}

Outcome pattern_differential() {
  const PatternSpec spec;
  const Plane carrier = carrier_phase(spec);
  double worst = 0.0;
  for (int y = 0; y + 1 < spec.height; ++y) {
    for (int x = 0; x < spec.width; x += 37) worst = std::max(worst, std::abs(carrier(x, y + 1) - carrier(x, y) - 1.0 / 12.0));
  }
  const bool exact = spec.phase_step() == 1.0 / 12.0;
  return {exact && worst < 1e-12, fmt("step %.17g cycles = %.6f rad (pi/6 = %.6f), carrier step deviation %.1e", spec.phase_step(),
                                      2 * M_PI * spec.phase_step(), M_PI / 6, worst)};
}

Outcome crosstalk_fit() {
  CameraModel cam = CameraModel::distortion_preset();
  cam.response = {};
  const PatternSpec spec;
  const CrosstalkFit exact = estimate_crosstalk(calibration_captures(cam, spec.width, spec.height));
  cam.noise_sigma = kFitNoise;
  cam.seed = derive_seeds(1).calibration;
  const CrosstalkFit noisy = estimate_crosstalk(calibration_captures(cam, spec.width, spec.height));
  const double e0 = inf_norm(exact.matrix - cam.crosstalk);
  const double e1 = inf_norm(noisy.matrix - cam.crosstalk);
  return {e0 < kFitTolExact && e1 < kFitTolNoisy,
          fmt("||M-M^||inf sigma=0: %.3e (< %.0e); sigma=%.3f: %.3e (< %.0e)", e0, kFitTolExact, kFitNoise, e1, kFitTolNoisy)};
}

Outcome distribution_adjustment() {
  // A gently tilted plane sweeps the phase across every value.
  const PatternSpec spec;
  SceneModel scene = flat_scene(spec.width, spec.height);
  DepthSpec tilt;
  tilt.tilt_x = 3.0 / spec.width;
  scene.depth = build_depth(tilt, spec.width, spec.height);
  scene.kappa = 1.0;
  const CameraModel cam = CameraModel::distortion_preset();
  const RgbImage capture = apply_camera(reflect(spec, scene), cam);
  const CrosstalkFit fit = estimate_crosstalk(calibration_captures(cam, spec.width, spec.height));
  RecoveryParams params;
  params.balance_window = 0;
  const RecoveryResult r = recover_phase(capture, params, &fit);
  const PhaseMap truth = observed_phase(spec, scene);

  const auto hist = phase_histogram(r.phase, kHistogramBins);
  double mean = 0.0;
  for (auto c : hist) mean += double(c);
  mean /= kHistogramBins;
  double spread = 0.0;
  for (auto c : hist) spread = std::max(spread, std::abs(double(c) - mean) / mean);
  const double raw = wrapped_rms_error(r.raw_phase, truth, true);
  const double adjusted = wrapped_rms_error(r.phase, truth, true);
  return {spread <= kHistogramSpread && adjusted < raw && adjusted < kAdjustedRmsMax,
          fmt("max bin deviation %.1f%% (<= %.0f%%), RMS raw %.5f -> adjusted %.5f cycles (< %.2f)", 100 * spread,
              100 * kHistogramSpread, raw, adjusted, kAdjustedRmsMax)};
}

struct UnwrapScene {
  PatternSpec spec;
  SceneModel scene;
  Plane truth;
};

UnwrapScene hemisphere_scene() {
  UnwrapScene s;
  constexpr double kRadius = 230.0;
  DepthSpec d;
  d.features.push_back({SurfaceFeature::Kind::Hemisphere, 319.5, 239.5, kRadius, kRadius});
  d.supersample = 4;
  s.scene = flat_scene(s.spec.width, s.spec.height);
  s.scene.depth = build_depth(d, s.spec.width, s.spec.height);
  s.scene.kappa = 5.0 / kRadius;  // five cycles at the apex
  s.truth = observed_unwrapped_phase(s.spec, s.scene);
  return s;
}

PeriodAgreement unwrap_agreement(const UnwrapScene& s, double sigma, double salt, SaltMode mode, bool correct) {
  CameraModel cam = CameraModel::identity();
  cam.noise_sigma = sigma;
  cam.seed = derive_seeds(7).capture;
  RgbImage capture = apply_camera(reflect(s.spec, s.scene), cam);
  if (salt > 0) capture = add_salt_noise(capture, salt, derive_seeds(7).salt, nullptr, mode);
  const PhaseMap wrapped = wrapped_phase(capture);
  const UnwrapConfig cfg;
  const UnwrapResult u = initial_unwrap(wrapped, brightness(capture), cfg);
  return period_agreement(correct ? correct_phase(u.phase, cfg) : u.phase, s.truth);
}

Outcome unwrap_exactness() {
  const UnwrapScene s = hemisphere_scene();
  const PeriodAgreement clean = unwrap_agreement(s, 0.0, 0.0, SaltMode::White, false);
  const PeriodAgreement noisy = unwrap_agreement(s, kUnwrapNoise, kSaltFraction, SaltMode::White, true);
  return {clean.fraction == 1.0 && noisy.fraction >= kNoisyUnwrapFraction,
          fmt("noiseless %zu/%zu (100%% required); sigma %.2f + %.0f%% salt after correction %.4f%% of %zu (>= %.1f%%)", clean.correct,
              clean.compared, kUnwrapNoise, 100 * kSaltFraction, 100 * noisy.fraction, noisy.compared, 100 * kNoisyUnwrapFraction)};
}

std::string channel_salt_note() {
  const UnwrapScene s = hemisphere_scene();
  const PeriodAgreement initial = unwrap_agreement(s, kUnwrapNoise, kSaltFraction, SaltMode::Channel, false);
  const PeriodAgreement corrected = unwrap_agreement(s, kUnwrapNoise, kSaltFraction, SaltMode::Channel, true);
  return fmt("single-channel salt variant: %.4f%% initial, %.4f%% after correction", 100 * initial.fraction,
             100 * corrected.fraction);
}

Outcome end_to_end(const std::filesystem::path& scratch) {
  PipelineConfig linear = preset_config("linear");
  linear.output_dir = scratch / "linear";
  PipelineConfig distorted = preset_config("distorted");
  distorted.output_dir = scratch / "distorted";
  const PipelineOutcome a = run_pipeline(linear);
  const PipelineOutcome b = run_pipeline(distorted);
  const bool pass = a.report.depth_rms < kLinearDepthTol && b.report.depth_rms_cycles < kDistortedCycleTol &&
                    a.total_seconds < kPipelineSeconds && b.total_seconds < kPipelineSeconds;
  return {pass, fmt("linear RMS %.3e units (< %.0e) in %.2f s; distorted (sigma %.3f) RMS %.5f cycles (< %.2f) in %.2f s (< %.0f s)",
                    a.report.depth_rms, kLinearDepthTol, a.total_seconds, distorted.camera.noise_sigma, b.report.depth_rms_cycles,
                    kDistortedCycleTol, b.total_seconds, kPipelineSeconds)};
}

std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name != "timings.json") files[name] = fringe::test::slurp(entry.path());
  }
  return files;
}

Outcome determinism(const std::filesystem::path& scratch) {
  std::size_t files = 0;
  std::size_t differing = 0;
  for (const auto& name : preset_names()) {
    PipelineConfig config = preset_config(name);
    config.salt.fraction = kSaltFraction;
    config.output_dir = scratch / ("repeat_" + name);
    run_pipeline(config);
    const auto first = snapshot(config.output_dir);
    run_pipeline(config);
    const auto second = snapshot(config.output_dir);
    files += first.size();
    for (const auto& [file, bytes] : first) {
      const auto it = second.find(file);
      differing += it == second.end() || it->second != bytes;
    }
    differing += second.size() != first.size();
  }
  return {differing == 0 && files > 0, fmt("%zu rasters and reports across %zu presets, %zu differ", files, preset_names().size(), differing)};
}

Outcome colour_balance() {
  constexpr int kWindow = 13;
  PatternSpec spec;
  spec.cycles = spec.height / double(kWindow);  // one cycle spans the window
  AlbedoSpec albedo;
  albedo.mean = {0.6, 0.55, 0.5};
  albedo.amplitude = {0.3, 0.25, 0.2};
  albedo.phase = {0.0, 0.33, 0.66};
  albedo.period_x = 320.0;
  SceneModel coloured = flat_scene(spec.width, spec.height);
  coloured.albedo = build_albedo(albedo, spec.width, spec.height);
  const SceneModel plain = flat_scene(spec.width, spec.height);

  const RgbImage capture = reflect(spec, coloured);
  const RgbImage reference = reflect(spec, plain);
  const BalancedImage b = local_color_balance(capture, kWindow);
  const BalancedImage rb = local_color_balance(reference, kWindow);
  const PhaseMap balanced = wrapped_phase(b.image, b.valid);
  const PhaseMap ref = wrapped_phase(rb.image, rb.valid);
  const double err = wrapped_rms_error(balanced, ref, false);
  const double unbalanced = wrapped_rms_error(wrapped_phase(capture), wrapped_phase(reference), false);
  return {err < kBalanceTol, fmt("RMS vs balanced unit-albedo capture %.5f cycles (< %.0e); without balance %.5f", err, kBalanceTol, unbalanced)};
}

}  // namespace

int main() {
  const fringe::test::TempDir scratch;
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"round-trip phase exactness", round_trip},
      {"affine invariance", affine_invariance},
      {"pattern differential", pattern_differential},
      {"crosstalk estimation", crosstalk_fit},
      {"distribution adjustment", distribution_adjustment},
      {"unwrapping exactness", unwrap_exactness},
      {"end-to-end depth", [&] { return end_to_end(scratch.path()); }},
      {"determinism", [&] { return determinism(scratch.path()); }},
      {"colour-balance neutralisation", colour_balance},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  C%d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
    if (index == 6) {
      try {
        std::printf("INFO  C6 %s\n", channel_salt_note().c_str());
      } catch (const std::exception& e) {
        std::printf("INFO  C6 channel-salt variant threw: %s\n", e.what());
      }
    }
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
