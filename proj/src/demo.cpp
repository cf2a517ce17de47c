#include "fringe/demo.hpp"

#include <algorithm>
#include <cmath>

#include "fringe/error.hpp"
#include "fringe/io.hpp"
#include "fringe/metrics.hpp"
#include "fringe/recovery.hpp"
#include "fringe/simulator.hpp"

namespace fringe {

int plot_row(double value) {
  const double v = std::clamp(value, 0.0, 1.0);
  return kPlotMargin + static_cast<int>(std::lround((1.0 - v) * (kPlotHeight - 1)));
}

namespace {

constexpr double kAxisGrey = 0.35;

// Black canvas with a grey frame around the plot area. Curves set one colour
// channel to full scale, so crossing curves mix instead of hiding each other.
class Canvas {
 public:
  Canvas(int plot_width, int panels)
      : image_(plot_width + 2 * kPlotMargin, panels * (kPlotHeight + kPlotMargin) + kPlotMargin) {
    for (int p = 0; p < panels; ++p) {
      const int top = kPlotMargin + p * (kPlotHeight + kPlotMargin);
      for (int x = kPlotMargin - 1; x <= kPlotMargin + plot_width; ++x) {
        grey(x, top - 1);
        grey(x, top + kPlotHeight);
      }
      for (int y = top - 1; y <= top + kPlotHeight; ++y) {
        grey(kPlotMargin - 1, y);
        grey(kPlotMargin + plot_width, y);
      }
    }
  }

  // Polyline through (k, values[k]) with vertical runs joining neighbours.
  void curve(const std::vector<double>& values, int channel, int panel = 0) {
    const int offset = panel * (kPlotHeight + kPlotMargin);
    for (std::size_t k = 0; k < values.size(); ++k) {
      const int x = kPlotMargin + static_cast<int>(k);
      const int row = plot_row(values[k]) + offset;
      const int prev = k == 0 ? row : plot_row(values[k - 1]) + offset;
      for (int y = std::min(row, prev); y <= std::max(row, prev); ++y) mark(x, y, channel);
    }
  }

  void bar(int x0, int width, double fraction, int channel, int panel) {
    const int offset = panel * (kPlotHeight + kPlotMargin);
    const int top = plot_row(fraction) + offset;
    const int bottom = plot_row(0.0) + offset;
    for (int x = x0; x < x0 + width; ++x) {
      for (int y = top; y <= bottom; ++y) mark(kPlotMargin + x, y, channel);
    }
  }

  const RgbImage& image() const noexcept { return image_; }

 private:
  void mark(int x, int y, int channel) { image_.at(channel, x, y) = 1.0; }
  void grey(int x, int y) {
    for (int c = 0; c < 3; ++c) image_.at(c, x, y) = std::max(image_.at(c, x, y), kAxisGrey);
  }

  RgbImage image_;
};

std::vector<double> column_profile(const RgbImage& image, int channel) {
  std::vector<double> out(static_cast<std::size_t>(image.height()));
  for (int y = 0; y < image.height(); ++y) out[static_cast<std::size_t>(y)] = image.at(channel, 0, y);
  return out;
}

}  // namespace

DemoSummary run_demo(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Unwritable, "cannot create demo directory " + dir.string() + ": " + ec.message());
  DemoSummary summary;

  // Three cycles of the fringe, finely sampled so the sinusoids read clearly.
  PatternSpec profile_spec;
  profile_spec.width = 1;
  profile_spec.height = 384;
  profile_spec.cycles = 3.0;
  const RgbImage profile = synthesize_pattern(profile_spec);
  Canvas profiles(profile_spec.height, 1);
  for (int c = 0; c < 3; ++c) {
    summary.profile_samples[c] = column_profile(profile, c);
    profiles.curve(summary.profile_samples[c], c);
  }
  summary.pattern_profiles = dir / "pattern_profiles.png";
  save_image(profiles.image(), summary.pattern_profiles);

  const CameraModel camera = CameraModel::distortion_preset();
  constexpr int kResponseSamples = 256;
  Canvas responses(kResponseSamples, 1);
  for (int c = 0; c < 3; ++c) {
    std::vector<double> curve(kResponseSamples);
    for (int k = 0; k < kResponseSamples; ++k) curve[k] = camera.response[c](k / (kResponseSamples - 1.0));
    responses.curve(curve, c);
  }
  summary.response_curves = dir / "response_curves.png";
  save_image(responses.image(), summary.response_curves);

  // A tilted plane gives a continuous spread of phases for the histograms.
  PatternSpec spec;
  SceneModel scene;
  DepthSpec depth;
  depth.tilt_x = 3.0 / spec.width;
  scene.depth = build_depth(depth, spec.width, spec.height);
  scene.albedo = build_albedo({}, spec.width, spec.height);
  // A little sensor noise keeps the sampled phases distinct; tied samples
  // would all land in one adjusted bin.
  CameraModel noisy = camera;
  noisy.noise_sigma = 0.002;
  noisy.seed = 3;
  const RgbImage capture = apply_camera(reflect(spec, scene), noisy);
  const CrosstalkFit fit = estimate_crosstalk(calibration_captures(camera, spec.width, spec.height));
  RecoveryParams params;
  params.balance_window = 0;
  params.bins = 64;
  const RecoveryResult recovered = recover_phase(capture, params, &fit);
  const PhaseAdjustment& adjustment = *recovered.adjustment;

  std::vector<double> adjusted;
  adjusted.reserve(adjustment.quantiles().size());
  for (double q : adjustment.quantiles()) adjusted.push_back(adjustment.map(q));
  summary.adjustment_samples = adjusted.size();
  summary.histogram_before = phase_histogram(adjustment.quantiles(), params.bins);
  summary.histogram_after = phase_histogram(adjusted, params.bins);

  constexpr int kBarWidth = 4;
  const std::size_t peak = std::max(*std::max_element(summary.histogram_before.begin(), summary.histogram_before.end()),
                                    *std::max_element(summary.histogram_after.begin(), summary.histogram_after.end()));
  Canvas histograms(params.bins * kBarWidth, 2);
  for (int b = 0; b < params.bins; ++b) {
    const auto k = static_cast<std::size_t>(b);
    histograms.bar(b * kBarWidth, kBarWidth - 1, double(summary.histogram_before[k]) / peak, 0, 0);
    histograms.bar(b * kBarWidth, kBarWidth - 1, double(summary.histogram_after[k]) / peak, 2, 1);
  }
  summary.phase_histograms = dir / "phase_histograms.png";
  save_image(histograms.image(), summary.phase_histograms);

  summary.wrapped_phase = dir / "wrapped_phase.png";
  save_gray_png(recovered.raw_phase.phase(), summary.wrapped_phase, BitDepth::Eight);
  return summary;
}

}  // namespace fringe
