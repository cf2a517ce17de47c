#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "fringe/image.hpp"

namespace fringe {

// Plot geometry shared by the line charts. A value v in [0,1] sampled at
// index k is drawn at column kPlotMargin + k and row
// kPlotMargin + round((1 - v) * (kPlotHeight - 1)).
inline constexpr int kPlotMargin = 8;
inline constexpr int kPlotHeight = 256;

int plot_row(double value);

struct DemoSummary {
  std::filesystem::path pattern_profiles;
  std::filesystem::path response_curves;
  std::filesystem::path phase_histograms;
  std::filesystem::path wrapped_phase;
  std::vector<double> profile_samples[3];  // the plotted channel values
  std::vector<std::size_t> histogram_before;  // raw phases of the adjustment samples
  std::vector<std::size_t> histogram_after;   // the same samples after adjustment
  std::size_t adjustment_samples = 0;
};

// Writes four figures into `dir` from a synthetic capture through the
// distortion preset:
//   pattern_profiles.png  R, G, B pattern values down one column (three cycles)
//   response_curves.png   camera response per channel
//   phase_histograms.png  sample phases before (top) and after (bottom) adjustment
//   wrapped_phase.png     wrapped phase as grey levels
DemoSummary run_demo(const std::filesystem::path& dir);

}  // namespace fringe
