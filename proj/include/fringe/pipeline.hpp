#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fringe/config.hpp"

namespace fringe {

// Metrics of one run. Everything here is a deterministic function of the
// config, so two runs with the same seed serialise to identical bytes.
struct PipelineReport {
  std::string name;
  std::uint64_t seed = 0;
  int width = 0;
  int height = 0;

  bool calibrated = false;
  std::array<std::array<double, 3>, 3> crosstalk_fit{};
  std::array<double, 3> offset_fit{};
  double crosstalk_fit_error = 0.0;  // max-abs entry difference from the true matrix

  std::size_t wrapped_valid = 0;
  double wrapped_rms_raw = 0.0;  // before distribution adjustment, offset aligned
  double wrapped_rms = 0.0;      // final wrapped phase, offset aligned

  std::size_t unwrapped_valid = 0;
  std::size_t regions = 0;
  std::size_t independent_regions = 0;
  double period_fraction_initial = 0.0;
  double period_fraction = 0.0;  // after correction when enabled

  std::size_t depth_valid = 0;
  double depth_rms = 0.0;         // scene units, median aligned
  double depth_rms_cycles = 0.0;  // depth_rms * |kappa|

  std::size_t ply_vertices = 0;

  nlohmann::json to_json() const;
};

struct PipelineOutcome {
  PipelineReport report;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage, in run order
  double total_seconds = 0.0;
};

// Simulates a capture of the configured scene and reconstructs it:
// calibrate, pattern, reflect, camera, recover, unwrap, correct, depth, export.
// Intermediates, report.json, timings.json and the resolved config.json go to
// config.output_dir. Failures are rethrown as StageError naming the stage.
PipelineOutcome run_pipeline(const PipelineConfig& config);

}  // namespace fringe
