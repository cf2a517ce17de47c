#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "fringe/pattern.hpp"
#include "fringe/recovery.hpp"
#include "fringe/simulator.hpp"
#include "fringe/unwrap.hpp"

namespace fringe {

struct SceneSpec {
  DepthSpec depth;
  AlbedoSpec albedo;
  double kappa = 0.05;  // cycles per depth unit
  double reference_depth = 0.0;

  SceneModel build(int width, int height) const;
};

struct SaltSpec {
  double fraction = 0.0;
  SaltMode mode = SaltMode::White;
};

struct ReconstructParams {
  int smooth_window = 3;
  double mask_threshold = 0.1;  // brightness below this is dropped from the depth map
  int ply_stride = 1;

  void validate() const;
};

// Everything a pipeline run needs. One seed drives every random draw: the
// capture noise, the calibration captures and the salt positions each get a
// stream derived from it.
struct PipelineConfig {
  std::string name = "custom";
  std::uint64_t seed = 1;
  PatternSpec pattern;
  CameraModel camera;
  SceneSpec scene;
  SaltSpec salt;
  // When false, compensation uses the true camera matrix instead of a fit.
  bool calibrate = true;
  RecoveryParams recovery;
  UnwrapConfig unwrap;
  bool correct = true;
  ReconstructParams reconstruct;
  std::filesystem::path output_dir = "fringe_out";

  void validate() const;
};

struct DerivedSeeds {
  std::uint64_t capture;
  std::uint64_t calibration;
  std::uint64_t salt;
};

DerivedSeeds derive_seeds(std::uint64_t seed);

// "linear": crosstalk and offset with a linear response and no noise.
// "distorted": the gamma 2.2 crosstalk preset with noise 0.005.
// "albedo": coloured sinusoidal reflectance removed by local colour balance.
PipelineConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

PipelineConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const PipelineConfig& config);

// Reads a JSON config. A "preset" key selects the starting point and the
// remaining keys override it.
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace fringe
