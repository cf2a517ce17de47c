#include "fringe/config.hpp"

#include <fstream>

#include "fringe/error.hpp"

namespace fringe {

using nlohmann::json;

SceneModel SceneSpec::build(int width, int height) const {
  SceneModel scene;
  scene.depth = build_depth(depth, width, height);
  scene.albedo = build_albedo(albedo, width, height);
  scene.kappa = kappa;
  scene.reference_depth = reference_depth;
  scene.validate();
  return scene;
}

void ReconstructParams::validate() const {
  if (smooth_window < 1 || smooth_window % 2 == 0) fail(ErrorKind::InvalidArgument, "smooth_window must be odd and >= 1");
  if (!(mask_threshold >= 0.0 && mask_threshold <= 1.0)) fail(ErrorKind::InvalidArgument, "mask_threshold must lie in [0,1]");
  if (ply_stride < 1) fail(ErrorKind::InvalidArgument, "ply_stride must be >= 1");
}

void PipelineConfig::validate() const {
  pattern.validate();
  camera.validate();
  recovery.validate();
  unwrap.validate();
  reconstruct.validate();
  if (scene.kappa == 0.0 || !std::isfinite(scene.kappa)) fail(ErrorKind::InvalidArgument, "scene kappa must be finite and nonzero");
  if (scene.depth.supersample < 1) fail(ErrorKind::InvalidArgument, "depth supersample must be >= 1");
  if (!(salt.fraction >= 0.0 && salt.fraction <= 1.0)) fail(ErrorKind::InvalidArgument, "salt fraction must lie in [0,1]");
  if (unwrap.orientation != pattern.orientation) {
    fail(ErrorKind::InvalidArgument, "unwrap orientation must match the pattern orientation");
  }
}

namespace {

// splitmix64: decorrelates the per-stage streams drawn from one user seed.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SceneSpec default_scene(const PatternSpec& pattern) {
  SceneSpec scene;
  scene.kappa = 0.05;
  scene.depth.tilt_x = 0.05;
  scene.depth.supersample = 2;
  SurfaceFeature bump;
  bump.kind = SurfaceFeature::Kind::Gaussian;
  bump.cx = (pattern.width - 1) / 2.0;
  bump.cy = (pattern.height - 1) / 2.0;
  bump.size = 60.0;
  bump.height = 40.0;
  scene.depth.features.push_back(bump);
  scene.albedo.mean = {0.85, 0.85, 0.85};
  scene.albedo.amplitude = {0.1, 0.1, 0.1};
  scene.albedo.period_x = 320.0;
  scene.albedo.period_y = 320.0;
  return scene;
}

const char* to_string(SaltMode mode) { return mode == SaltMode::White ? "white" : "channel"; }

SaltMode parse_salt_mode(const std::string& text) {
  if (text == "white") return SaltMode::White;
  if (text == "channel") return SaltMode::Channel;
  fail(ErrorKind::InvalidArgument, "unknown salt mode '" + text + "' (expected white or channel)");
}

const char* to_string(SurfaceFeature::Kind kind) { return kind == SurfaceFeature::Kind::Hemisphere ? "hemisphere" : "gaussian"; }

SurfaceFeature::Kind parse_feature_kind(const std::string& text) {
  if (text == "hemisphere") return SurfaceFeature::Kind::Hemisphere;
  if (text == "gaussian") return SurfaceFeature::Kind::Gaussian;
  fail(ErrorKind::InvalidArgument, "unknown surface feature '" + text + "' (expected hemisphere or gaussian)");
}

template <typename T>
void read(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

json response_to_json(const ResponseCurve& curve) {
  if (curve.is_lookup()) return json{{"lookup", curve.samples()}};
  return json{{"gamma", curve.exponent()}};
}

ResponseCurve response_from_json(const json& j) {
  if (j.is_number()) return ResponseCurve::gamma(j.get<double>());
  if (j.contains("lookup")) return ResponseCurve::lookup(j.at("lookup").get<std::vector<double>>());
  if (j.contains("gamma")) return ResponseCurve::gamma(j.at("gamma").get<double>());
  fail(ErrorKind::InvalidArgument, "response entry needs 'gamma' or 'lookup'");
}

void read_pattern(const json& j, PatternSpec& p) {
  read(j, "width", p.width);
  read(j, "height", p.height);
  read(j, "cycles", p.cycles);
  if (j.contains("orientation")) p.orientation = parse_orientation(j.at("orientation").get<std::string>());
  read(j, "mean", p.mean_a);
  read(j, "modulation", p.modulation_b);
}

void read_camera(const json& j, CameraModel& cam) {
  if (j.contains("crosstalk")) {
    const auto rows = j.at("crosstalk").get<std::vector<std::vector<double>>>();
    if (rows.size() != 3) fail(ErrorKind::InvalidArgument, "crosstalk must be a 3x3 array");
    for (int r = 0; r < 3; ++r) {
      if (rows[r].size() != 3) fail(ErrorKind::InvalidArgument, "crosstalk must be a 3x3 array");
      for (int c = 0; c < 3; ++c) cam.crosstalk(r, c) = rows[r][c];
    }
  }
  if (j.contains("offset")) {
    const auto v = j.at("offset").get<std::vector<double>>();
    if (v.size() != 3) fail(ErrorKind::InvalidArgument, "offset must have three entries");
    cam.offset = Eigen::Vector3d(v[0], v[1], v[2]);
  }
  if (j.contains("response")) {
    const json& r = j.at("response");
    if (r.is_array()) {
      if (r.size() != 3) fail(ErrorKind::InvalidArgument, "response array must have three entries");
      for (std::size_t c = 0; c < 3; ++c) cam.response[c] = response_from_json(r[c]);
    } else {
      cam.response.fill(response_from_json(r));
    }
  }
  read(j, "noise_sigma", cam.noise_sigma);
}

void read_scene(const json& j, SceneSpec& s) {
  read(j, "kappa", s.kappa);
  read(j, "reference_depth", s.reference_depth);
  if (j.contains("depth")) {
    const json& d = j.at("depth");
    read(d, "base", s.depth.base);
    read(d, "tilt_x", s.depth.tilt_x);
    read(d, "tilt_y", s.depth.tilt_y);
    read(d, "supersample", s.depth.supersample);
    if (d.contains("features")) {
      s.depth.features.clear();
      for (const json& f : d.at("features")) {
        SurfaceFeature feature;
        if (f.contains("kind")) feature.kind = parse_feature_kind(f.at("kind").get<std::string>());
        read(f, "cx", feature.cx);
        read(f, "cy", feature.cy);
        read(f, "size", feature.size);
        read(f, "height", feature.height);
        s.depth.features.push_back(feature);
      }
    }
  }
  if (j.contains("albedo")) {
    const json& a = j.at("albedo");
    read(a, "mean", s.albedo.mean);
    read(a, "amplitude", s.albedo.amplitude);
    read(a, "phase", s.albedo.phase);
    read(a, "period_x", s.albedo.period_x);
    read(a, "period_y", s.albedo.period_y);
  }
}

void read_recovery(const json& j, RecoveryParams& r) {
  read(j, "compensate", r.compensate);
  read(j, "balance_before_compensation", r.balance_before_compensation);
  read(j, "balance_window", r.balance_window);
  read(j, "adjust", r.adjust);
  read(j, "bins", r.bins);
  read(j, "threshold", r.threshold);
  read(j, "samples", r.samples);
}

void read_unwrap(const json& j, UnwrapConfig& u, bool& correct) {
  read(j, "intensity_threshold", u.intensity_threshold);
  read(j, "correction_window", u.correction_window);
  read(j, "max_seed_restarts", u.max_seed_restarts);
  read(j, "intensity_levels", u.intensity_levels);
  read(j, "correct", correct);
}

void read_reconstruct(const json& j, ReconstructParams& r) {
  read(j, "smooth_window", r.smooth_window);
  read(j, "mask_threshold", r.mask_threshold);
  read(j, "ply_stride", r.ply_stride);
}

}  // namespace

DerivedSeeds derive_seeds(std::uint64_t seed) {
  std::uint64_t state = seed;
  DerivedSeeds out{};
  out.capture = splitmix64(state);
  out.calibration = splitmix64(state);
  out.salt = splitmix64(state);
  return out;
}

std::vector<std::string> preset_names() { return {"linear", "distorted", "albedo"}; }

PipelineConfig preset_config(const std::string& name) {
  PipelineConfig config;
  config.name = name;
  config.scene = default_scene(config.pattern);
  const CameraModel preset = CameraModel::distortion_preset();
  if (name == "linear") {
    config.camera.crosstalk = preset.crosstalk;
    config.camera.offset = preset.offset;
    config.recovery.balance_window = 0;
    config.recovery.adjust = false;
    config.reconstruct.smooth_window = 1;
  } else if (name == "distorted") {
    // Grey albedo needs no colour balance, and a 13 px window over a 12 px
    // fringe period would only add ripple.
    config.camera = preset;
    config.camera.noise_sigma = 0.005;
    config.recovery.balance_window = 0;
  } else if (name == "albedo") {
    // Coloured reflectance neutralised by balance over one 13 px fringe period.
    config.pattern.cycles = config.pattern.height / 13.0;
    config.camera.noise_sigma = 0.002;
    config.recovery.compensate = false;
    config.recovery.adjust = false;
    config.scene.albedo.mean = {0.6, 0.55, 0.5};
    config.scene.albedo.amplitude = {0.3, 0.25, 0.2};
    config.scene.albedo.phase = {0.0, 0.33, 0.66};
  } else {
    fail(ErrorKind::InvalidArgument, "unknown preset '" + name + "' (expected linear, distorted or albedo)");
  }
  return config;
}

PipelineConfig config_from_json(const json& doc) {
  PipelineConfig config = preset_config(doc.value("preset", std::string("linear")));
  if (!doc.contains("preset")) config.name = "custom";
  read(doc, "name", config.name);
  read(doc, "seed", config.seed);
  if (doc.contains("output_dir")) config.output_dir = doc.at("output_dir").get<std::string>();
  if (doc.contains("pattern")) read_pattern(doc.at("pattern"), config.pattern);
  config.unwrap.orientation = config.pattern.orientation;
  if (doc.contains("camera")) read_camera(doc.at("camera"), config.camera);
  if (doc.contains("scene")) read_scene(doc.at("scene"), config.scene);
  if (doc.contains("salt")) {
    const json& s = doc.at("salt");
    read(s, "fraction", config.salt.fraction);
    if (s.contains("mode")) config.salt.mode = parse_salt_mode(s.at("mode").get<std::string>());
  }
  read(doc, "calibrate", config.calibrate);
  if (doc.contains("recovery")) read_recovery(doc.at("recovery"), config.recovery);
  if (doc.contains("unwrap")) read_unwrap(doc.at("unwrap"), config.unwrap, config.correct);
  if (doc.contains("reconstruct")) read_reconstruct(doc.at("reconstruct"), config.reconstruct);
  return config;
}

json config_to_json(const PipelineConfig& c) {
  json features = json::array();
  for (const auto& f : c.scene.depth.features) {
    features.push_back({{"kind", to_string(f.kind)}, {"cx", f.cx}, {"cy", f.cy}, {"size", f.size}, {"height", f.height}});
  }
  json crosstalk = json::array();
  for (int r = 0; r < 3; ++r) crosstalk.push_back({c.camera.crosstalk(r, 0), c.camera.crosstalk(r, 1), c.camera.crosstalk(r, 2)});
  json response = json::array();
  for (const auto& curve : c.camera.response) response.push_back(response_to_json(curve));
  return json{
      {"name", c.name},
      {"seed", c.seed},
      {"output_dir", c.output_dir.string()},
      {"pattern",
       {{"width", c.pattern.width},
        {"height", c.pattern.height},
        {"cycles", c.pattern.cycles},
        {"orientation", to_string(c.pattern.orientation)},
        {"mean", c.pattern.mean_a},
        {"modulation", c.pattern.modulation_b}}},
      {"camera",
       {{"crosstalk", crosstalk},
        {"offset", {c.camera.offset(0), c.camera.offset(1), c.camera.offset(2)}},
        {"response", response},
        {"noise_sigma", c.camera.noise_sigma}}},
      {"scene",
       {{"kappa", c.scene.kappa},
        {"reference_depth", c.scene.reference_depth},
        {"depth",
         {{"base", c.scene.depth.base},
          {"tilt_x", c.scene.depth.tilt_x},
          {"tilt_y", c.scene.depth.tilt_y},
          {"supersample", c.scene.depth.supersample},
          {"features", features}}},
        {"albedo",
         {{"mean", c.scene.albedo.mean},
          {"amplitude", c.scene.albedo.amplitude},
          {"phase", c.scene.albedo.phase},
          {"period_x", c.scene.albedo.period_x},
          {"period_y", c.scene.albedo.period_y}}}}},
      {"salt", {{"fraction", c.salt.fraction}, {"mode", to_string(c.salt.mode)}}},
      {"calibrate", c.calibrate},
      {"recovery",
       {{"compensate", c.recovery.compensate},
        {"balance_before_compensation", c.recovery.balance_before_compensation},
        {"balance_window", c.recovery.balance_window},
        {"adjust", c.recovery.adjust},
        {"bins", c.recovery.bins},
        {"threshold", c.recovery.threshold},
        {"samples", c.recovery.samples}}},
      {"unwrap",
       {{"intensity_threshold", c.unwrap.intensity_threshold},
        {"correction_window", c.unwrap.correction_window},
        {"max_seed_restarts", c.unwrap.max_seed_restarts},
        {"intensity_levels", c.unwrap.intensity_levels},
        {"correct", c.correct}}},
      {"reconstruct",
       {{"smooth_window", c.reconstruct.smooth_window},
        {"mask_threshold", c.reconstruct.mask_threshold},
        {"ply_stride", c.reconstruct.ply_stride}}},
  };
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::MissingFile, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::CorruptHeader, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  PipelineConfig config;
  try {
    config = config_from_json(doc);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, "config " + path.string() + ": " + e.what());
  }
  config.validate();
  return config;
}

}  // namespace fringe
