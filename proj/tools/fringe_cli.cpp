// fringe: command-line front end for the colour fringe profilometry library.
// Each stage reads and writes files so it can be run and inspected alone;
// `pipeline` chains them on a simulated capture.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fringe/config.hpp"
#include "fringe/demo.hpp"
#include "fringe/error.hpp"
#include "fringe/io.hpp"
#include "fringe/pipeline.hpp"
#include "fringe/reconstruct.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fringe;

namespace {

void write_json(const json& doc, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Unwritable, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::MissingFile, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::CorruptHeader, path.string() + " is not valid JSON: " + e.what());
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Unwritable, "cannot create " + dir.string() + ": " + ec.message());
}

json fit_to_json(const CrosstalkFit& fit) {
  json m = json::array();
  for (int r = 0; r < 3; ++r) m.push_back({fit.matrix(r, 0), fit.matrix(r, 1), fit.matrix(r, 2)});
  return json{{"crosstalk", m}, {"offset", {fit.offset(0), fit.offset(1), fit.offset(2)}}, {"samples", fit.samples}};
}

CrosstalkFit fit_from_json(const json& doc) {
  CrosstalkFit fit;
  try {
    const auto m = doc.at("crosstalk").get<std::vector<std::vector<double>>>();
    const auto b = doc.at("offset").get<std::vector<double>>();
    if (m.size() != 3 || b.size() != 3) fail(ErrorKind::InvalidArgument, "calibration needs a 3x3 crosstalk and 3 offsets");
    for (int r = 0; r < 3; ++r) {
      if (m[r].size() != 3) fail(ErrorKind::InvalidArgument, "calibration needs a 3x3 crosstalk");
      for (int c = 0; c < 3; ++c) fit.matrix(r, c) = m[r][c];
      fit.offset(r) = b[r];
    }
    fit.samples = doc.value("samples", std::size_t{0});
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("calibration file: ") + e.what());
  }
  return fit;
}

Plane first_channel(const RgbImage& image) {
  Plane out(image.width(), image.height());
  const auto c = image.channel(0);
  std::copy(c.begin(), c.end(), out.data().begin());
  return out;
}

Plane load_plane(const fs::path& path) {
  if (path.extension() == ".frf") return read_float_raster(path);
  return first_channel(load_image(path));
}

Plane mask_plane(const Mask& mask) {
  Plane out(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? 1.0 : 0.0;
  return out;
}

// Options shared by every subcommand that builds a PipelineConfig.
struct ConfigOptions {
  std::string config_path;
  std::string preset = "linear";
  std::optional<std::uint64_t> seed;
  std::optional<double> noise;
  std::optional<double> salt;
  std::optional<std::string> salt_mode;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file (overrides the preset)")->check(CLI::ExistingFile);
    app->add_option("--preset", preset, "linear | distorted | albedo")->capture_default_str();
    app->add_option("--seed", seed, "seed for every random draw");
    app->add_option("--noise", noise, "camera noise sigma");
    app->add_option("--salt", salt, "fraction of salt-corrupted pixels");
    app->add_option("--salt-mode", salt_mode, "white | channel");
  }

  PipelineConfig resolve() const {
    PipelineConfig config = config_path.empty() ? preset_config(preset) : load_config(config_path);
    if (seed) config.seed = *seed;
    if (noise) config.camera.noise_sigma = *noise;
    if (salt) config.salt.fraction = *salt;
    if (salt_mode) {
      json patch = {{"salt", {{"mode", *salt_mode}}}};
      config.salt.mode = config_from_json(patch).salt.mode;
    }
    return config;
  }
};

// Runs one subcommand body, tagging library failures with the subcommand name.
template <typename F>
void as_stage(const std::string& name, F&& body) {
  try {
    body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-shot colour fringe profilometry: pattern synthesis, simulation, phase recovery, unwrapping, depth"};
  app.require_subcommand(1);

  // pattern
  auto* pattern_cmd = app.add_subcommand("pattern", "write the three-phase colour fringe pattern");
  PatternSpec pattern;
  std::string pattern_out = "pattern.png";
  std::string pattern_orientation = "horizontal";
  std::string pattern_phase_out;
  int pattern_bits = 8;
  pattern_cmd->add_option("--out", pattern_out, "output PNG or PPM")->capture_default_str();
  pattern_cmd->add_option("--phase-out", pattern_phase_out, "ground-truth phase PNG (default: <out stem>_phase.png)");
  pattern_cmd->add_option("--width", pattern.width)->capture_default_str();
  pattern_cmd->add_option("--height", pattern.height)->capture_default_str();
  pattern_cmd->add_option("--cycles", pattern.cycles)->capture_default_str();
  pattern_cmd->add_option("--orientation", pattern_orientation, "horizontal | vertical")->capture_default_str();
  pattern_cmd->add_option("--mean", pattern.mean_a)->capture_default_str();
  pattern_cmd->add_option("--modulation", pattern.modulation_b)->capture_default_str();
  pattern_cmd->add_option("--bit-depth", pattern_bits)->check(CLI::IsMember({8, 16}))->capture_default_str();
  pattern_cmd->callback([&] {
    as_stage("pattern", [&] {
      pattern.orientation = parse_orientation(pattern_orientation);
      save_image(synthesize_pattern(pattern), pattern_out, pattern_bits == 16 ? BitDepth::Sixteen : BitDepth::Eight);
      fs::path phase_out = pattern_phase_out;
      if (phase_out.empty()) {
        phase_out = fs::path(pattern_out);
        phase_out.replace_filename(phase_out.stem().string() + "_phase.png");
      }
      save_gray_png(ideal_phase(pattern).phase(), phase_out, BitDepth::Sixteen);
      std::cout << "wrote " << pattern_out << " and " << phase_out.string() << '\n';
    });
  });

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "render a camera capture of a synthetic scene");
  ConfigOptions simulate_opts;
  std::string simulate_out = "capture";
  simulate_opts.attach(simulate_cmd);
  simulate_cmd->add_option("--out", simulate_out, "output directory")->capture_default_str();
  simulate_cmd->callback([&] {
    as_stage("simulate", [&] {
      const PipelineConfig config = simulate_opts.resolve();
      config.validate();
      ensure_dir(simulate_out);
      const DerivedSeeds seeds = derive_seeds(config.seed);
      const SceneModel scene = config.scene.build(config.pattern.width, config.pattern.height);
      CameraModel camera = config.camera;
      camera.seed = seeds.capture;
      RgbImage capture = apply_camera(reflect(config.pattern, scene), camera);
      if (config.salt.fraction > 0.0) capture = add_salt_noise(capture, config.salt.fraction, seeds.salt, nullptr, config.salt.mode);
      const fs::path dir = simulate_out;
      save_image(capture, dir / "capture.png", BitDepth::Sixteen);
      write_float_raster(scene.depth.depth(), dir / "depth_truth.frf");
      write_float_raster(observed_phase(config.pattern, scene).phase(), dir / "phase_truth.frf");
      write_float_raster(observed_unwrapped_phase(config.pattern, scene), dir / "phase_unwrapped_truth.frf");
      write_json(config_to_json(config), dir / "config.json");
      std::cout << "wrote " << (dir / "capture.png").string() << '\n';
    });
  });

  // calibrate
  auto* calibrate_cmd = app.add_subcommand("calibrate", "estimate the crosstalk matrix and offset from ramp captures");
  ConfigOptions calibrate_opts;
  std::vector<std::string> calibrate_captures;
  std::string calibrate_out = "calibration.json";
  double calibrate_lo = 0.2;
  double calibrate_hi = 0.8;
  calibrate_opts.attach(calibrate_cmd);
  calibrate_cmd->add_option("--captures", calibrate_captures, "captures of the red, green and blue ramps (simulated when absent)")
      ->expected(3);
  calibrate_cmd->add_option("--lo", calibrate_lo, "lowest projector value used")->capture_default_str();
  calibrate_cmd->add_option("--hi", calibrate_hi, "highest projector value used")->capture_default_str();
  calibrate_cmd->add_option("--out", calibrate_out, "output JSON")->capture_default_str();
  calibrate_cmd->callback([&] {
    as_stage("calibrate", [&] {
      std::array<RgbImage, 3> captures;
      if (calibrate_captures.empty()) {
        const PipelineConfig config = calibrate_opts.resolve();
        config.validate();
        CameraModel camera = config.camera;
        camera.seed = derive_seeds(config.seed).calibration;
        captures = calibration_captures(camera, config.pattern.width, config.pattern.height);
      } else {
        for (std::size_t c = 0; c < 3; ++c) captures[c] = load_image(calibrate_captures[c]);
      }
      const CrosstalkFit fit = estimate_crosstalk(captures, calibrate_lo, calibrate_hi);
      write_json(fit_to_json(fit), calibrate_out);
      std::cout << fit_to_json(fit).dump(2) << '\n';
    });
  });

  // recover
  auto* recover_cmd = app.add_subcommand("recover", "wrapped phase from a single capture");
  std::string recover_input;
  std::string recover_calibration;
  std::string recover_out = "recovered";
  RecoveryParams recovery;
  bool recover_no_adjust = false;
  recover_cmd->add_option("--input", recover_input, "capture image")->required()->check(CLI::ExistingFile);
  recover_cmd->add_option("--calibration", recover_calibration, "calibration JSON; enables crosstalk compensation")
      ->check(CLI::ExistingFile);
  recover_cmd->add_option("--balance-window", recovery.balance_window, "odd colour-balance window, 0 disables")->capture_default_str();
  recover_cmd->add_flag("--balance-first", recovery.balance_before_compensation, "balance before compensation");
  recover_cmd->add_option("--bins", recovery.bins, "distribution adjustment bins")->capture_default_str();
  recover_cmd->add_option("--threshold", recovery.threshold, "brightness threshold for sampling")->capture_default_str();
  recover_cmd->add_option("--samples", recovery.samples, "target number of sampled pixels")->capture_default_str();
  recover_cmd->add_flag("--no-adjust", recover_no_adjust, "skip distribution adjustment");
  recover_cmd->add_option("--out", recover_out, "output directory")->capture_default_str();
  recover_cmd->callback([&] {
    as_stage("recover", [&] {
      const RgbImage capture = load_image(recover_input);
      std::optional<CrosstalkFit> fit;
      if (!recover_calibration.empty()) fit = fit_from_json(read_json(recover_calibration));
      recovery.compensate = fit.has_value();
      recovery.adjust = !recover_no_adjust;
      const RecoveryResult r = recover_phase(capture, recovery, fit ? &*fit : nullptr);
      ensure_dir(recover_out);
      const fs::path dir = recover_out;
      save_gray_png(r.phase.phase(), dir / "phase.png", BitDepth::Sixteen);
      write_float_raster(r.phase.phase(), dir / "phase.frf");
      save_gray_png(mask_plane(r.phase.valid()), dir / "mask.png", BitDepth::Eight);
      save_gray_png(r.brightness, dir / "brightness.png", BitDepth::Sixteen);
      std::cout << "valid pixels: " << r.phase.valid_count() << " of " << r.phase.size() << '\n';
    });
  });

  // unwrap
  auto* unwrap_cmd = app.add_subcommand("unwrap", "resolve integer periods of a wrapped phase map");
  std::string unwrap_phase;
  std::string unwrap_mask;
  std::string unwrap_brightness;
  std::string unwrap_orientation = "horizontal";
  std::string unwrap_out = "unwrapped";
  UnwrapConfig unwrap;
  bool unwrap_no_correct = false;
  unwrap_cmd->add_option("--phase", unwrap_phase, "wrapped phase (.frf, or 16-bit PNG of phase*65535)")->required()->check(CLI::ExistingFile);
  unwrap_cmd->add_option("--mask", unwrap_mask, "validity mask PNG")->check(CLI::ExistingFile);
  unwrap_cmd->add_option("--brightness", unwrap_brightness, "brightness PNG or .frf")->required()->check(CLI::ExistingFile);
  unwrap_cmd->add_option("--threshold", unwrap.intensity_threshold, "brightness threshold")->capture_default_str();
  unwrap_cmd->add_option("--window", unwrap.correction_window, "odd correction window")->capture_default_str();
  unwrap_cmd->add_option("--orientation", unwrap_orientation, "horizontal | vertical")->capture_default_str();
  unwrap_cmd->add_flag("--no-correct", unwrap_no_correct, "skip the window correction sweep");
  unwrap_cmd->add_option("--out", unwrap_out, "output directory")->capture_default_str();
  unwrap_cmd->callback([&] {
    as_stage("unwrap", [&] {
      unwrap.orientation = parse_orientation(unwrap_orientation);
      Plane values = load_plane(unwrap_phase);
      Mask valid(values.width(), values.height(), 1);
      if (!unwrap_mask.empty()) {
        const Plane m = load_plane(unwrap_mask);
        if (!m.same_shape(values)) fail(ErrorKind::DimensionMismatch, "mask and phase shapes differ");
        for (std::size_t i = 0; i < m.size(); ++i) valid[i] = m[i] > 0.5;
      }
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) valid[i] = 0;
        if (valid[i] && values[i] >= 1.0) values[i] = 0.0;  // a full-scale 16-bit code wraps to zero
      }
      const PhaseMap phase(values, valid);
      const UnwrapResult initial = initial_unwrap(phase, load_plane(unwrap_brightness), unwrap);
      const UnwrappedPhaseMap result = unwrap_no_correct ? initial.phase : correct_phase(initial.phase, unwrap);
      ensure_dir(unwrap_out);
      const fs::path dir = unwrap_out;
      write_float_raster(result.values(), dir / "unwrapped.frf");
      save_normalized_png(result.values(), dir / "unwrapped.png");
      std::cout << "unwrapped " << result.valid_count() << " pixels in " << initial.regions.size() << " region(s), "
                << initial.independent_regions() << " with independent offset\n";
    });
  });

  // reconstruct
  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "depth map and point cloud from unwrapped phase");
  std::string reconstruct_phase;
  std::string reconstruct_capture;
  std::string reconstruct_out = "depth";
  std::string reconstruct_orientation = "horizontal";
  double kappa = 0.05;
  double reference_depth = 0.0;
  double reference_phase = 0.0;
  double carrier_cycles = 0.0;
  ReconstructParams reconstruct;
  reconstruct_cmd->add_option("--phase", reconstruct_phase, "unwrapped phase .frf")->required()->check(CLI::ExistingFile);
  reconstruct_cmd->add_option("--kappa", kappa, "phase cycles per depth unit")->capture_default_str();
  reconstruct_cmd->add_option("--reference-depth", reference_depth)->capture_default_str();
  reconstruct_cmd->add_option("--reference-phase", reference_phase)->capture_default_str();
  reconstruct_cmd->add_option("--carrier-cycles", carrier_cycles, "subtract the pattern carrier of this many cycles (0: none)")
      ->capture_default_str();
  reconstruct_cmd->add_option("--orientation", reconstruct_orientation, "pattern orientation for the carrier")->capture_default_str();
  reconstruct_cmd->add_option("--capture", reconstruct_capture, "capture used for brightness masking")->check(CLI::ExistingFile);
  reconstruct_cmd->add_option("--tau", reconstruct.mask_threshold, "brightness threshold")->capture_default_str();
  reconstruct_cmd->add_option("--smooth", reconstruct.smooth_window, "odd mean-filter window")->capture_default_str();
  reconstruct_cmd->add_option("--ply-stride", reconstruct.ply_stride, "point cloud subsampling")->capture_default_str();
  reconstruct_cmd->add_option("--out", reconstruct_out, "output directory")->capture_default_str();
  reconstruct_cmd->callback([&] {
    as_stage("reconstruct", [&] {
      reconstruct.validate();
      const UnwrappedPhaseMap u = UnwrappedPhaseMap::from_values(read_float_raster(reconstruct_phase));
      Plane shift = u.values();
      if (carrier_cycles > 0.0) {
        PatternSpec spec;
        spec.width = u.width();
        spec.height = u.height();
        spec.cycles = carrier_cycles;
        spec.orientation = parse_orientation(reconstruct_orientation);
        shift = remove_carrier(u, spec);
      }
      DepthMap z = phase_to_depth(shift, u.valid(), kappa, reference_depth, reference_phase);
      if (!reconstruct_capture.empty()) z = apply_mask(z, threshold_mask(load_image(reconstruct_capture), reconstruct.mask_threshold));
      z = mean_smooth(z, reconstruct.smooth_window);
      ensure_dir(reconstruct_out);
      const fs::path dir = reconstruct_out;
      write_float_raster(z.depth(), dir / "depth.frf");
      save_normalized_png(z.depth(), dir / "depth.png");
      const std::size_t n = export_point_cloud(z, dir / "depth.ply", reconstruct.ply_stride);
      std::cout << "wrote " << n << " points to " << (dir / "depth.ply").string() << '\n';
    });
  });

  // pipeline
  auto* pipeline_cmd = app.add_subcommand("pipeline", "simulate and reconstruct end to end, writing a report");
  ConfigOptions pipeline_opts;
  std::optional<std::string> pipeline_out;
  std::optional<int> pipeline_balance;
  std::optional<int> pipeline_window;
  std::optional<int> pipeline_smooth;
  bool no_compensate = false;
  bool no_adjust = false;
  bool no_correct = false;
  pipeline_opts.attach(pipeline_cmd);
  pipeline_cmd->add_option("--out", pipeline_out, "output directory");
  pipeline_cmd->add_option("--balance-window", pipeline_balance, "odd colour-balance window, 0 disables");
  pipeline_cmd->add_option("--window", pipeline_window, "odd unwrap correction window");
  pipeline_cmd->add_option("--smooth", pipeline_smooth, "odd depth mean-filter window");
  pipeline_cmd->add_flag("--no-compensate", no_compensate, "skip crosstalk compensation");
  pipeline_cmd->add_flag("--no-adjust", no_adjust, "skip distribution adjustment");
  pipeline_cmd->add_flag("--no-correct", no_correct, "skip the unwrap correction sweep");
  pipeline_cmd->callback([&] {
    PipelineConfig config;
    as_stage("config", [&] {
      config = pipeline_opts.resolve();
      if (pipeline_out) config.output_dir = *pipeline_out;
      if (pipeline_balance) config.recovery.balance_window = *pipeline_balance;
      if (pipeline_window) config.unwrap.correction_window = *pipeline_window;
      if (pipeline_smooth) config.reconstruct.smooth_window = *pipeline_smooth;
      if (no_compensate) config.recovery.compensate = false;
      if (no_adjust) config.recovery.adjust = false;
      if (no_correct) config.correct = false;
    });
    const PipelineOutcome outcome = run_pipeline(config);
    std::cout << outcome.report.to_json().dump(2) << '\n';
    std::cout << "total " << outcome.total_seconds << " s, outputs in " << config.output_dir.string() << '\n';
  });

  // demo
  auto* demo_cmd = app.add_subcommand("demo", "write the illustrative figures");
  std::string demo_out = "demo";
  demo_cmd->add_option("--out", demo_out, "output directory")->capture_default_str();
  demo_cmd->callback([&] {
    as_stage("demo", [&] {
      const DemoSummary s = run_demo(demo_out);
      for (const auto& p : {s.pattern_profiles, s.response_curves, s.phase_histograms, s.wrapped_phase}) {
        std::cout << "wrote " << p.string() << '\n';
      }
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const StageError& e) {
    std::cerr << "fringe: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "fringe: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
