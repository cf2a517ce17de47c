#include "fringe/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>

#include "fringe/error.hpp"
#include "fringe/io.hpp"
#include "fringe/metrics.hpp"
#include "fringe/reconstruct.hpp"

namespace fringe {

using nlohmann::json;

json PipelineReport::to_json() const {
  return json{
      {"name", name},
      {"seed", seed},
      {"width", width},
      {"height", height},
      {"calibrated", calibrated},
      {"crosstalk_fit", crosstalk_fit},
      {"offset_fit", offset_fit},
      {"crosstalk_fit_error", crosstalk_fit_error},
      {"wrapped_valid", wrapped_valid},
      {"wrapped_rms_raw", wrapped_rms_raw},
      {"wrapped_rms", wrapped_rms},
      {"unwrapped_valid", unwrapped_valid},
      {"regions", regions},
      {"independent_regions", independent_regions},
      {"period_fraction_initial", period_fraction_initial},
      {"period_fraction", period_fraction},
      {"depth_valid", depth_valid},
      {"depth_rms", depth_rms},
      {"depth_rms_cycles", depth_rms_cycles},
      {"ply_vertices", ply_vertices},
  };
}

namespace {

class StageRunner {
 public:
  template <typename F>
  auto operator()(const std::string& stage, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(body())>) {
        body();
        record(stage, start);
      } else {
        auto result = body();
        record(stage, start);
        return result;
      }
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(stage, e);
    } catch (const std::exception& e) {
      throw StageError(stage, Error(ErrorKind::InvalidArgument, e.what()));
    }
  }

  std::vector<std::pair<std::string, double>> timings;

 private:
  void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
    timings.emplace_back(stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
};

void write_json(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Unwritable, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) fail(ErrorKind::Unwritable, "failed writing " + path.string());
}

Plane mask_plane(const Mask& mask) {
  Plane out(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? 1.0 : 0.0;
  return out;
}

}  // namespace

PipelineOutcome run_pipeline(const PipelineConfig& config) {
  StageRunner stage;
  PipelineOutcome outcome;
  PipelineReport& report = outcome.report;
  const auto start = std::chrono::steady_clock::now();
  const auto& dir = config.output_dir;
  const PatternSpec& spec = config.pattern;
  const DerivedSeeds seeds = derive_seeds(config.seed);

  stage("config", [&] {
    config.validate();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorKind::Unwritable, "cannot create output directory " + dir.string() + ": " + ec.message());
    write_json(config_to_json(config), dir / "config.json");
  });
  report.name = config.name;
  report.seed = config.seed;
  report.width = spec.width;
  report.height = spec.height;

  const SceneModel scene = stage("scene", [&] { return config.scene.build(spec.width, spec.height); });

  std::optional<CrosstalkFit> fit;
  if (config.recovery.compensate) {
    fit = stage("calibrate", [&] {
      if (!config.calibrate) return CrosstalkFit{config.camera.crosstalk, config.camera.offset, 0};
      CameraModel cam = config.camera;
      cam.seed = seeds.calibration;
      return estimate_crosstalk(calibration_captures(cam, spec.width, spec.height));
    });
    report.calibrated = config.calibrate;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) report.crosstalk_fit[r][c] = fit->matrix(r, c);
      report.offset_fit[r] = fit->offset(r);
    }
    report.crosstalk_fit_error = (fit->matrix - config.camera.crosstalk).cwiseAbs().maxCoeff();
  }

  stage("pattern", [&] { save_image(synthesize_pattern(spec), dir / "pattern.png", BitDepth::Sixteen); });

  const RgbImage reflected = stage("reflect", [&] { return reflect(spec, scene); });

  const RgbImage capture = stage("camera", [&] {
    CameraModel cam = config.camera;
    cam.seed = seeds.capture;
    RgbImage out = apply_camera(reflected, cam);
    if (config.salt.fraction > 0.0) out = add_salt_noise(out, config.salt.fraction, seeds.salt, nullptr, config.salt.mode);
    save_image(out, dir / "capture.png", BitDepth::Sixteen);
    return out;
  });

  const RecoveryResult recovered = stage("recover", [&] {
    RecoveryResult r = recover_phase(capture, config.recovery, fit ? &*fit : nullptr);
    write_float_raster(r.phase.phase(), dir / "phase_wrapped.frf");
    save_gray_png(r.phase.phase(), dir / "phase_wrapped.png", BitDepth::Sixteen);
    save_gray_png(mask_plane(r.phase.valid()), dir / "phase_mask.png", BitDepth::Eight);
    return r;
  });

  const UnwrapResult initial = stage("unwrap", [&] { return initial_unwrap(recovered.phase, recovered.brightness, config.unwrap); });
  const UnwrappedPhaseMap unwrapped = stage("correct", [&] {
    UnwrappedPhaseMap u = config.correct ? correct_phase(initial.phase, config.unwrap) : initial.phase;
    const Plane values = u.values();
    write_float_raster(values, dir / "phase_unwrapped.frf");
    save_normalized_png(values, dir / "phase_unwrapped.png");
    return u;
  });

  const DepthMap depth = stage("depth", [&] {
    const Plane shift = remove_carrier(unwrapped, spec);
    DepthMap z = phase_to_depth(shift, unwrapped.valid(), scene.kappa, scene.reference_depth, 0.0);
    z = apply_mask(z, threshold_mask(capture, config.reconstruct.mask_threshold));
    return mean_smooth(z, config.reconstruct.smooth_window);
  });

  stage("export", [&] {
    write_float_raster(depth.depth(), dir / "depth.frf");
    write_float_raster(scene.depth.depth(), dir / "depth_truth.frf");
    save_normalized_png(depth.depth(), dir / "depth.png");
    report.ply_vertices = export_point_cloud(depth, dir / "depth.ply", config.reconstruct.ply_stride);
  });

  stage("metrics", [&] {
    const PhaseMap truth = observed_phase(spec, scene);
    const Plane truth_unwrapped = observed_unwrapped_phase(spec, scene);
    report.wrapped_valid = recovered.phase.valid_count();
    report.wrapped_rms_raw = wrapped_rms_error(recovered.raw_phase, truth, true);
    report.wrapped_rms = wrapped_rms_error(recovered.phase, truth, true);
    report.unwrapped_valid = unwrapped.valid_count();
    report.regions = initial.regions.size();
    report.independent_regions = initial.independent_regions();
    report.period_fraction_initial = period_agreement(initial.phase, truth_unwrapped).fraction;
    report.period_fraction = period_agreement(unwrapped, truth_unwrapped).fraction;
    report.depth_valid = depth.valid_count();
    report.depth_rms = aligned_depth_rms(depth, scene.depth);
    report.depth_rms_cycles = report.depth_rms * std::abs(scene.kappa);
    write_json(report.to_json(), dir / "report.json");
  });

  outcome.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  outcome.timings = stage.timings;
  json timings = json::object();
  for (const auto& [name, seconds] : outcome.timings) timings[name] = seconds;
  timings["total"] = outcome.total_seconds;
  stage("timings", [&] { write_json(timings, dir / "timings.json"); });
  return outcome;
}

}  // namespace fringe
