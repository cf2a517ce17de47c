#include <cmath>

#include "doctest.h"
#include "fringe/error.hpp"
#include "fringe/metrics.hpp"
#include "fringe/reconstruct.hpp"
#include "fringe/recovery.hpp"
#include "fringe/simulator.hpp"
#include "fringe/unwrap.hpp"
#include "support.hpp"

using namespace fringe;

TEST_CASE("brightness threshold") {
  const RgbImage img = fringe::test::random_image(12, 9, 6);
  const Mask all = threshold_mask(img, 0.0);
  for (auto v : all.data()) CHECK(v == 1);

  RgbImage sat(3, 1, 1.0);
  sat.at(1, 2, 0) = 0.99;
  const Mask only_full = threshold_mask(sat, 1.0);
  CHECK(only_full[0] == 1);
  CHECK(only_full[2] == 0);

  PatternSpec spec;
  spec.mean_a = 0.5;
  spec.modulation_b = 0.5;
  spec.width = 40;
  spec.height = 40;
  const Mask m = threshold_mask(synthesize_pattern(spec), 0.4);
  for (auto v : m.data()) CHECK(v == 1);

  CHECK_THROWS_AS(threshold_mask(img, 1.0 + 1e-9), Error);
  CHECK_THROWS_AS(threshold_mask(img, -0.1), Error);
}

TEST_CASE("raising the threshold never adds pixels") {
  const RgbImage img = fringe::test::random_image(30, 20, 8);
  std::size_t prev = img.pixel_count() + 1;
  for (double tau = 0.0; tau <= 1.0; tau += 0.05) {
    const Mask m = threshold_mask(img, tau);
    std::size_t n = 0;
    for (auto v : m.data()) n += v;
    CHECK(n <= prev);
    prev = n;
  }
}

TEST_CASE("phase to depth is the linear inverse") {
  Plane phi(3, 1, 0.7);
  phi[1] = 1.7;
  const DepthMap flat = phase_to_depth(UnwrappedPhaseMap::from_values(phi), 0.5, 2.0, 0.7);
  CHECK(flat.depth()[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(flat.depth()[1] - flat.depth()[0] == doctest::Approx(2.0));

  Mask valid(3, 1, 1);
  valid[2] = 0;
  const DepthMap partial = phase_to_depth(phi, valid, 0.5, 0.0, 0.0);
  CHECK_FALSE(partial.is_valid(2));
  CHECK_THROWS_AS(phase_to_depth(phi, valid, 0.0, 0.0, 0.0), Error);
}

TEST_CASE("mean smoothing") {
  Plane row(5, 1, 0.0);
  row[2] = 3.0;
  const DepthMap s = mean_smooth(DepthMap(row, Mask(5, 1, 1)), 3);
  const double expected[5] = {0.0, 1.0, 1.0, 1.0, 0.0};
  for (int i = 0; i < 5; ++i) CHECK(s.depth()[i] == doctest::Approx(expected[i]).epsilon(1e-15));

  const DepthMap c = mean_smooth(DepthMap(7, 5, 2.5), 5);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(c.depth()[i] == doctest::Approx(2.5).epsilon(1e-15));

  const DepthMap r(brightness(fringe::test::random_image(9, 9, 2)), Mask(9, 9, 1));
  const DepthMap id = mean_smooth(r, 1);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(id.depth()[i] == r.depth()[i]);

  CHECK_THROWS_AS(mean_smooth(r, 2), Error);
}

TEST_CASE("mean smoothing skips masked pixels") {
  Plane d(3, 1, 1.0);
  d[1] = 100.0;
  Mask m(3, 1, 1);
  m[1] = 0;
  const DepthMap s = mean_smooth(DepthMap(d, m), 3);
  CHECK(s.depth()[0] == 1.0);
  CHECK_FALSE(s.is_valid(1));
}

TEST_CASE("mean smoothing preserves the mean of interior support") {
  const int n = 40;
  const int window = 5;
  Plane d(n, n, 0.0);
  const RgbImage noise = fringe::test::random_image(n, n, 31);
  double total = 0.0;
  for (int y = 8; y < n - 8; ++y) {
    for (int x = 8; x < n - 8; ++x) {
      d(x, y) = noise.at(0, x, y);
      total += d(x, y);
    }
  }
  const DepthMap s = mean_smooth(DepthMap(d, Mask(n, n, 1)), window);
  double after = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) after += s.depth()[i];
  CHECK(std::abs(after - total) / (n * n) < 1e-12);
}

TEST_CASE("apply_mask restricts validity") {
  Mask keep(2, 2, 1);
  keep[3] = 0;
  const DepthMap m = apply_mask(DepthMap(2, 2, 4.0), keep);
  CHECK(m.valid_count() == 3);
  CHECK_THROWS_AS(apply_mask(DepthMap(2, 2), Mask(3, 2, 1)), Error);
}

TEST_CASE("reflect, recover, unwrap and convert reproduce the scene depth") {
  PatternSpec spec;
  spec.width = 96;
  spec.height = 96;
  spec.cycles = 8;
  DepthSpec ds;
  ds.tilt_x = 0.01;
  ds.features.push_back({SurfaceFeature::Kind::Gaussian, 48.0, 48.0, 12.0, 3.0});
  SceneModel scene;
  scene.depth = build_depth(ds, spec.width, spec.height);
  scene.albedo = RgbImage(spec.width, spec.height, 1.0);
  scene.kappa = 0.1;

  const RgbImage capture = apply_camera(reflect(spec, scene), CameraModel::identity());
  const PhaseMap wrapped = wrapped_phase(capture);
  UnwrapConfig cfg;
  const UnwrapResult u = initial_unwrap(wrapped, brightness(capture), cfg);
  const UnwrappedPhaseMap corrected = correct_phase(u.phase, cfg);
  const Plane shift = remove_carrier(corrected, spec);
  const DepthMap depth = phase_to_depth(shift, corrected.valid(), scene.kappa, 0.0, 0.0);
  CHECK(depth.valid_count() == depth.size());
  CHECK(aligned_depth_rms(depth, scene.depth) < 1e-6);
}

TEST_CASE("carrier removal checks the pattern shape") {
  PatternSpec spec;
  spec.width = 10;
  spec.height = 10;
  CHECK_THROWS_AS(remove_carrier(UnwrappedPhaseMap::from_values(Plane(5, 5, 0.0)), spec), Error);
}
