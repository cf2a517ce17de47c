#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fringe/error.hpp"
#include "fringe/pattern.hpp"

using namespace fringe;

TEST_CASE("ideal phase at sample rows of the default pattern") {
  const PhaseMap phase = ideal_phase(PatternSpec{});
  CHECK(phase.phase()(5, 0) == 0.0);
  CHECK(phase.phase()(5, 6) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(phase.phase()(5, 12) == 0.0);
  CHECK(phase.valid_count() == phase.size());
}

TEST_CASE("vertical stripes vary along x") {
  PatternSpec spec;
  spec.orientation = Orientation::VerticalStripes;
  spec.cycles = 64;
  const PhaseMap phase = ideal_phase(spec);
  CHECK(phase.phase()(5, 0) == doctest::Approx(0.5));
  CHECK(phase.phase()(5, 0) == phase.phase()(5, 479));
  CHECK(spec.phase_step() == 0.1);
}

TEST_CASE("pattern values at phase zero and one third") {
  PatternSpec spec;
  RgbImage img = synthesize_pattern(spec);
  CHECK(img.at(0, 0, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(img.at(1, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(img.at(2, 0, 0) == doctest::Approx(0.25).epsilon(1e-12));

  spec.modulation_b = 0.4;
  img = synthesize_pattern(spec);
  // row 4 of a 12-row cycle is phase 1/3
  CHECK(img.at(0, 3, 4) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(img.at(1, 3, 4) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(img.at(2, 3, 4) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("channel sum is 3a and values stay within a +- b") {
  PatternSpec spec;
  spec.mean_a = 0.45;
  spec.modulation_b = 0.35;
  spec.cycles = 37.3;
  const RgbImage img = synthesize_pattern(spec);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const double s = img.channel(0)[i] + img.channel(1)[i] + img.channel(2)[i];
    CHECK(std::abs(s - 3 * spec.mean_a) < 1e-12);
    for (int c = 0; c < 3; ++c) {
      CHECK(img.channel(c)[i] >= spec.mean_a - spec.modulation_b - 1e-12);
      CHECK(img.channel(c)[i] <= spec.mean_a + spec.modulation_b + 1e-12);
    }
  }
}

TEST_CASE("default pattern steps one twelfth of a cycle per row") {
  const PatternSpec spec;
  CHECK(spec.phase_step() == 1.0 / 12.0);
  CHECK(spec.phase_step() * 2 * std::numbers::pi == doctest::Approx(std::numbers::pi / 6));
  const Plane carrier = carrier_phase(spec);
  for (int y = 0; y + 1 < spec.height; ++y) CHECK(std::abs(carrier(7, y + 1) - carrier(7, y) - 1.0 / 12.0) < 1e-12);
}

TEST_CASE("spec validation") {
  PatternSpec spec;
  spec.mean_a = 0.6;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = PatternSpec{};
  spec.modulation_b = 0.0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = PatternSpec{};
  spec.cycles = 0.5;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = PatternSpec{};
  spec.width = 0;
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("orientation names") {
  CHECK(parse_orientation("horizontal") == Orientation::HorizontalStripes);
  CHECK(parse_orientation("vertical-stripes") == Orientation::VerticalStripes);
  CHECK(parse_orientation(to_string(Orientation::VerticalStripes)) == Orientation::VerticalStripes);
  CHECK_THROWS_AS(parse_orientation("diagonal"), Error);
}
