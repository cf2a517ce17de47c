#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fringe/error.hpp"
#include "fringe/io.hpp"
#include "fringe/metrics.hpp"
#include "support.hpp"

using namespace fringe;
using fringe::test::TempDir;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidArgument;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("rasters and images reject empty shapes") {
  CHECK_THROWS_AS(RgbImage(0, 4), Error);
  CHECK_THROWS_AS(PhaseMap(3, 0), Error);
  RgbImage img(2, 3, 0.25);
  CHECK(img.pixel_count() == 6);
  CHECK(img.at(2, 1, 2) == 0.25);
}

TEST_CASE("clamp forces the nominal range and keeps pre-clamp values representable") {
  RgbImage img(2, 1);
  img.at(0, 0, 0) = 1.7;
  img.at(1, 1, 0) = -0.3;
  CHECK(img.at(0, 0, 0) == 1.7);
  img.clamp();
  CHECK(img.at(0, 0, 0) == 1.0);
  CHECK(img.at(1, 1, 0) == 0.0);
}

TEST_CASE("phase map masks invalid pixels and rejects out-of-range phases") {
  Plane p(3, 1, 0.5);
  Mask m(3, 1, 1);
  m[1] = 0;
  PhaseMap map(p, m);
  CHECK(std::isnan(map[1]));
  CHECK(map.valid_count() == 2);
  p[0] = 1.0;
  CHECK_THROWS_AS(PhaseMap(p, Mask(3, 1, 1)), Error);
  CHECK_THROWS_AS(map.set(0, -0.1), Error);
}

TEST_CASE("unwrapped phase keeps the wrapped part exact") {
  Plane p(4, 1);
  p[0] = 0.1;
  p[1] = 0.7;
  p[2] = 0.0;
  p[3] = 0.99;
  PhaseMap wrapped(p, Mask(4, 1, 1));
  UnwrappedPhaseMap u(wrapped);
  CHECK(u.valid_count() == 0);
  u.assign(1, -3);
  CHECK(u.value(1) == 0.7 - 3.0);
  CHECK(u.wrapped()[1] == 0.7);

  Plane values(3, 1);
  values[0] = -2.25;
  values[1] = 5.0;
  values[2] = std::nan("");
  const auto v = UnwrappedPhaseMap::from_values(values);
  CHECK(v.period()[0] == -3);
  CHECK(v.wrapped()[0] == doctest::Approx(0.75));
  CHECK(v.value(1) == 5.0);
  CHECK_FALSE(v.is_valid(2));
}

TEST_CASE("depth map requires finite valid depths") {
  Plane d(2, 1, 1.0);
  d[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(DepthMap(d, Mask(2, 1, 1)), Error);
  Mask m(2, 1, 1);
  m[1] = 0;
  DepthMap ok(d, m);
  CHECK(ok.valid_count() == 1);
}

TEST_CASE("quantisation rounds to nearest after clamping") {
  CHECK(quantize(0.5, BitDepth::Eight) == 128);
  CHECK(quantize(1.0, BitDepth::Sixteen) == 65535);
  CHECK(quantize(1.2, BitDepth::Eight) == 255);
  CHECK(quantize(-0.1, BitDepth::Sixteen) == 0);
}

TEST_CASE("8-bit PNG round trip is exact to one code") {
  TempDir dir;
  const RgbImage img = fringe::test::random_image(17, 9, 5);
  save_image(img, dir / "a.png", BitDepth::Eight);
  const RgbImage back = load_image(dir / "a.png");
  REQUIRE(back.width() == 17);
  REQUIRE(back.height() == 9);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
      CHECK(std::abs(back.channel(c)[i] - img.channel(c)[i]) <= 0.5 / 255 + 1e-12);
    }
  }
}

TEST_CASE("16-bit PNG and PPM round trips") {
  TempDir dir;
  RgbImage img = fringe::test::random_image(5, 4, 9);
  img.at(1, 0, 0) = 1.0;
  save_image(img, dir / "b.png", BitDepth::Sixteen);
  RgbImage back = load_image(dir / "b.png");
  CHECK(back.at(1, 0, 0) == 1.0);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) CHECK(std::abs(back.channel(2)[i] - img.channel(2)[i]) <= 0.5 / 65535 + 1e-12);

  save_image(img, dir / "c.ppm", BitDepth::Sixteen);
  back = load_image(dir / "c.ppm");
  for (std::size_t i = 0; i < img.pixel_count(); ++i) CHECK(std::abs(back.channel(0)[i] - img.channel(0)[i]) <= 0.5 / 65535 + 1e-12);
  save_image(img, dir / "d.ppm", BitDepth::Eight);
  CHECK(fringe::test::slurp(dir / "d.ppm").substr(0, 2) == "P6");
}

TEST_CASE("all-zero image loads as zeros") {
  TempDir dir;
  save_image(RgbImage(4, 4), dir / "z.png");
  const RgbImage z = load_image(dir / "z.png");
  for (int c = 0; c < 3; ++c) {
    for (double v : z.channel(c)) CHECK(v == 0.0);
  }
}

TEST_CASE("values above one are stored as full scale") {
  TempDir dir;
  RgbImage img(1, 1, 1.2);
  save_image(img, dir / "s.png");
  CHECK(load_image(dir / "s.png").at(0, 0, 0) == 1.0);
}

TEST_CASE("load errors are distinguished") {
  TempDir dir;
  CHECK(kind_of([&] { load_image(dir / "missing.png"); }) == ErrorKind::MissingFile);
  {
    std::ofstream(dir / "text.png") << "hello world, not an image";
  }
  CHECK(kind_of([&] { load_image(dir / "text.png"); }) == ErrorKind::UnsupportedFormat);
  {
    std::ofstream(dir / "bad.ppm", std::ios::binary) << "P6\n-3 2\n255\n";
  }
  CHECK(kind_of([&] { load_image(dir / "bad.ppm"); }) == ErrorKind::CorruptHeader);
  {
    std::ofstream out(dir / "trunc.png", std::ios::binary);
    const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    out.write(reinterpret_cast<const char*>(sig), 8);
    out << "garbage";
  }
  CHECK(kind_of([&] { load_image(dir / "trunc.png"); }) == ErrorKind::CorruptHeader);
  CHECK(kind_of([&] { save_image(RgbImage(1, 1), dir / "no" / "such" / "dir.png"); }) == ErrorKind::Unwritable);
}

TEST_CASE("float raster round trip keeps NaN and has the documented header") {
  TempDir dir;
  Plane p(3, 2);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = 0.125 * static_cast<double>(i) - 0.3;
  p[4] = std::nan("");
  write_float_raster(p, dir / "p.frf");
  const std::string bytes = fringe::test::slurp(dir / "p.frf");
  REQUIRE(bytes.size() == 12 + 6 * 4);
  CHECK(bytes.substr(0, 4) == "FRF1");
  std::uint32_t w = 0;
  std::memcpy(&w, bytes.data() + 4, 4);
  CHECK(w == 3);
  const Plane back = read_float_raster(dir / "p.frf");
  CHECK(back.width() == 3);
  CHECK(std::isnan(back[4]));
  CHECK(back[5] == doctest::Approx(p[5]).epsilon(1e-7));
  {
    std::ofstream(dir / "bad.frf", std::ios::binary) << "FRF1\x03";
  }
  CHECK(kind_of([&] { read_float_raster(dir / "bad.frf"); }) == ErrorKind::CorruptHeader);
}

TEST_CASE("point cloud vertex counts and header") {
  TempDir dir;
  CHECK(export_point_cloud(DepthMap(2, 2, 1.5), dir / "a.ply") == 4);
  const auto lines = lines_of(fringe::test::slurp(dir / "a.ply"));
  REQUIRE(lines.size() == 11);
  CHECK(lines[0] == "ply");
  CHECK(lines[1] == "format ascii 1.0");
  CHECK(lines[2] == "element vertex 4");
  CHECK(lines[3] == "property float x");
  CHECK(lines[6] == "end_header");

  Plane d(3, 3, 0.0);
  CHECK(export_point_cloud(DepthMap(d, Mask(3, 3, 0)), dir / "b.ply") == 0);
  CHECK(lines_of(fringe::test::slurp(dir / "b.ply"))[2] == "element vertex 0");

  CHECK(export_point_cloud(DepthMap(10, 10), dir / "c.ply", 2) == 25);
  CHECK_THROWS_AS(export_point_cloud(DepthMap(2, 2), dir / "d.ply", 0), Error);
}

TEST_CASE("circular difference wraps into [-0.5, 0.5)") {
  CHECK(circular_difference(0.95, 0.05) == doctest::Approx(-0.1));
  CHECK(circular_difference(0.05, 0.95) == doctest::Approx(0.1));
  CHECK(circular_difference(0.3, 0.3) == 0.0);
}

TEST_CASE("wrapped RMS with offset alignment ignores a global shift") {
  Plane a(4, 1);
  Plane b(4, 1);
  for (int i = 0; i < 4; ++i) {
    a[i] = 0.2 * i;
    b[i] = std::fmod(0.2 * i + 0.9, 1.0);
  }
  PhaseMap pa(a, Mask(4, 1, 1));
  PhaseMap pb(b, Mask(4, 1, 1));
  CHECK(wrapped_rms_error(pa, pb, false) == doctest::Approx(0.1));
  CHECK(wrapped_rms_error(pa, pb, true) < 1e-12);
}

TEST_CASE("period agreement tolerates a global integer and fractional offset") {
  Plane truth(5, 1);
  Plane w(5, 1);
  for (int i = 0; i < 5; ++i) {
    truth[i] = 0.3 * i;
    w[i] = std::fmod(0.3 * i + 0.05, 1.0);
  }
  PhaseMap wrapped(w, Mask(5, 1, 1));
  UnwrappedPhaseMap u(wrapped);
  for (int i = 0; i < 5; ++i) u.assign(i, static_cast<std::int64_t>(std::floor(0.3 * i + 0.05)) + 7);
  auto a = period_agreement(u, truth);
  CHECK(a.fraction == 1.0);
  CHECK(a.global_offset == 7);
  u.set_period(2, u.period()[2] + 1);
  a = period_agreement(u, truth);
  CHECK(a.correct == 4);
  Mask exclude(5, 1, 0);
  exclude[2] = 1;
  CHECK(period_agreement(u, truth, &exclude).fraction == 1.0);
}

TEST_CASE("phase histogram counts per bin") {
  const auto h = phase_histogram(std::vector<double>{0.0, 0.1, 0.26, 0.5, 0.99}, 4);
  CHECK(h == std::vector<std::size_t>{2, 1, 1, 1});
}

TEST_CASE("aligned depth RMS removes the median offset") {
  DepthMap truth(3, 1, 0.0);
  Plane e(3, 1, 5.0);
  CHECK(aligned_depth_rms(DepthMap(e, Mask(3, 1, 1)), truth) == 0.0);
}
