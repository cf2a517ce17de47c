// Serial reference vs OpenMP kernels on a 640 x 480 frame. Run with
// OMP_NUM_THREADS set to compare thread counts. The serial box mean sums each
// window directly; the parallel one is separable, so it also wins on one core.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "fringe/kernels.hpp"

using namespace fringe;
namespace k = fringe::kernels;

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;

struct Frame {
  RgbImage image{kWidth, kHeight};
  Plane phase{kWidth, kHeight};
  Plane depth{kWidth, kHeight};
  Mask valid{kWidth, kHeight, 1};
  RgbImage albedo{kWidth, kHeight, 0.8};
  Plane carrier{kWidth, kHeight};
  std::vector<double> knots;
  k::CameraParams camera;

  Frame() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int c = 0; c < 3; ++c) {
      for (double& v : image.channel(c)) v = u(rng);
    }
    for (std::size_t i = 0; i < phase.size(); ++i) {
      phase[i] = u(rng) * 0.999;
      depth[i] = 10 * u(rng);
      valid[i] = u(rng) > 0.05;
    }
    k::serial::carrier(carrier, 40.0, true);
    for (int j = 0; j <= 256; ++j) knots.push_back(std::pow(j / 256.0, 1.5));
    camera.crosstalk = {{{0.9, 0.08, 0.02}, {0.1, 0.8, 0.1}, {0.03, 0.12, 0.85}}};
    camera.offset = {0.02, 0.02, 0.02};
    camera.response.fill(ResponseCurve::gamma(2.2));
  }
};

const Frame& frame() {
  static const Frame f;
  return f;
}

void pixels(benchmark::State& state) {
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * kWidth * kHeight);
}

template <auto Kernel>
void BM_synthesize(benchmark::State& state) {
  RgbImage out(kWidth, kHeight);
  for (auto _ : state) {
    Kernel(out, frame().phase, k::FringeParams{});
    benchmark::DoNotOptimize(out.channel(0).data());
  }
  pixels(state);
}

template <auto Kernel>
void BM_reflect(benchmark::State& state) {
  const Frame& f = frame();
  RgbImage out(kWidth, kHeight);
  Plane observed(kWidth, kHeight);
  for (auto _ : state) {
    Kernel(out, observed, f.carrier, f.depth, f.valid, f.albedo, 0.05, 0.0, k::FringeParams{});
    benchmark::DoNotOptimize(out.channel(0).data());
  }
  pixels(state);
}

template <auto Kernel>
void BM_camera(benchmark::State& state) {
  RgbImage out(kWidth, kHeight);
  for (auto _ : state) {
    Kernel(out, frame().image, frame().camera);
    benchmark::DoNotOptimize(out.channel(0).data());
  }
  pixels(state);
}

template <auto Kernel>
void BM_box_mean(benchmark::State& state) {
  Plane out(kWidth, kHeight);
  const auto in = frame().image.channel(0);
  const int window = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Kernel(out, in, kWidth, kHeight, window);
    benchmark::DoNotOptimize(out.data().data());
  }
  pixels(state);
}

template <auto Kernel>
void BM_masked_box_mean(benchmark::State& state) {
  Plane out(kWidth, kHeight);
  for (auto _ : state) {
    Kernel(out, frame().depth, frame().valid, 11);
    benchmark::DoNotOptimize(out.data().data());
  }
  pixels(state);
}

template <auto Kernel>
void BM_wrapped_phase(benchmark::State& state) {
  Plane phase(kWidth, kHeight);
  Mask valid(kWidth, kHeight);
  for (auto _ : state) {
    Kernel(phase, valid, frame().image, nullptr);
    benchmark::DoNotOptimize(phase.data().data());
  }
  pixels(state);
}

template <auto Kernel>
void BM_remap(benchmark::State& state) {
  Plane work = frame().phase;
  for (auto _ : state) {
    state.PauseTiming();
    work = frame().phase;
    state.ResumeTiming();
    Kernel(work, frame().valid, frame().knots);
    benchmark::DoNotOptimize(work.data().data());
  }
  pixels(state);
}

}  // namespace

BENCHMARK(BM_synthesize<k::serial::synthesize>)->Name("synthesize/serial");
BENCHMARK(BM_synthesize<k::omp::synthesize>)->Name("synthesize/omp");
BENCHMARK(BM_reflect<k::serial::reflect>)->Name("reflect/serial");
BENCHMARK(BM_reflect<k::omp::reflect>)->Name("reflect/omp");
BENCHMARK(BM_camera<k::serial::camera_transfer>)->Name("camera_transfer/serial");
BENCHMARK(BM_camera<k::omp::camera_transfer>)->Name("camera_transfer/omp");
BENCHMARK(BM_box_mean<k::serial::box_mean>)->Name("box_mean/serial")->Arg(13);
BENCHMARK(BM_box_mean<k::omp::box_mean>)->Name("box_mean/omp")->Arg(13);
BENCHMARK(BM_masked_box_mean<k::serial::masked_box_mean>)->Name("masked_box_mean/serial");
BENCHMARK(BM_masked_box_mean<k::omp::masked_box_mean>)->Name("masked_box_mean/omp");
BENCHMARK(BM_wrapped_phase<k::serial::wrapped_phase>)->Name("wrapped_phase/serial");
BENCHMARK(BM_wrapped_phase<k::omp::wrapped_phase>)->Name("wrapped_phase/omp");
BENCHMARK(BM_remap<k::serial::remap_phase>)->Name("remap_phase/serial");
BENCHMARK(BM_remap<k::omp::remap_phase>)->Name("remap_phase/omp");

int main(int argc, char** argv) {
  frame();  // build the shared input outside the timed loops
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
