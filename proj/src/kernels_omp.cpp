#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "fringe/kernels.hpp"
#include "pixel_ops.hpp"

namespace fringe::kernels::omp {

namespace {

using Index = std::int64_t;  // OpenMP loop counters must be signed

Index count_of(std::size_t n) { return static_cast<Index>(n); }

}  // namespace

void carrier(Plane& out, double cycles, bool along_rows) {
  const int width = out.width();
  const int height = out.height();
  const int extent = along_rows ? height : width;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      out(x, y) = detail::wrap_cycles(detail::carrier_at(along_rows ? y : x, extent, cycles));
    }
  }
}

void synthesize(RgbImage& out, const Plane& phase, FringeParams params) {
  const Index n = count_of(phase.size());
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    for (int c = 0; c < 3; ++c) out.channel(c)[i] = detail::fringe_intensity(params.mean, params.modulation, phase[i], c);
  }
}

void reflect(RgbImage& out, Plane& observed, const Plane& carrier, const Plane& depth, const Mask& valid,
             const RgbImage& albedo, double kappa, double reference_depth, FringeParams params) {
  const Index n = count_of(carrier.size());
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    if (!valid[i]) {
      observed[i] = kMaskedValue;
      for (int c = 0; c < 3; ++c) out.channel(c)[i] = 0.0;
      continue;
    }
    const double phi = detail::wrap_cycles(carrier[i] + kappa * (depth[i] - reference_depth));
    observed[i] = phi;
    for (int c = 0; c < 3; ++c) {
      out.channel(c)[i] = albedo.channel(c)[i] * detail::fringe_intensity(params.mean, params.modulation, phi, c);
    }
  }
}

void camera_transfer(RgbImage& out, const RgbImage& in, const CameraParams& cam) {
  const Index n = count_of(in.pixel_count());
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double c0 = in.channel(0)[i], c1 = in.channel(1)[i], c2 = in.channel(2)[i];
    for (int r = 0; r < 3; ++r) {
      const auto& m = cam.crosstalk[static_cast<std::size_t>(r)];
      const double v = m[0] * c0 + m[1] * c1 + m[2] * c2 + cam.offset[static_cast<std::size_t>(r)];
      out.channel(r)[i] = cam.response[static_cast<std::size_t>(r)](std::clamp(v, 0.0, 1.0));
    }
  }
}

void compensate(RgbImage& out, const RgbImage& in, const Matrix3& inverse, const Vector3& offset) {
  const Index n = count_of(in.pixel_count());
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double d0 = in.channel(0)[i] - offset[0];
    const double d1 = in.channel(1)[i] - offset[1];
    const double d2 = in.channel(2)[i] - offset[2];
    for (int r = 0; r < 3; ++r) {
      const auto& m = inverse[static_cast<std::size_t>(r)];
      out.channel(r)[i] = m[0] * d0 + m[1] * d1 + m[2] * d2;
    }
  }
}

// Separable: horizontal window sums from per-row prefix sums, then a direct
// vertical sum over at most `window` rows. Each output is computed by exactly
// one thread in a fixed order, so the result does not depend on thread count.
void box_mean(Plane& out, std::span<const double> in, int width, int height, int window) {
  const int r = window / 2;
  const auto w = static_cast<std::size_t>(width);
  std::vector<double> rows(in.size());
#pragma omp parallel
  {
    std::vector<double> prefix(w + 1);
#pragma omp for schedule(static)
    for (int y = 0; y < height; ++y) {
      const double* src = in.data() + static_cast<std::size_t>(y) * w;
      prefix[0] = 0.0;
      for (std::size_t x = 0; x < w; ++x) prefix[x + 1] = prefix[x] + src[x];
      double* dst = rows.data() + static_cast<std::size_t>(y) * w;
      for (int x = 0; x < width; ++x) {
        const int lo = std::max(0, x - r);
        const int hi = std::min(width - 1, x + r);
        dst[x] = prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)];
      }
    }
#pragma omp for schedule(static)
    for (int y = 0; y < height; ++y) {
      const int lo = std::max(0, y - r);
      const int hi = std::min(height - 1, y + r);
      const int row_count = hi - lo + 1;
      for (int x = 0; x < width; ++x) {
        double sum = 0.0;
        for (int v = lo; v <= hi; ++v) sum += rows[static_cast<std::size_t>(v) * w + static_cast<std::size_t>(x)];
        const int col_count = std::min(width - 1, x + r) - std::max(0, x - r) + 1;
        out(x, y) = sum / (row_count * col_count);
      }
    }
  }
}

void masked_box_mean(Plane& out, const Plane& in, const Mask& valid, int window) {
  const int r = window / 2;
  const int width = in.width();
  const int height = in.height();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!valid(x, y)) {
        out(x, y) = kMaskedValue;
        continue;
      }
      double sum = 0.0;
      int count = 0;
      for (int v = std::max(0, y - r); v <= std::min(height - 1, y + r); ++v) {
        for (int u = std::max(0, x - r); u <= std::min(width - 1, x + r); ++u) {
          if (!valid(u, v)) continue;
          sum += in(u, v);
          ++count;
        }
      }
      out(x, y) = sum / count;
    }
  }
}

void wrapped_phase(Plane& phase, Mask& valid, const RgbImage& image, const Mask* input_valid) {
  const Index n = count_of(image.pixel_count());
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    double phi = 0.0;
    const bool ok = (!input_valid || (*input_valid)[i]) &&
                    detail::phase_from_rgb(image.channel(0)[i], image.channel(1)[i], image.channel(2)[i], phi);
    phase[i] = ok ? phi : kMaskedValue;
    valid[i] = ok ? 1 : 0;
  }
}

void remap_phase(Plane& phase, const Mask& valid, std::span<const double> knots) {
  const Index n = count_of(phase.size());
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    if (valid[i]) phase[i] = remap_one(phase[i], knots);
  }
}

void brightness(Plane& out, const RgbImage& image) {
  const Index n = count_of(image.pixel_count());
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    out[i] = (image.channel(0)[i] + image.channel(1)[i] + image.channel(2)[i]) / 3.0;
  }
}

}  // namespace fringe::kernels::omp
