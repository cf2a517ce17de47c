#include <algorithm>
#include <cmath>

#include "fringe/kernels.hpp"
#include "pixel_ops.hpp"

namespace fringe::kernels {

double remap_one(double phase, std::span<const double> knots) {
  const std::size_t bins = knots.size() - 1;
  const auto it = std::lower_bound(knots.begin() + 1, knots.end(), phase);
  const auto upper = static_cast<std::size_t>(it - knots.begin());
  const double lo = knots[upper - 1];
  const double hi = knots[upper];
  const double within = hi > lo ? (phase - lo) / (hi - lo) : 0.0;
  const double out = (static_cast<double>(upper - 1) + within) / static_cast<double>(bins);
  return out < 1.0 ? out : std::nextafter(1.0, 0.0);
}

namespace serial {

void carrier(Plane& out, double cycles, bool along_rows) {
  const int extent = along_rows ? out.height() : out.width();
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      out(x, y) = detail::wrap_cycles(detail::carrier_at(along_rows ? y : x, extent, cycles));
    }
  }
}

void synthesize(RgbImage& out, const Plane& phase, FringeParams params) {
  for (std::size_t i = 0; i < phase.size(); ++i) {
    for (int c = 0; c < 3; ++c) out.channel(c)[i] = detail::fringe_intensity(params.mean, params.modulation, phase[i], c);
  }
}

void reflect(RgbImage& out, Plane& observed, const Plane& carrier, const Plane& depth, const Mask& valid,
             const RgbImage& albedo, double kappa, double reference_depth, FringeParams params) {
  for (std::size_t i = 0; i < carrier.size(); ++i) {
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
  for (std::size_t i = 0; i < in.pixel_count(); ++i) {
    const double c0 = in.channel(0)[i], c1 = in.channel(1)[i], c2 = in.channel(2)[i];
    for (int r = 0; r < 3; ++r) {
      const auto& m = cam.crosstalk[static_cast<std::size_t>(r)];
      const double v = m[0] * c0 + m[1] * c1 + m[2] * c2 + cam.offset[static_cast<std::size_t>(r)];
      out.channel(r)[i] = cam.response[static_cast<std::size_t>(r)](std::clamp(v, 0.0, 1.0));
    }
  }
}

void compensate(RgbImage& out, const RgbImage& in, const Matrix3& inverse, const Vector3& offset) {
  for (std::size_t i = 0; i < in.pixel_count(); ++i) {
    const double d0 = in.channel(0)[i] - offset[0];
    const double d1 = in.channel(1)[i] - offset[1];
    const double d2 = in.channel(2)[i] - offset[2];
    for (int r = 0; r < 3; ++r) {
      const auto& m = inverse[static_cast<std::size_t>(r)];
      out.channel(r)[i] = m[0] * d0 + m[1] * d1 + m[2] * d2;
    }
  }
}

void box_mean(Plane& out, std::span<const double> in, int width, int height, int window) {
  const int r = window / 2;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double sum = 0.0;
      int count = 0;
      for (int v = std::max(0, y - r); v <= std::min(height - 1, y + r); ++v) {
        for (int u = std::max(0, x - r); u <= std::min(width - 1, x + r); ++u) {
          sum += in[static_cast<std::size_t>(v) * static_cast<std::size_t>(width) + static_cast<std::size_t>(u)];
          ++count;
        }
      }
      out(x, y) = sum / count;
    }
  }
}

void masked_box_mean(Plane& out, const Plane& in, const Mask& valid, int window) {
  const int r = window / 2;
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      if (!valid(x, y)) {
        out(x, y) = kMaskedValue;
        continue;
      }
      double sum = 0.0;
      int count = 0;
      for (int v = std::max(0, y - r); v <= std::min(in.height() - 1, y + r); ++v) {
        for (int u = std::max(0, x - r); u <= std::min(in.width() - 1, x + r); ++u) {
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
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    double phi = 0.0;
    const bool ok = (!input_valid || (*input_valid)[i]) &&
                    detail::phase_from_rgb(image.channel(0)[i], image.channel(1)[i], image.channel(2)[i], phi);
    phase[i] = ok ? phi : kMaskedValue;
    valid[i] = ok ? 1 : 0;
  }
}

void remap_phase(Plane& phase, const Mask& valid, std::span<const double> knots) {
  for (std::size_t i = 0; i < phase.size(); ++i) {
    if (valid[i]) phase[i] = remap_one(phase[i], knots);
  }
}

void brightness(Plane& out, const RgbImage& image) {
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    out[i] = (image.channel(0)[i] + image.channel(1)[i] + image.channel(2)[i]) / 3.0;
  }
}

}  // namespace serial
}  // namespace fringe::kernels
