#pragma once

// Per-pixel arithmetic shared by the serial and OpenMP kernels, so both
// produce bit-identical results for point-wise maps.

#include <array>
#include <cmath>
#include <numbers>

namespace fringe::detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr std::array<double, 3> kChannelShift{-kTwoPi / 3.0, 0.0, kTwoPi / 3.0};
inline constexpr double kDegenerateArgument = 1e-9;

// Maps any real to [0,1).
inline double wrap_cycles(double t) {
  double f = t - std::floor(t);
  return f >= 1.0 ? 0.0 : f;
}

inline double carrier_at(int coordinate, int extent, double cycles) {
  return cycles * static_cast<double>(coordinate) / static_cast<double>(extent);
}

inline double fringe_intensity(double a, double b, double phase_cycles, int channel) {
  return a + b * std::cos(kTwoPi * phase_cycles + kChannelShift[static_cast<std::size_t>(channel)]);
}

// Three-step colour phase; returns false for the degenerate (grey) case.
inline bool phase_from_rgb(double c1, double c2, double c3, double& phase) {
  const double num = std::sqrt(3.0) * (c1 - c3);
  const double den = 2.0 * c2 - c1 - c3;
  if (std::abs(num) < kDegenerateArgument && std::abs(den) < kDegenerateArgument) return false;
  phase = wrap_cycles(std::atan2(num, den) / kTwoPi);
  return true;
}

}  // namespace fringe::detail
