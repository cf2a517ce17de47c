#pragma once

#include <vector>

namespace fringe {

// Monotone per-channel transfer [0,1] -> [0,1]: either v^gamma or a lookup
// curve sampled uniformly on [0,1] and linearly interpolated.
class ResponseCurve {
 public:
  ResponseCurve() = default;  // identity

  static ResponseCurve gamma(double exponent);
  static ResponseCurve lookup(std::vector<double> samples);

  double operator()(double v) const noexcept;

  bool is_identity() const noexcept { return samples_.empty() && gamma_ == 1.0; }
  bool is_lookup() const noexcept { return !samples_.empty(); }
  double exponent() const noexcept { return gamma_; }
  const std::vector<double>& samples() const noexcept { return samples_; }

 private:
  double gamma_ = 1.0;
  std::vector<double> samples_;
};

}  // namespace fringe
