#include "fringe/response.hpp"

#include <algorithm>
#include <cmath>

#include "fringe/error.hpp"

namespace fringe {

ResponseCurve ResponseCurve::gamma(double exponent) {
  if (!(exponent > 0.0) || !std::isfinite(exponent)) fail(ErrorKind::InvalidArgument, "gamma exponent must be > 0");
  ResponseCurve curve;
  curve.gamma_ = exponent;
  return curve;
}

ResponseCurve ResponseCurve::lookup(std::vector<double> samples) {
  if (samples.size() < 2) fail(ErrorKind::InvalidArgument, "response curve needs at least two samples");
  if (samples.front() != 0.0) fail(ErrorKind::InvalidArgument, "response curve must map 0 to 0");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i] >= 0.0 && samples[i] <= 1.0)) fail(ErrorKind::InvalidArgument, "response samples must lie in [0,1]");
    if (i > 0 && samples[i] < samples[i - 1]) fail(ErrorKind::InvalidArgument, "response curve must be nondecreasing");
  }
  if (samples.back() <= samples.front()) fail(ErrorKind::InvalidArgument, "response curve must not be constant");
  ResponseCurve curve;
  curve.samples_ = std::move(samples);
  return curve;
}

double ResponseCurve::operator()(double v) const noexcept {
  if (samples_.empty()) return gamma_ == 1.0 ? v : std::pow(v, gamma_);
  const double t = std::clamp(v, 0.0, 1.0) * static_cast<double>(samples_.size() - 1);
  const auto k = std::min(static_cast<std::size_t>(t), samples_.size() - 2);
  const double f = t - static_cast<double>(k);
  return samples_[k] + f * (samples_[k + 1] - samples_[k]);
}

}  // namespace fringe
