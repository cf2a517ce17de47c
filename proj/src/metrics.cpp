#include "fringe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "fringe/error.hpp"

namespace fringe {

namespace {

void require_same_shape(const PhaseMap& a, const PhaseMap& b) {
  if (a.width() != b.width() || a.height() != b.height()) fail(ErrorKind::DimensionMismatch, "phase maps differ in size");
}

double circular_mean(const std::vector<double>& diffs) {
  double s = 0.0, c = 0.0;
  for (double d : diffs) {
    s += std::sin(2.0 * std::numbers::pi * d);
    c += std::cos(2.0 * std::numbers::pi * d);
  }
  return std::atan2(s, c) / (2.0 * std::numbers::pi);
}

}  // namespace

double circular_difference(double a, double b) {
  const double d = a - b;
  return d - std::floor(d + 0.5);
}

double max_wrapped_error(const PhaseMap& estimate, const PhaseMap& truth) {
  require_same_shape(estimate, truth);
  double worst = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (estimate.is_valid(i) && truth.is_valid(i)) worst = std::max(worst, std::abs(circular_difference(estimate[i], truth[i])));
  }
  return worst;
}

double wrapped_rms_error(const PhaseMap& estimate, const PhaseMap& truth, bool align_offset) {
  require_same_shape(estimate, truth);
  std::vector<double> diffs;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (estimate.is_valid(i) && truth.is_valid(i)) diffs.push_back(circular_difference(estimate[i], truth[i]));
  }
  if (diffs.empty()) fail(ErrorKind::NoValidPixels, "no overlapping valid pixels");
  const double offset = align_offset ? circular_mean(diffs) : 0.0;
  double sum = 0.0;
  for (double d : diffs) {
    const double e = circular_difference(d, offset);
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(diffs.size()));
}

PeriodAgreement period_agreement(const UnwrappedPhaseMap& estimate, const Plane& truth, const Mask* exclude) {
  if (!truth.same_shape(estimate.width(), estimate.height())) fail(ErrorKind::DimensionMismatch, "truth and estimate differ in size");
  std::vector<double> diffs;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!estimate.is_valid(i) || !std::isfinite(truth[i]) || (exclude && (*exclude)[i])) continue;
    diffs.push_back(estimate.value(i) - truth[i]);
    where.push_back(i);
  }
  PeriodAgreement out;
  out.compared = diffs.size();
  if (diffs.empty()) return out;
  const double fractional = circular_mean(diffs);
  std::map<std::int64_t, std::size_t> votes;
  std::vector<std::int64_t> index(diffs.size());
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    index[k] = static_cast<std::int64_t>(std::llround(diffs[k] - fractional));
    ++votes[index[k]];
  }
  const auto best = std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  out.global_offset = best->first;
  out.correct = best->second;
  out.fraction = static_cast<double>(out.correct) / static_cast<double>(out.compared);
  return out;
}

double aligned_depth_rms(const DepthMap& estimate, const DepthMap& truth) {
  if (estimate.width() != truth.width() || estimate.height() != truth.height()) fail(ErrorKind::DimensionMismatch, "depth maps differ in size");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (estimate.is_valid(i) && truth.is_valid(i)) diffs.push_back(estimate[i] - truth[i]);
  }
  if (diffs.empty()) fail(ErrorKind::NoValidPixels, "no overlapping valid depth pixels");
  std::vector<double> sorted = diffs;
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  const double median = *mid;
  double sum = 0.0;
  for (double d : diffs) sum += (d - median) * (d - median);
  return std::sqrt(sum / static_cast<double>(diffs.size()));
}

std::vector<std::size_t> phase_histogram(const std::vector<double>& values, int bins) {
  if (bins <= 0) fail(ErrorKind::InvalidArgument, "histogram needs at least one bin");
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    const auto b = std::clamp(static_cast<long>(std::floor(v * bins)), 0L, static_cast<long>(bins - 1));
    ++counts[static_cast<std::size_t>(b)];
  }
  return counts;
}

std::vector<std::size_t> phase_histogram(const PhaseMap& phase, int bins) {
  std::vector<double> values;
  values.reserve(phase.size());
  for (std::size_t i = 0; i < phase.size(); ++i) {
    if (phase.is_valid(i)) values.push_back(phase[i]);
  }
  return phase_histogram(values, bins);
}

}  // namespace fringe
