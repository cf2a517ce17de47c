#include "fringe/unwrap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "fringe/error.hpp"

namespace fringe {

namespace {

struct Candidate {
  double key;           // (quantised) intensity, larger first
  std::uint8_t axis;    // 0 = low-gradient axis, preferred
  std::uint32_t pixel;  // row-major index, smaller first
  std::uint32_t parent;

  // std::priority_queue pops the largest element, so "less" means lower priority.
  bool operator<(const Candidate& o) const noexcept {
    if (key != o.key) return key < o.key;
    if (axis != o.axis) return axis > o.axis;
    if (pixel != o.pixel) return pixel > o.pixel;
    return parent > o.parent;
  }
};

class Propagator {
 public:
  Propagator(const PhaseMap& phase, const Plane& intensity, const UnwrapConfig& config)
      : phase_(phase),
        config_(config),
        width_(phase.width()),
        height_(phase.height()),
        key_(phase.size()),
        qualifies_(phase.size()),
        result_{UnwrappedPhaseMap(phase), Raster<std::int32_t>(phase.width(), phase.height(), -1), {}} {
    for (std::size_t i = 0; i < phase.size(); ++i) {
      qualifies_[i] = phase.is_valid(i) && intensity[i] >= config.intensity_threshold;
      key_[i] = config.intensity_levels > 0 ? std::round(intensity[i] * config.intensity_levels) : intensity[i];
      if (qualifies_[i]) order_.push_back(static_cast<std::uint32_t>(i));
    }
    if (order_.empty()) fail(ErrorKind::NoValidPixels, "no valid pixel above the unwrapping intensity threshold");
    std::stable_sort(order_.begin(), order_.end(), [this](std::uint32_t a, std::uint32_t b) { return key_[a] > key_[b]; });
  }

  UnwrapResult run() {
    start_region(initial_seed(), -1, config_.seed_period);
    flood();
    std::size_t restarts = 0;
    while (restarts < config_.max_seed_restarts) {
      if (!restart()) break;
      ++restarts;
      flood();
    }
    return std::move(result_);
  }

 private:
  bool assigned(std::size_t i) const { return result_.phase.is_valid(i); }

  std::uint8_t axis_rank(bool horizontal_step) const {
    const bool low_gradient = (config_.orientation == Orientation::HorizontalStripes) == horizontal_step;
    return low_gradient ? 0 : 1;
  }

  // Brightest qualifying pixel in the centred middle-ninth window; ties go to
  // the pixel nearest the centre, then row-major order.
  std::size_t initial_seed() const {
    const int x0 = width_ / 3, x1 = std::max(x0 + 1, width_ - width_ / 3);
    const int y0 = height_ / 3, y1 = std::max(y0 + 1, height_ - height_ / 3);
    const double cx = (width_ - 1) / 2.0, cy = (height_ - 1) / 2.0;
    std::int64_t best = -1;
    double best_key = 0.0, best_dist = 0.0;
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        const std::size_t i = phase_.phase().index(x, y);
        if (!qualifies_[i]) continue;
        const double dist = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        if (best < 0 || key_[i] > best_key || (key_[i] == best_key && dist < best_dist)) {
          best = static_cast<std::int64_t>(i);
          best_key = key_[i];
          best_dist = dist;
        }
      }
    }
    return best >= 0 ? static_cast<std::size_t>(best) : order_.front();
  }

  void start_region(std::size_t seed, std::int64_t linked_to, std::int64_t period) {
    current_region_ = static_cast<std::int32_t>(result_.regions.size());
    result_.regions.push_back({seed, linked_to, 0});
    assign(seed, period);
  }

  void assign(std::size_t i, std::int64_t period) {
    result_.phase.assign(i, period);
    result_.region[i] = current_region_;
    ++result_.regions.back().pixels;
    const int x = static_cast<int>(i % static_cast<std::size_t>(width_));
    const int y = static_cast<int>(i / static_cast<std::size_t>(width_));
    static constexpr std::array<std::array<int, 2>, 4> kSteps{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
    for (const auto& [dx, dy] : kSteps) {
      const int nx = x + dx, ny = y + dy;
      if (nx < 0 || ny < 0 || nx >= width_ || ny >= height_) continue;
      const std::size_t n = phase_.phase().index(nx, ny);
      if (!qualifies_[n] || assigned(n)) continue;
      frontier_.push({key_[n], axis_rank(dy == 0), static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(i)});
    }
    static constexpr std::array<std::array<int, 2>, 4> kDiagonals{{{-1, -1}, {1, -1}, {-1, 1}, {1, 1}}};
    for (const auto& [dx, dy] : kDiagonals) {
      const int nx = x + dx, ny = y + dy;
      if (nx < 0 || ny < 0 || nx >= width_ || ny >= height_) continue;
      const std::size_t n = phase_.phase().index(nx, ny);
      if (!qualifies_[n] || assigned(n)) continue;
      diagonal_.push({key_[n], 0, static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(i)});
    }
  }

  // Integer period placing pixel i within half a cycle of the unwrapped parent.
  std::int64_t period_from(std::size_t parent, std::size_t i) const {
    return result_.phase.period()[parent] + static_cast<std::int64_t>(std::round(phase_[parent] - phase_[i]));
  }

  void flood() {
    while (!frontier_.empty()) {
      const Candidate c = frontier_.top();
      frontier_.pop();
      if (assigned(c.pixel)) continue;
      assign(c.pixel, period_from(c.parent, c.pixel));
    }
  }

  bool restart() {
    while (!diagonal_.empty()) {
      const Candidate c = diagonal_.top();
      diagonal_.pop();
      if (assigned(c.pixel)) continue;
      start_region(c.pixel, c.parent, period_from(c.parent, c.pixel));
      return true;
    }
    while (next_unassigned_ < order_.size() && assigned(order_[next_unassigned_])) ++next_unassigned_;
    if (next_unassigned_ == order_.size()) return false;
    start_region(order_[next_unassigned_], -1, config_.seed_period);
    return true;
  }

  const PhaseMap& phase_;
  const UnwrapConfig& config_;
  int width_;
  int height_;
  std::vector<double> key_;
  std::vector<std::uint8_t> qualifies_;
  std::vector<std::uint32_t> order_;  // qualifying pixels, brightest first, row-major within ties
  std::size_t next_unassigned_ = 0;
  std::priority_queue<Candidate> frontier_;
  std::priority_queue<Candidate> diagonal_;
  std::int32_t current_region_ = -1;
  UnwrapResult result_;
};

}  // namespace

void UnwrapConfig::validate() const {
  if (correction_window < 3 || correction_window % 2 == 0) fail(ErrorKind::InvalidArgument, "correction window must be odd and >= 3");
  if (!(intensity_threshold >= 0.0 && intensity_threshold <= 1.0)) fail(ErrorKind::InvalidArgument, "intensity threshold must lie in [0,1]");
  if (intensity_levels < 0) fail(ErrorKind::InvalidArgument, "intensity levels must be >= 0");
}

std::size_t UnwrapResult::independent_regions() const {
  return static_cast<std::size_t>(std::count_if(regions.begin() + (regions.empty() ? 0 : 1), regions.end(),
                                                [](const UnwrapRegion& r) { return r.linked_to < 0; }));
}

UnwrapResult initial_unwrap(const PhaseMap& phase, const Plane& intensity, const UnwrapConfig& config) {
  config.validate();
  if (!intensity.same_shape(phase.width(), phase.height())) fail(ErrorKind::DimensionMismatch, "intensity and phase shapes differ");
  if (phase.size() > std::numeric_limits<std::uint32_t>::max()) fail(ErrorKind::InvalidArgument, "image too large");
  return Propagator(phase, intensity, config).run();
}

std::vector<std::size_t> correction_order(int width, int height, Orientation orientation) {
  const bool rows_first = orientation == Orientation::HorizontalStripes;
  // Lines run along the low-gradient axis; each is swept centre, then toward
  // the lower coordinate, then toward the higher one.
  const int lines = rows_first ? height : width;
  const int length = rows_first ? width : height;
  auto centre_out = [](int n) {
    std::vector<int> seq;
    seq.reserve(static_cast<std::size_t>(n));
    const int c = n / 2;
    seq.push_back(c);
    for (int k = c - 1; k >= 0; --k) seq.push_back(k);
    for (int k = c + 1; k < n; ++k) seq.push_back(k);
    return seq;
  };
  const auto line_order = centre_out(lines);
  const auto along = centre_out(length);
  std::vector<std::size_t> order;
  order.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int line : line_order) {
    for (int t : along) {
      const int x = rows_first ? t : line;
      const int y = rows_first ? line : t;
      order.push_back(static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x));
    }
  }
  return order;
}

UnwrappedPhaseMap correct_phase(const UnwrappedPhaseMap& phase, const UnwrapConfig& config) {
  config.validate();
  UnwrappedPhaseMap out = phase;
  const int width = phase.width();
  const int height = phase.height();
  const int r = config.correction_window / 2;
  Plane values = phase.values();
  for (std::size_t i : correction_order(width, height, config.orientation)) {
    if (!out.is_valid(i)) continue;
    const int x = static_cast<int>(i % static_cast<std::size_t>(width));
    const int y = static_cast<int>(i / static_cast<std::size_t>(width));
    double sum = 0.0;
    int count = 0;
    for (int v = std::max(0, y - r); v <= std::min(height - 1, y + r); ++v) {
      for (int u = std::max(0, x - r); u <= std::min(width - 1, x + r); ++u) {
        const std::size_t j = values.index(u, v);
        if (!out.is_valid(j)) continue;
        sum += values[j];
        ++count;
      }
    }
    const auto delta = static_cast<std::int64_t>(std::round(sum / count - values[i]));
    if (delta != 0) {
      out.set_period(i, out.period()[i] + delta);
      values[i] = out.value(i);
    }
  }
  return out;
}

}  // namespace fringe
