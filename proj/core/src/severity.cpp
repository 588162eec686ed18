#include "quakescore/severity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quakescore/error.hpp"

namespace quakescore {
namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace

NormalizedDepth normalize_depth(const DepthMap& raw, double floor) {
  if (!(floor > 0.0 && floor < 1.0)) {
    throw InputError("depth floor must lie in (0, 1), got " + std::to_string(floor));
  }
  const auto in = raw.values();
  const auto [lo, hi] = std::minmax_element(in.begin(), in.end());
  const double min = *lo;
  const double range = *hi - *lo;

  std::vector<double> out(in.size(), 1.0);
  if (range > 0.0) {
    const double span = 1.0 - floor;
    for (std::size_t i = 0; i < in.size(); ++i) {
      const double t = (in[i] - min) / range;
      // The maximum maps to exactly 1.0 regardless of how floor + span rounds.
      out[i] = t >= 1.0 ? 1.0 : std::clamp(floor + span * t, floor, 1.0);
    }
  }
  return NormalizedDepth(raw.size(), std::move(out));
}

SeverityScore damage_score(const SegMask& mask, const NormalizedDepth& depth,
                           const ScoringConfig& cfg) {
  cfg.validate();
  if (!dims_match(mask, depth)) {
    std::ostringstream msg;
    msg << "damage_score: dimension mismatch mask " << mask.width() << "x"
        << mask.height() << " vs depth " << depth.width() << "x" << depth.height();
    throw DimensionError(msg.str());
  }

  // The denominator is accumulated over all structure pixels in one pass,
  // independently of the per-class sums, so that a single-class mask yields
  // class_sum / total == 1 exactly.
  CompensatedSum damaged, debris, total;
  std::size_t assessable = 0;
  const auto classes = mask.classes();
  const auto d = depth.values();
  for (std::size_t i = 0; i < classes.size(); ++i) {
    switch (classes[i]) {
      case DamageClass::Background:
        continue;
      case DamageClass::Damaged:
        damaged.add(d[i]);
        break;
      case DamageClass::Debris:
        debris.add(d[i]);
        break;
      case DamageClass::Undamaged:
        break;
    }
    total.add(d[i]);
    ++assessable;
  }
  if (assessable == 0) throw DomainError("no assessable pixels");

  const double denom = total.value();
  const double value = cfg.ds_weight * (damaged.value() / denom) + debris.value() / denom;
  return SeverityScore{std::clamp(value, 0.0, 1.0), assessable};
}

SeverityScore score_image(const SegMask& mask, const DepthMap& raw_depth,
                          const ScoringConfig& cfg) {
  cfg.validate();
  if (!dims_match(mask, raw_depth)) {
    std::ostringstream msg;
    msg << "score_image: dimension mismatch mask " << mask.width() << "x"
        << mask.height() << " vs depth " << raw_depth.width() << "x"
        << raw_depth.height();
    throw DimensionError(msg.str());
  }
  return damage_score(mask, normalize_depth(raw_depth, cfg.depth_floor), cfg);
}

}  // namespace quakescore
