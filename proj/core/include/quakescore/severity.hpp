#pragma once

#include <cstddef>

#include "quakescore/types.hpp"

namespace quakescore {

// Damage score of one image together with the number of non-background
// pixels it was computed over (always at least one).
struct SeverityScore {
  double value = 0.0;
  std::size_t assessable_pixels = 0;
};

// normalize_depth(raw, floor) is declared in types.hpp:
//   v' = floor + (1 - floor) * (v - min) / (max - min)
// A uniform map (max == min) normalizes to all 1.0. Throws InputError when
// floor is outside (0, 1).

// Depth-weighted damage score:
//
//   (w * sum_DS d + sum_Debris d) / (sum_DS d + sum_Debris d + sum_US d)
//
// where w = cfg.ds_weight and d is the normalized depth of each pixel.
// Background pixels enter neither sum. Sums use compensated accumulation.
// Throws DimensionError on a size mismatch and DomainError
// ("no assessable pixels") when every pixel is background.
SeverityScore damage_score(const SegMask& mask, const NormalizedDepth& depth,
                           const ScoringConfig& cfg = {});

// damage_score(mask, normalize_depth(raw_depth, cfg.depth_floor), cfg).
SeverityScore score_image(const SegMask& mask, const DepthMap& raw_depth,
                          const ScoringConfig& cfg = {});

}  // namespace quakescore
