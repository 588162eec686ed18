#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>

#include "quakescore/types.hpp"

namespace quakescore {

// Per-class IoU plus the mean over classes present in either mask.
struct IoUReport {
  // Indexed by class code; nullopt when the class occurs in neither mask.
  std::array<std::optional<double>, kNumClasses> per_class{};
  std::size_t included_count = 0;
  double mean = 0.0;

  std::optional<double> iou(DamageClass c) const { return per_class[index(c)]; }
};

// |gt ∩ pred| / |gt ∪ pred| for one class, or nullopt when the union is
// empty. Throws DimensionError on a size mismatch.
std::optional<double> class_iou(const SegMask& gt, const SegMask& pred, DamageClass cls);

// IoU for all four classes, averaged over the non-absent ones.
IoUReport mean_iou(const SegMask& gt, const SegMask& pred);

using MaskPair = std::pair<SegMask, SegMask>;

// Macro average: unweighted mean of per-image mean_iou(). Throws InputError
// on an empty list and DimensionError on any mismatched pair.
double dataset_mean_iou(std::span<const MaskPair> pairs);

}  // namespace quakescore
