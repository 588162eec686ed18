#pragma once

#include "quakescore/metrics.hpp"
#include "quakescore/types.hpp"

namespace quakescore {

// Per-pixel maximum under Background < Undamaged < Damaged < Debris, so that
// any disagreement resolves to the more severe annotation.
SegMask merge_conservative(const SegMask& a, const SegMask& b);

// Inter-annotator agreement, expressed as mean_iou(a, b).
IoUReport agreement_report(const SegMask& a, const SegMask& b);

}  // namespace quakescore
