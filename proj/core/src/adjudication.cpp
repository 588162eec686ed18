#include "quakescore/adjudication.hpp"

#include <algorithm>
#include <sstream>

#include "quakescore/error.hpp"

namespace quakescore {

SegMask merge_conservative(const SegMask& a, const SegMask& b) {
  if (!dims_match(a, b)) {
    std::ostringstream msg;
    msg << "merge: dimension mismatch " << a.width() << "x" << a.height() << " vs "
        << b.width() << "x" << b.height();
    throw DimensionError(msg.str());
  }
  SegMask merged = a;
  for (std::size_t i = 0; i < merged.pixel_count(); ++i) {
    merged[i] = std::max(a[i], b[i]);
  }
  return merged;
}

IoUReport agreement_report(const SegMask& a, const SegMask& b) { return mean_iou(a, b); }

}  // namespace quakescore
