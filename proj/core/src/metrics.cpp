#include "quakescore/metrics.hpp"

#include <sstream>

#include "quakescore/error.hpp"

namespace quakescore {
namespace {

void require_same_size(const SegMask& a, const SegMask& b, const char* what) {
  if (!dims_match(a, b)) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch " << a.width() << "x" << a.height() << " vs "
        << b.width() << "x" << b.height();
    throw DimensionError(msg.str());
  }
}

struct Overlap {
  std::size_t intersection = 0;
  std::size_t union_ = 0;
};

std::optional<double> ratio(const Overlap& o) {
  if (o.union_ == 0) return std::nullopt;
  return static_cast<double>(o.intersection) / static_cast<double>(o.union_);
}

}  // namespace

std::optional<double> class_iou(const SegMask& gt, const SegMask& pred, DamageClass cls) {
  require_same_size(gt, pred, "class_iou");
  Overlap o;
  const auto g = gt.classes();
  const auto p = pred.classes();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool in_gt = g[i] == cls;
    const bool in_pred = p[i] == cls;
    o.intersection += in_gt && in_pred;
    o.union_ += in_gt || in_pred;
  }
  return ratio(o);
}

IoUReport mean_iou(const SegMask& gt, const SegMask& pred) {
  require_same_size(gt, pred, "mean_iou");

  // One pass: the intersection for class c is the diagonal of the
  // confusion counts, the union is gt_c + pred_c - intersection.
  std::array<std::size_t, kNumClasses> gt_count{}, pred_count{}, both{};
  const auto g = gt.classes();
  const auto p = pred.classes();
  for (std::size_t i = 0; i < g.size(); ++i) {
    ++gt_count[index(g[i])];
    ++pred_count[index(p[i])];
    if (g[i] == p[i]) ++both[index(g[i])];
  }

  IoUReport report;
  double sum = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const Overlap o{both[c], gt_count[c] + pred_count[c] - both[c]};
    report.per_class[c] = ratio(o);
    if (report.per_class[c]) {
      sum += *report.per_class[c];
      ++report.included_count;
    }
  }
  // Every pixel carries some class, so at least one union is non-empty.
  report.mean = sum / static_cast<double>(report.included_count);
  return report;
}

double dataset_mean_iou(std::span<const MaskPair> pairs) {
  if (pairs.empty()) throw InputError("dataset_mean_iou: empty list of mask pairs");
  double sum = 0.0;
  for (const auto& [gt, pred] : pairs) sum += mean_iou(gt, pred).mean;
  return sum / static_cast<double>(pairs.size());
}

}  // namespace quakescore
