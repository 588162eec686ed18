#include "quakescore/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "quakescore/codec.hpp"
#include "quakescore/error.hpp"
#include "quakescore/parallel.hpp"
#include "quakescore/severity.hpp"

namespace quakescore {

std::uint64_t SplitMix64::below(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  // 2^64 mod bound; values below it would bias the modulo.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

std::size_t train_count(std::size_t n, double train_ratio) {
  if (!(train_ratio > 0.0 && train_ratio <= 1.0)) {
    throw InputError("train ratio must lie in (0, 1], got " + std::to_string(train_ratio));
  }
  // The epsilon keeps products such as 100 * 0.29 = 28.999999999999996 from
  // flooring one short of the intended count.
  const auto k = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * train_ratio + 1e-9));
  return std::clamp<std::size_t>(k, 1, n);
}

DatasetSplit split_dataset(std::span<const ManifestEntry> entries, double train_ratio,
                           std::uint64_t seed) {
  if (entries.empty()) throw InputError("split: empty entry list");
  const std::size_t k = train_count(entries.size(), train_ratio);
  const auto order = seeded_permutation(entries.size(), seed);

  DatasetSplit split;
  split.train.reserve(k);
  split.val.reserve(entries.size() - k);
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < k ? split.train : split.val).push_back(entries[order[i]]);
  }
  return split;
}

std::uint64_t ClassHistogram::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

ClassHistogram class_histogram(std::span<const SegMask> masks) {
  ClassHistogram hist;
  for (const SegMask& mask : masks) {
    for (DamageClass c : mask.classes()) ++hist.counts[index(c)];
  }
  return hist;
}

BenchmarkReport benchmark_grouped_scores(std::span<const ManifestEntry> entries,
                                         const ScoringConfig& cfg, std::size_t jobs) {
  cfg.validate();
  for (const ManifestEntry& e : entries) {
    if (!e.label) throw InputError("benchmark: entry '" + e.id + "' has no label");
    if (!e.mask && !e.pred_mask) throw InputError("benchmark: entry '" + e.id + "' has no mask");
    if (!e.depth) throw InputError("benchmark: entry '" + e.id + "' has no depth");
  }

  BenchmarkReport report;
  report.entries.resize(entries.size());
  std::vector<std::string> unassessable(entries.size());

  parallel_for(entries.size(), jobs, [&](std::size_t i) {
    const ManifestEntry& e = entries[i];
    EntryScore& out = report.entries[i];
    out.id = e.id;
    out.label = *e.label;
    const SegMask mask = load_mask(e.pred_mask ? *e.pred_mask : *e.mask);
    const DepthMap depth = load_depth(*e.depth);
    try {
      const SeverityScore s = score_image(mask, depth, cfg);
      out.score = s.value;
      out.assessable_pixels = s.assessable_pixels;
    } catch (const DomainError& err) {
      unassessable[i] = err.what();
    }
  });

  // Group means are accumulated in entry order so the result does not
  // depend on worker scheduling.
  std::map<SeverityLabel, double> sums;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const EntryScore& s = report.entries[i];
    if (!s.score) {
      report.warnings.push_back("entry '" + s.id + "' excluded: " + unassessable[i]);
      continue;
    }
    sums[s.label] += *s.score;
    ++report.groups[s.label].n;
  }
  for (SeverityLabel label : kAllLabels) {
    const auto it = report.groups.find(label);
    if (it == report.groups.end() || it->second.n == 0) {
      throw InputError("benchmark: label group '" + std::string(name(label)) +
                       "' has no assessable entries");
    }
    it->second.mean_score = sums[label] / static_cast<double>(it->second.n);
  }

  const auto mean = [&](SeverityLabel l) { return report.groups.at(l).mean_score; };
  report.ordering_ok = mean(SeverityLabel::LittleToNo) < mean(SeverityLabel::Mild) &&
                       mean(SeverityLabel::Mild) < mean(SeverityLabel::Severe);
  return report;
}

}  // namespace quakescore
