#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quakescore/types.hpp"

namespace quakescore {

// Ordinal image-level severity label.
enum class SeverityLabel : std::uint8_t { LittleToNo = 0, Mild = 1, Severe = 2 };

inline constexpr std::array<SeverityLabel, 3> kAllLabels = {
    SeverityLabel::LittleToNo, SeverityLabel::Mild, SeverityLabel::Severe};

// "little_to_no", "mild", "severe".
std::string_view name(SeverityLabel label) noexcept;
std::optional<SeverityLabel> parse_label(std::string_view text) noexcept;

// One manifest line. Paths are stored resolved against the manifest's
// directory; entries built in memory may use any paths.
struct ManifestEntry {
  std::string id;
  std::optional<std::filesystem::path> image;
  std::optional<std::filesystem::path> mask;
  std::optional<std::filesystem::path> pred_mask;
  std::optional<std::filesystem::path> depth;
  std::optional<SeverityLabel> label;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::filesystem::path base_dir;
  std::vector<ManifestEntry> entries;
  // Non-fatal findings, e.g. unknown fields.
  std::vector<std::string> warnings;
};

// Parses a JSON Lines manifest: one object per non-blank line with string
// fields id, image, mask, pred_mask, depth, label. Relative paths resolve
// against the manifest's directory; unknown fields produce a warning.
// Throws InputError citing the line number on malformed JSON, a missing or
// duplicate id, a non-string field, or an unknown label.
Manifest load_manifest(const std::filesystem::path& path);

// Writes entries as JSON Lines with paths made relative to the destination
// directory. Written via temp file and rename.
void write_manifest(std::span<const ManifestEntry> entries,
                    const std::filesystem::path& path);

// Every problem with the entry's files: missing mask, files that do not
// exist or do not decode, and mask/pred_mask/depth size disagreements.
// Empty means the entry is usable.
std::vector<std::string> validate_entry(const ManifestEntry& entry);

// SplitMix64 (Steele, Lea, Flood 2014). Fixed constants so that seeded
// permutations are reproducible across platforms and implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound) by rejection of the biased low zone.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::uint64_t state_;
};

// Fisher-Yates permutation of [0, n): for i = n-1 down to 1, swap i with
// below(i + 1).
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

struct DatasetSplit {
  std::vector<ManifestEntry> train;
  std::vector<ManifestEntry> val;
};

// Shuffles with seeded_permutation(); the first floor(n * ratio) shuffled
// entries (at least one) go to train, the rest to val. Throws InputError on
// an empty list or a ratio outside (0, 1].
DatasetSplit split_dataset(std::span<const ManifestEntry> entries, double train_ratio,
                           std::uint64_t seed);

// Number of training entries split_dataset() produces for n entries.
std::size_t train_count(std::size_t n, double train_ratio);

struct ClassHistogram {
  std::array<std::uint64_t, kNumClasses> counts{};

  std::uint64_t operator[](DamageClass c) const { return counts[index(c)]; }
  std::uint64_t total() const noexcept;
};

ClassHistogram class_histogram(std::span<const SegMask> masks);

struct GroupScore {
  double mean_score = 0.0;
  std::size_t n = 0;
};

struct EntryScore {
  std::string id;
  SeverityLabel label = SeverityLabel::LittleToNo;
  std::optional<double> score;  // nullopt when the entry was unassessable
  std::size_t assessable_pixels = 0;
};

struct BenchmarkReport {
  std::map<SeverityLabel, GroupScore> groups;
  // mean(little_to_no) < mean(mild) < mean(severe), strictly.
  bool ordering_ok = false;
  std::vector<EntryScore> entries;  // input order
  std::vector<std::string> warnings;
};

// Mean score_image() per label group, using pred_mask when present and mask
// otherwise. Unassessable entries are excluded from their group with a
// warning. Throws InputError when an entry lacks label/mask/depth, a file
// cannot be read, or any label group ends up empty.
BenchmarkReport benchmark_grouped_scores(std::span<const ManifestEntry> entries,
                                         const ScoringConfig& cfg = {},
                                         std::size_t jobs = 1);

}  // namespace quakescore
