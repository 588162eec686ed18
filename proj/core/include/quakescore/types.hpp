#pragma once

#include <array>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace quakescore {

// Pixel classes ordered by damage severity. The numeric code is both the
// on-disk index and the position in the severity order.
enum class DamageClass : std::uint8_t {
  Background = 0,
  Undamaged = 1,
  Damaged = 2,
  Debris = 3,
};

inline constexpr std::size_t kNumClasses = 4;

inline constexpr std::array<DamageClass, kNumClasses> kAllClasses = {
    DamageClass::Background, DamageClass::Undamaged, DamageClass::Damaged,
    DamageClass::Debris};

constexpr std::uint8_t code(DamageClass c) noexcept {
  return static_cast<std::uint8_t>(c);
}

constexpr std::size_t index(DamageClass c) noexcept {
  return static_cast<std::size_t>(c);
}

constexpr std::optional<DamageClass> damage_class_from_code(int value) noexcept {
  if (value < 0 || value >= static_cast<int>(kNumClasses)) return std::nullopt;
  return static_cast<DamageClass>(value);
}

// Lower-case identifier used in reports: background, undamaged, damaged, debris.
std::string_view name(DamageClass c) noexcept;

// The built-in comparisons on DamageClass compare codes, which is exactly
// the severity order Background < Undamaged < Damaged < Debris.

struct Size {
  std::size_t width = 0;
  std::size_t height = 0;

  constexpr std::size_t area() const noexcept { return width * height; }
  friend constexpr bool operator==(const Size&, const Size&) = default;
};

// Row-major grid of classes, origin top-left: pixel (x, y) lives at
// y * width + x.
class SegMask {
 public:
  // Throws InputError on zero dimensions or a size/length mismatch.
  SegMask(std::size_t width, std::size_t height, std::vector<DamageClass> classes);
  // Uniformly filled mask.
  SegMask(std::size_t width, std::size_t height, DamageClass fill);

  std::size_t width() const noexcept { return size_.width; }
  std::size_t height() const noexcept { return size_.height; }
  Size size() const noexcept { return size_; }
  std::size_t pixel_count() const noexcept { return classes_.size(); }

  DamageClass at(std::size_t x, std::size_t y) const;
  void set(std::size_t x, std::size_t y, DamageClass c);

  DamageClass operator[](std::size_t i) const noexcept { return classes_[i]; }
  DamageClass& operator[](std::size_t i) noexcept { return classes_[i]; }

  std::span<const DamageClass> classes() const noexcept { return classes_; }

  friend bool operator==(const SegMask&, const SegMask&) = default;

 private:
  Size size_;
  std::vector<DamageClass> classes_;
};

// Raw relative depth. Larger values are farther from the camera; only the
// relative order and spacing matter downstream.
class DepthMap {
 public:
  // Throws InputError on zero dimensions, a size/length mismatch, or any
  // value that is negative or not finite.
  DepthMap(std::size_t width, std::size_t height, std::vector<double> values);

  std::size_t width() const noexcept { return size_.width; }
  std::size_t height() const noexcept { return size_.height; }
  Size size() const noexcept { return size_; }

  double at(std::size_t x, std::size_t y) const;
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const DepthMap&, const DepthMap&) = default;

 private:
  Size size_;
  std::vector<double> values_;
};

class NormalizedDepth;

// Affine map of raw depth onto [floor, 1] (see severity.hpp).
NormalizedDepth normalize_depth(const DepthMap& raw, double floor = 0.1);

// Per-pixel depth weights in (0, 1]. Produced by normalize_depth(), whose
// output always lies in [floor, 1].
class NormalizedDepth {
 public:
  // Builds weights directly. Every value must lie in (0, 1].
  static NormalizedDepth from_values(std::size_t width, std::size_t height,
                                     std::vector<double> values);

  std::size_t width() const noexcept { return size_.width; }
  std::size_t height() const noexcept { return size_.height; }
  Size size() const noexcept { return size_; }

  double at(std::size_t x, std::size_t y) const;
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const NormalizedDepth&, const NormalizedDepth&) = default;

 private:
  NormalizedDepth(Size size, std::vector<double> values)
      : size_(size), values_(std::move(values)) {}

  friend NormalizedDepth normalize_depth(const DepthMap& raw, double floor);

  Size size_;
  std::vector<double> values_;
};

// Weight of a damaged-structure pixel relative to debris, and the lower end
// of the depth normalization range. Both must lie strictly inside (0, 1).
struct ScoringConfig {
  static constexpr double kDefaultDsWeight = 0.65;
  static constexpr double kDefaultDepthFloor = 0.1;

  double ds_weight = kDefaultDsWeight;
  double depth_floor = kDefaultDepthFloor;

  // Throws InputError when either field is outside (0, 1).
  void validate() const;
};

template <typename A, typename B>
  requires requires(const A& a, const B& b) {
    { a.size() } -> std::same_as<Size>;
    { b.size() } -> std::same_as<Size>;
  }
constexpr bool dims_match(const A& a, const B& b) noexcept {
  return a.size() == b.size();
}

}  // namespace quakescore
