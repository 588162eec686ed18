#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "quakescore/types.hpp"

namespace quakescore {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

// Canonical overlay colors in class-code order: black, green, blue, red.
inline constexpr std::array<Rgb, kNumClasses> kClassColors = {
    Rgb{0, 0, 0}, Rgb{0, 255, 0}, Rgb{0, 0, 255}, Rgb{255, 0, 0}};

constexpr Rgb color_of(DamageClass c) noexcept { return kClassColors[index(c)]; }

// Reads an 8-bit mask PNG (palette and grayscale may also be packed at
// 1, 2 or 4 bits). Accepted layouts: palette (every used entry one
// of the canonical colors), RGB limited to the canonical colors, and
// grayscale limited to codes {0,1,2,3}. Throws InputError naming the file,
// and for out-of-set pixels the first offending (x,y) in row-major order.
SegMask load_mask(const std::filesystem::path& path);

// Writes the canonical 8-bit palette PNG with exactly four palette entries.
// Output bytes depend only on the mask. The file is written to a temporary
// sibling and renamed into place.
void save_mask(const SegMask& mask, const std::filesystem::path& path);

// Reads a 16-bit single-channel grayscale PNG; sample s becomes value s.
DepthMap load_depth(const std::filesystem::path& path);

// Writes a 16-bit grayscale PNG. Every value must be an integer in
// [0, 65535]; anything else throws InputError.
void save_depth(const DepthMap& depth, const std::filesystem::path& path);

}  // namespace quakescore
