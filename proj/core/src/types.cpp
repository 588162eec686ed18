#include "quakescore/types.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "quakescore/error.hpp"

namespace quakescore {
namespace {

Size checked_size(std::size_t width, std::size_t height, std::size_t length,
                  const char* what) {
  if (width == 0 || height == 0) {
    throw InputError(std::string(what) + ": zero width or height");
  }
  if (length != width * height) {
    std::ostringstream msg;
    msg << what << ": " << length << " values for a " << width << "x" << height
        << " grid";
    throw InputError(msg.str());
  }
  return {width, height};
}

void check_xy(Size size, std::size_t x, std::size_t y) {
  if (x >= size.width || y >= size.height) {
    std::ostringstream msg;
    msg << "pixel (" << x << "," << y << ") outside " << size.width << "x"
        << size.height << " grid";
    throw std::out_of_range(msg.str());
  }
}

}  // namespace

std::string_view name(DamageClass c) noexcept {
  switch (c) {
    case DamageClass::Background: return "background";
    case DamageClass::Undamaged: return "undamaged";
    case DamageClass::Damaged: return "damaged";
    case DamageClass::Debris: return "debris";
  }
  return "invalid";
}

SegMask::SegMask(std::size_t width, std::size_t height, std::vector<DamageClass> classes)
    : size_(checked_size(width, height, classes.size(), "mask")),
      classes_(std::move(classes)) {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (code(classes_[i]) >= kNumClasses) {
      std::ostringstream msg;
      msg << "mask: invalid class code " << int(code(classes_[i])) << " at ("
          << i % width << "," << i / width << ")";
      throw InputError(msg.str());
    }
  }
}

SegMask::SegMask(std::size_t width, std::size_t height, DamageClass fill)
    : SegMask(width, height, std::vector<DamageClass>(width * height, fill)) {}

DamageClass SegMask::at(std::size_t x, std::size_t y) const {
  check_xy(size_, x, y);
  return classes_[y * size_.width + x];
}

void SegMask::set(std::size_t x, std::size_t y, DamageClass c) {
  check_xy(size_, x, y);
  classes_[y * size_.width + x] = c;
}

DepthMap::DepthMap(std::size_t width, std::size_t height, std::vector<double> values)
    : size_(checked_size(width, height, values.size(), "depth")),
      values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      std::ostringstream msg;
      msg << "depth: value " << values_[i] << " at (" << i % width << ","
          << i / width << ") is not a finite non-negative number";
      throw InputError(msg.str());
    }
  }
}

double DepthMap::at(std::size_t x, std::size_t y) const {
  check_xy(size_, x, y);
  return values_[y * size_.width + x];
}

NormalizedDepth NormalizedDepth::from_values(std::size_t width, std::size_t height,
                                             std::vector<double> values) {
  const Size size = checked_size(width, height, values.size(), "normalized depth");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0 && values[i] <= 1.0)) {
      std::ostringstream msg;
      msg << "normalized depth: value " << values[i] << " at (" << i % width
          << "," << i / width << ") outside (0, 1]";
      throw InputError(msg.str());
    }
  }
  return NormalizedDepth(size, std::move(values));
}

double NormalizedDepth::at(std::size_t x, std::size_t y) const {
  check_xy(size_, x, y);
  return values_[y * size_.width + x];
}

void ScoringConfig::validate() const {
  if (!(ds_weight > 0.0 && ds_weight < 1.0)) {
    throw InputError("ds_weight must lie in (0, 1), got " + std::to_string(ds_weight));
  }
  if (!(depth_floor > 0.0 && depth_floor < 1.0)) {
    throw InputError("depth_floor must lie in (0, 1), got " +
                     std::to_string(depth_floor));
  }
}

}  // namespace quakescore
