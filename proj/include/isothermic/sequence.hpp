#pragma once

#include <cstdint>

#include "isothermic/profile.hpp"

namespace isothermic {

// Audits skip this many leading terms; reported alongside every result.
inline constexpr std::uint64_t kHaltonOffset = 409;

inline double radical_inverse(std::uint64_t index, std::uint64_t base) noexcept {
  double inv = 1.0 / static_cast<double>(base);
  double scale = inv;
  double out = 0.0;
  while (index > 0) {
    out += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv;
  }
  return out;
}

// Two-dimensional Halton sequence (bases 2, 3) mapped into a rectangle.
class HaltonSequence {
 public:
  explicit HaltonSequence(ParamRect window, std::uint64_t offset = kHaltonOffset)
      : window_(window), index_(offset) {}

  ParamPoint next() noexcept {
    ++index_;
    return {window_.u1_min + window_.width() * radical_inverse(index_, 2),
            window_.u2_min + window_.height() * radical_inverse(index_, 3)};
  }

 private:
  ParamRect window_;
  std::uint64_t index_;
};

}  // namespace isothermic
