#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "laban/geometry.hpp"

namespace laban {

struct DerivativeTrack {
  int order = 1;
  double dt = 0.0;
  std::vector<Vec3> values;  // units m / s^order, same length as the source

  std::vector<double> magnitudes() const;
};

// Repeated finite differencing. Interior frames use the five-point central
// stencil, frames next to the ends the three-point central stencil, and the
// two end frames one-sided differences. Output length equals input length.
// Each pass widens the band of end-affected frames by two.
DerivativeTrack derivative(std::span<const Vec3> track, int order, double dt);

// Single differencing pass; building block of derivative().
std::vector<Vec3> difference_pass(std::span<const Vec3> track, double dt);

struct WindowConfig {
  std::size_t w = 55;
  std::size_t stride = 1;
};

struct FrameRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  std::size_t size() const { return end - begin; }
  friend bool operator==(const FrameRange&, const FrameRange&) = default;
};

// Half-open windows [s, s + w) for s = 0, stride, ... while s + w <= T.
// Throws DataError when T < w or the config is invalid.
std::vector<FrameRange> windows(std::size_t frame_count, const WindowConfig& cfg);

std::size_t window_count(std::size_t frame_count, const WindowConfig& cfg);

}  // namespace laban
