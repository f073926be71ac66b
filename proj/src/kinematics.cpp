#include "laban/kinematics.hpp"

#include <string>

#include "laban/errors.hpp"

namespace laban {

std::vector<double> DerivativeTrack::magnitudes() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = norm(values[i]);
  return out;
}

std::vector<Vec3> difference_pass(std::span<const Vec3> x, double dt) {
  const std::size_t n = x.size();
  std::vector<Vec3> out(n);
  if (n < 2) throw DataError("differencing needs at least 2 frames");
  out[0] = (x[1] - x[0]) / dt;
  out[n - 1] = (x[n - 1] - x[n - 2]) / dt;
  for (std::size_t t = 1; t + 1 < n; ++t) {
    if (t >= 2 && t + 2 < n) {
      out[t] = ((x[t - 2] - x[t + 2]) + 8.0 * (x[t + 1] - x[t - 1])) / (12.0 * dt);
    } else {
      out[t] = (x[t + 1] - x[t - 1]) / (2.0 * dt);
    }
  }
  return out;
}

DerivativeTrack derivative(std::span<const Vec3> track, int order, double dt) {
  if (order < 1 || order > 3) throw DataError("derivative order must be 1, 2 or 3");
  if (!(dt > 0.0)) throw DataError("dt must be > 0");
  if (track.size() < static_cast<std::size_t>(order) + 1) {
    throw DataError("track of " + std::to_string(track.size()) + " frames is too short for order " +
                    std::to_string(order));
  }
  DerivativeTrack d{order, dt, difference_pass(track, dt)};
  for (int k = 1; k < order; ++k) d.values = difference_pass(d.values, dt);
  return d;
}

std::size_t window_count(std::size_t frame_count, const WindowConfig& cfg) {
  if (cfg.w < 2) throw DataError("window length must be >= 2");
  if (cfg.stride < 1) throw DataError("window stride must be >= 1");
  if (frame_count < cfg.w) {
    throw DataError("sequence too short: " + std::to_string(frame_count) + " frames < window " +
                    std::to_string(cfg.w));
  }
  return (frame_count - cfg.w) / cfg.stride + 1;
}

std::vector<FrameRange> windows(std::size_t frame_count, const WindowConfig& cfg) {
  const std::size_t n = window_count(frame_count, cfg);
  std::vector<FrameRange> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({i * cfg.stride, i * cfg.stride + cfg.w});
  return out;
}

}  // namespace laban
