#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "laban/geometry.hpp"
#include "laban/motion_io.hpp"

namespace laban {

struct PointCloud {
  std::vector<Vec3> points;
};

// Floor line h = slope * d + intercept in the (depth_axis, up_axis) plane.
struct FloorPlane {
  double slope = 0.0;
  double intercept = 0.0;
  int up_axis = 1;
  int depth_axis = 2;
  double tau = 0.05;
  double pinball_loss = 0.0;

  // Throws DataError when axes or tau are out of range.
  void validate() const;

  // y = 0 floor with Y up, used when no point cloud is available.
  static FloorPlane flat();
};

inline constexpr double kDefaultFloorTau = 0.05;

// Quantile check loss rho_tau(r) = r * (tau - 1[r < 0]).
inline double pinball(double r, double tau) { return r * (tau - (r < 0.0 ? 1.0 : 0.0)); }

// Total pinball loss of the line over the projected cloud.
double pinball_loss(std::span<const Vec3> points, double slope, double intercept, double tau,
                    int up_axis, int depth_axis);

// Exact linear quantile regression of up_axis on depth_axis.
FloorPlane fit_floor(const PointCloud& cloud, double tau = kDefaultFloorTau, int up_axis = 1,
                     int depth_axis = 2);

double height_above_floor(const Vec3& p, const FloorPlane& plane);

// 95th percentile over frames of the head height above the floor.
double body_height(const JointSequence& seq, const FloorPlane& plane);

// Linear-interpolation percentile, q in [0, 1].
double percentile(std::vector<double> values, double q);

// Whitespace or comma separated "x y z" lines; '#' starts a comment.
PointCloud read_point_cloud(std::istream& in);
PointCloud load_point_cloud(const std::filesystem::path& path);

void save_floor(const std::filesystem::path& path, const FloorPlane& plane);
FloorPlane load_floor(const std::filesystem::path& path);

}  // namespace laban
