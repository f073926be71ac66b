#pragma once

#include <array>
#include <span>
#include <vector>

#include "laban/geometry.hpp"

namespace laban {

struct ConvexHull {
  std::vector<Vec3> vertices;                 // input points, by index
  std::vector<std::array<int, 3>> triangles;  // outward (counter-clockwise) faces
  bool degenerate = false;                    // fewer than four non-coplanar points
};

// 3D quickhull. Points closer than a scale-relative tolerance to a face
// plane are treated as on it.
ConvexHull quickhull(std::span<const Vec3> points);

// Signed-tetrahedron sum over the hull faces about the hull centroid.
double hull_volume(const ConvexHull& hull);

// Convex hull volume of the points; 0 for coplanar or degenerate input.
double convex_hull_volume(std::span<const Vec3> points);

}  // namespace laban
