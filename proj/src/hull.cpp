#include "laban/hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <unordered_map>

namespace laban {

namespace {

struct Face {
  std::array<int, 3> v{};
  Vec3 normal;
  double offset = 0.0;
  std::vector<int> outside;
  bool alive = true;
};

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

class HullBuilder {
 public:
  HullBuilder(std::span<const Vec3> points, double eps) : pts_(points), eps_(eps) {}

  double distance(const Face& f, int p) const { return dot(f.normal, pts_[p]) - f.offset; }

  int add_face(int a, int b, int c, const Vec3& fallback_normal) {
    Face f;
    f.v = {a, b, c};
    Vec3 n = cross(pts_[b] - pts_[a], pts_[c] - pts_[a]);
    const double len = norm(n);
    f.normal = len > 0.0 ? n / len : fallback_normal;
    f.offset = dot(f.normal, pts_[a]);
    const int id = static_cast<int>(faces_.size());
    faces_.push_back(std::move(f));
    edges_[edge_key(a, b)] = id;
    edges_[edge_key(b, c)] = id;
    edges_[edge_key(c, a)] = id;
    return id;
  }

  void kill_face(int id) {
    Face& f = faces_[id];
    f.alive = false;
    for (int k = 0; k < 3; ++k) {
      const auto it = edges_.find(edge_key(f.v[k], f.v[(k + 1) % 3]));
      if (it != edges_.end() && it->second == id) edges_.erase(it);
    }
  }

  // Assigns each point to the face it is farthest outside of, if any.
  void assign(const std::vector<int>& candidates, const std::vector<int>& face_ids) {
    for (int p : candidates) {
      int best = -1;
      double best_d = eps_;
      for (int id : face_ids) {
        const double d = distance(faces_[id], p);
        if (d > best_d) {
          best_d = d;
          best = id;
        }
      }
      if (best >= 0) faces_[best].outside.push_back(p);
    }
  }

  void build(std::array<int, 4> simplex) {
    Vec3 interior;
    for (int i : simplex) interior += pts_[i];
    interior = interior / 4.0;
    interior_ = interior;

    const std::array<std::array<int, 3>, 4> tets = {{{simplex[0], simplex[1], simplex[2]},
                                                     {simplex[0], simplex[3], simplex[1]},
                                                     {simplex[0], simplex[2], simplex[3]},
                                                     {simplex[1], simplex[3], simplex[2]}}};
    std::vector<int> ids;
    for (auto t : tets) {
      const Vec3 n = cross(pts_[t[1]] - pts_[t[0]], pts_[t[2]] - pts_[t[0]]);
      if (dot(n, interior - pts_[t[0]]) > 0.0) std::swap(t[1], t[2]);
      ids.push_back(add_face(t[0], t[1], t[2], Vec3{}));
    }
    std::vector<int> rest;
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i) {
      if (std::find(simplex.begin(), simplex.end(), i) == simplex.end()) rest.push_back(i);
    }
    assign(rest, ids);

    for (std::size_t scan = 0; scan < faces_.size(); ++scan) {
      if (!faces_[scan].alive || faces_[scan].outside.empty()) continue;
      add_point(static_cast<int>(scan));
    }
  }

  void add_point(int start) {
    const Face& seed = faces_[start];
    int eye = seed.outside.front();
    double far = distance(seed, eye);
    for (int p : seed.outside) {
      const double d = distance(seed, p);
      if (d > far) {
        far = d;
        eye = p;
      }
    }

    std::vector<int> visible{start};
    std::vector<char> marked(faces_.size(), 0);
    marked[start] = 1;
    std::vector<std::pair<int, int>> horizon;
    std::vector<Vec3> horizon_normals;
    for (std::size_t i = 0; i < visible.size(); ++i) {
      const Face f = faces_[visible[i]];
      for (int k = 0; k < 3; ++k) {
        const int a = f.v[k];
        const int b = f.v[(k + 1) % 3];
        const auto it = edges_.find(edge_key(b, a));
        const int nb = it == edges_.end() ? -1 : it->second;
        if (nb >= 0 && marked[nb]) continue;
        if (nb >= 0 && distance(faces_[nb], eye) > eps_) {
          marked[nb] = 1;
          visible.push_back(nb);
        } else {
          horizon.emplace_back(a, b);
          horizon_normals.push_back(f.normal);
        }
      }
    }
    // Horizon edges found from a face later marked visible are not horizon.
    std::vector<std::pair<int, int>> edges;
    std::vector<Vec3> normals;
    for (std::size_t i = 0; i < horizon.size(); ++i) {
      const auto it = edges_.find(edge_key(horizon[i].second, horizon[i].first));
      if (it != edges_.end() && marked[it->second]) continue;
      edges.push_back(horizon[i]);
      normals.push_back(horizon_normals[i]);
    }

    std::vector<int> orphans;
    for (int id : visible) {
      for (int p : faces_[id].outside) {
        if (p != eye) orphans.push_back(p);
      }
      faces_[id].outside.clear();
      kill_face(id);
    }
    std::vector<int> fresh;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      fresh.push_back(add_face(edges[i].first, edges[i].second, eye, normals[i]));
    }
    assign(orphans, fresh);
  }

  ConvexHull result() const {
    ConvexHull hull;
    hull.vertices.assign(pts_.begin(), pts_.end());
    for (const auto& f : faces_) {
      if (f.alive) hull.triangles.push_back(f.v);
    }
    return hull;
  }

 private:
  std::span<const Vec3> pts_;
  double eps_;
  Vec3 interior_;
  std::deque<Face> faces_;
  std::unordered_map<std::uint64_t, int> edges_;
};

}  // namespace

ConvexHull quickhull(std::span<const Vec3> points) {
  ConvexHull degenerate;
  degenerate.vertices.assign(points.begin(), points.end());
  degenerate.degenerate = true;
  if (points.size() < 4) return degenerate;

  double scale = 0.0;
  for (const auto& p : points) {
    scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) return degenerate;
  const double eps = 1e-12 * scale;
  const int n = static_cast<int>(points.size());

  // Extreme pair along the widest axis.
  int i0 = 0, i1 = 0;
  double widest = -1.0;
  for (int axis = 0; axis < 3; ++axis) {
    int lo = 0, hi = 0;
    for (int i = 1; i < n; ++i) {
      if (points[i][axis] < points[lo][axis]) lo = i;
      if (points[i][axis] > points[hi][axis]) hi = i;
    }
    const double extent = points[hi][axis] - points[lo][axis];
    if (extent > widest) {
      widest = extent;
      i0 = lo;
      i1 = hi;
    }
  }
  if (widest <= eps) return degenerate;

  const Vec3 axis = (points[i1] - points[i0]) / norm(points[i1] - points[i0]);
  int i2 = -1;
  double best = eps;
  for (int i = 0; i < n; ++i) {
    const double d = norm(cross(points[i] - points[i0], axis));
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (i2 < 0) return degenerate;

  Vec3 normal = cross(points[i1] - points[i0], points[i2] - points[i0]);
  normal = normal / norm(normal);
  int i3 = -1;
  best = eps;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(dot(points[i] - points[i0], normal));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (i3 < 0) return degenerate;

  HullBuilder builder(points, eps);
  builder.build({i0, i1, i2, i3});
  return builder.result();
}

double hull_volume(const ConvexHull& hull) {
  if (hull.degenerate || hull.triangles.empty()) return 0.0;
  std::vector<char> used(hull.vertices.size(), 0);
  for (const auto& t : hull.triangles) {
    for (int v : t) used[v] = 1;
  }
  Vec3 centroid;
  double count = 0.0;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (used[i]) {
      centroid += hull.vertices[i];
      count += 1.0;
    }
  }
  centroid = centroid / count;
  double six_volume = 0.0;
  for (const auto& t : hull.triangles) {
    const Vec3 a = hull.vertices[t[0]] - centroid;
    const Vec3 b = hull.vertices[t[1]] - centroid;
    const Vec3 c = hull.vertices[t[2]] - centroid;
    six_volume += dot(a, cross(b, c));
  }
  return std::max(0.0, six_volume / 6.0);
}

double convex_hull_volume(std::span<const Vec3> points) { return hull_volume(quickhull(points)); }

}  // namespace laban
