#pragma once

// Test helpers and independent reference implementations.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "laban/forest.hpp"
#include "laban/geometry.hpp"
#include "laban/motion_io.hpp"

namespace testing {

using laban::Vec3;

inline std::shared_ptr<const laban::SkeletonSpec> canonical_skeleton() {
  static const auto sk = std::make_shared<const laban::SkeletonSpec>(laban::SkeletonSpec::canonical());
  return sk;
}

// Canonical 13-joint sequence with pos(t, role index) giving each position.
inline laban::JointSequence make_sequence(std::size_t T, double fps,
                                          const std::function<Vec3(std::size_t, std::size_t)>& pos,
                                          std::string label = "x", std::string group = "g") {
  const std::size_t J = laban::kRequiredRoles;
  std::vector<Vec3> p(T * J);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < J; ++j) p[t * J + j] = pos(t, j);
  }
  return laban::JointSequence(canonical_skeleton(), fps, std::move(p), std::move(label), std::move(group));
}

// A plausible standing pose, indexed by role.
inline std::array<Vec3, 13> standing_pose() {
  return {{{0.0, 1.65, 0.0},   {0.25, 0.85, 0.05}, {-0.25, 0.85, 0.05}, {0.18, 1.42, 0.0},   {-0.18, 1.42, 0.0},
           {0.0, 0.95, 0.0},   {0.0, 1.30, 0.0},   {0.10, 0.50, 0.03},  {-0.10, 0.50, 0.03}, {0.11, 0.08, 0.0},
           {-0.11, 0.08, 0.0}, {0.11, 0.02, 0.12}, {-0.11, 0.02, 0.12}}};
}

inline std::size_t ri(laban::Role r) { return static_cast<std::size_t>(r); }

// Rotation about an arbitrary axis (Rodrigues).
struct Rigid {
  std::array<double, 9> R{};
  Vec3 t;

  static Rigid random(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec3 axis{n(rng), n(rng), n(rng)};
    axis = axis * (1.0 / laban::norm(axis));
    const double a = std::uniform_real_distribution<double>(0.0, 6.283185307179586)(rng);
    const double c = std::cos(a), s = std::sin(a), C = 1 - c;
    const double x = axis.x, y = axis.y, z = axis.z;
    Rigid r;
    r.R = {c + x * x * C,     x * y * C - z * s, x * z * C + y * s, y * x * C + z * s, c + y * y * C,
           y * z * C - x * s, z * x * C - y * s, z * y * C + x * s, c + z * z * C};
    r.t = {n(rng) * 3.0, n(rng) * 3.0, n(rng) * 3.0};
    return r;
  }

  Vec3 operator()(const Vec3& p) const {
    return {R[0] * p.x + R[1] * p.y + R[2] * p.z + t.x, R[3] * p.x + R[4] * p.y + R[5] * p.z + t.y,
            R[6] * p.x + R[7] * p.y + R[8] * p.z + t.z};
  }
};

// ---- oracles ----

// Minimum pinball loss over every line through two sample points.
inline double pair_oracle_loss(std::span<const Vec3> pts, double tau, int up, int depth) {
  auto coord = [](const Vec3& p, int a) { return a == 0 ? p.x : (a == 1 ? p.y : p.z); };
  double best = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d0 = coord(pts[i], depth), d1 = coord(pts[j], depth);
      if (d0 == d1) continue;
      const double h0 = coord(pts[i], up), h1 = coord(pts[j], up);
      const double slope = (h1 - h0) / (d1 - d0);
      const double icpt = h0 - slope * d0;
      double loss = 0.0;
      for (const auto& p : pts) {
        const double r = coord(p, up) - (slope * coord(p, depth) + icpt);
        loss += r * (tau - (r < 0 ? 1.0 : 0.0));
      }
      best = std::min(best, loss);
    }
  }
  return best;
}

// Hull volume by exhaustive facet search: a triangle is a facet when every
// other point lies on one side of its plane. Valid for points in general position.
inline double brute_hull_volume(std::span<const Vec3> pts) {
  Vec3 c{0, 0, 0};
  for (const auto& p : pts) c += p;
  c = c * (1.0 / static_cast<double>(pts.size()));
  double vol = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const Vec3 nrm = laban::cross(pts[j] - pts[i], pts[k] - pts[i]);
        bool pos = false, neg = false;
        for (std::size_t m = 0; m < n && !(pos && neg); ++m) {
          if (m == i || m == j || m == k) continue;
          const double s = laban::dot(nrm, pts[m] - pts[i]);
          pos |= s > 0;
          neg |= s < 0;
        }
        if (pos && neg) continue;
        vol += std::abs(laban::dot(nrm, c - pts[i])) / 6.0;
      }
    }
  }
  return vol;
}

// Cover-weighted conditional expectation of one tree given the features in mask.
inline std::vector<double> cond_expect(const laban::Tree& tree, int node, std::span<const double> x,
                                       const std::vector<int>& used, unsigned mask, std::size_t C) {
  const auto& nd = tree.nodes[static_cast<std::size_t>(node)];
  if (nd.is_leaf()) {
    double s = 0.0;
    for (double v : nd.counts) s += v;
    std::vector<double> p(C);
    for (std::size_t c = 0; c < C; ++c) p[c] = nd.counts[c] / s;
    return p;
  }
  const auto pos = std::find(used.begin(), used.end(), nd.feature) - used.begin();
  if (mask & (1u << pos)) {
    return cond_expect(tree, x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right, x, used,
                       mask, C);
  }
  const auto& L = tree.nodes[static_cast<std::size_t>(nd.left)];
  const auto& R = tree.nodes[static_cast<std::size_t>(nd.right)];
  auto l = cond_expect(tree, nd.left, x, used, mask, C);
  auto r = cond_expect(tree, nd.right, x, used, mask, C);
  for (std::size_t c = 0; c < C; ++c) l[c] = (L.cover * l[c] + R.cover * r[c]) / (L.cover + R.cover);
  return l;
}

// Shapley values of the forest's probability output by full subset enumeration.
inline std::vector<std::vector<double>> shapley_oracle(const laban::ForestModel& model, std::span<const double> x) {
  std::vector<int> used;
  for (const auto& t : model.trees()) {
    for (const auto& nd : t.nodes) {
      if (!nd.is_leaf() && std::find(used.begin(), used.end(), nd.feature) == used.end()) used.push_back(nd.feature);
    }
  }
  const std::size_t M = used.size(), C = model.n_classes();
  std::vector<std::vector<double>> value(1u << M, std::vector<double>(C, 0.0));
  for (unsigned mask = 0; mask < (1u << M); ++mask) {
    for (const auto& t : model.trees()) {
      const auto e = cond_expect(t, 0, x, used, mask, C);
      for (std::size_t c = 0; c < C; ++c) value[mask][c] += e[c] / static_cast<double>(model.trees().size());
    }
  }
  std::vector<double> fact(M + 1, 1.0);
  for (std::size_t i = 1; i <= M; ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
  std::vector<std::vector<double>> phi(C, std::vector<double>(model.n_features(), 0.0));
  for (std::size_t i = 0; i < M; ++i) {
    for (unsigned mask = 0; mask < (1u << M); ++mask) {
      if (mask & (1u << i)) continue;
      const auto s = static_cast<std::size_t>(__builtin_popcount(mask));
      const double w = fact[s] * fact[M - s - 1] / fact[M];
      for (std::size_t c = 0; c < C; ++c) {
        phi[c][static_cast<std::size_t>(used[i])] += w * (value[mask | (1u << i)][c] - value[mask][c]);
      }
    }
  }
  return phi;
}

}  // namespace testing
