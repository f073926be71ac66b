#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "laban/errors.hpp"
#include "laban/features.hpp"
#include "laban/kinematics.hpp"
#include "support.hpp"

using namespace laban;
using testing::make_sequence;
using testing::ri;

namespace {

LmaConfig config(std::size_t w, std::size_t stride = 1, std::vector<Role> selected = {}) {
  LmaConfig c;
  c.window = {w, stride};
  if (!selected.empty()) c.selected = std::move(selected);
  return c;
}

// Standing pose with one role following f(t seconds).
JointSequence moving(std::size_t T, Role role, const std::function<Vec3(double)>& f, double fps = 60.0) {
  const auto pose = testing::standing_pose();
  return make_sequence(T, fps, [&](std::size_t t, std::size_t j) {
    return j == ri(role) ? f(static_cast<double>(t) / fps) : pose[j];
  });
}

// Smooth, non-degenerate whole-body motion.
JointSequence wiggle(std::size_t T, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(0.05, 0.3), freq(0.3, 2.0), ph(0.0, 6.28);
  std::array<std::array<double, 9>, 13> p{};
  for (auto& row : p) {
    for (std::size_t k = 0; k < 3; ++k) row[k] = amp(rng), row[3 + k] = freq(rng), row[6 + k] = ph(rng);
  }
  const auto pose = testing::standing_pose();
  return make_sequence(T, 60.0, [&](std::size_t t, std::size_t j) {
    const double s = static_cast<double>(t) / 60.0;
    Vec3 d;
    for (std::size_t k = 0; k < 3; ++k) d[k] = p[j][k] * std::sin(6.283185307 * p[j][3 + k] * s + p[j][6 + k]);
    return pose[j] + d + Vec3{0.4 * s, 0.0, 0.1 * s * s};
  });
}

std::vector<std::array<double, kFeatureCount>> values(const std::vector<WindowFeatures>& rows) {
  std::vector<std::array<double, kFeatureCount>> out;
  for (const auto& r : rows) out.push_back(r.values);
  return out;
}

bool translation_sensitive(std::size_t slot) { return slot >= slot::pelvis_height && slot < slot::pelvis_height + 3; }

}  // namespace

TEST_SUITE("lma") {
  TEST_CASE("layout has 55 unique names in family order") {
    std::set<std::string_view> names(kFeatureNames.begin(), kFeatureNames.end());
    CHECK(names.size() == 55);
    CHECK(kFeatureNames[slot::effort_space].starts_with("effort_space"));
    CHECK(kFeatureNames[slot::shape].starts_with("shape_volume"));
    CHECK(kFeatureNames[slot::pelvis_height + 2] == "space_pelvis_height_max");
    std::size_t body = 0, effort = 0, shape = 0, space = 0;
    for (auto n : kFeatureNames) {
      body += n.starts_with("body_");
      effort += n.starts_with("effort_");
      shape += n.starts_with("shape_");
      space += n.starts_with("space_");
    }
    CHECK(body == 18);
    CHECK(effort == 16);
    CHECK(shape == 4);
    CHECK(space == 17);
    CHECK(inner_window(55) == 11);
    CHECK(inner_window(5) == 2);
  }

  TEST_CASE("initiation: stationary and constant speed") {
    const auto cfg = config(10);
    const auto still = moving(100, Role::left_hand, [](double) { return Vec3{0.2, 1.0, 0.0}; });
    for (double r : initiation_rate(still, Role::left_hand, cfg)) CHECK(r == 0.0);
    const auto line = moving(100, Role::left_hand, [](double t) { return Vec3{0.7 * t, 1.0, 0.0}; });
    const auto rates = initiation_rate(line, Role::left_hand, cfg);
    // Windows whose frames all have a defined look-ahead.
    for (std::size_t k = 0; k + 10 + 10 <= 100; ++k) CHECK(rates[k] == 1.0);
  }

  TEST_CASE("initiation: single step enters the look-ahead") {
    const std::size_t T = 200, w = 10;
    const double fps = 60.0;
    const auto step = moving(T, Role::right_foot, [](double t) { return Vec3{t * 60.0 >= 89.5 ? 0.5 : 0.0, 0.02, 0.1}; });
    // Independent evaluation of the predicate.
    const auto x = step.track(Role::right_foot);
    const auto speed = derivative(x, 1, 1.0 / fps).magnitudes();
    double mean = 0.0, var = 0.0;
    for (double s : speed) mean += s / static_cast<double>(T);
    for (double s : speed) var += (s - mean) * (s - mean) / static_cast<double>(T);
    const double tau = std::sqrt(var);
    std::vector<int> hit(T, 0);
    for (std::size_t t = 0; t + w < T; ++t) hit[t] = distance(x[t + w], x[t]) * fps / static_cast<double>(w) > tau;
    for (std::size_t t = 0; t + w < T; ++t) CHECK(hit[t] == (t + w >= 90 && t < 90));

    const auto rates = initiation_rate(step, Role::right_foot, config(w));
    for (std::size_t k = 0; k < rates.size(); ++k) {
      std::size_t defined = 0, hits = 0;
      for (std::size_t t = k; t < k + w && t + w < T; ++t) ++defined, hits += static_cast<std::size_t>(hit[t]);
      CHECK(rates[k] == doctest::Approx(defined ? double(hits) / double(defined) : 0.0));
    }
  }

  TEST_CASE("effort space: straight line, loop and zigzag") {
    const auto cfg = config(20);
    const auto line = moving(80, Role::head, [](double t) { return Vec3{0.5 * t, 1.6, 0.2 * t}; });
    for (double r : effort_space_joint(line, Role::head, cfg)) CHECK(std::abs(r - 1.0) <= 1e-9);

    // Full circle per 20-frame window: the net chord is tiny, so the guard applies.
    const double R = 0.3;
    const auto loop = moving(80, Role::head, [&](double t) {
      const double a = 2 * std::numbers::pi * t * 60.0 / 16.0;
      return Vec3{R * std::cos(a), 1.6 + R * std::sin(a), 0};
    });
    // inner window 4 frames: chords at 90 degree steps around the circle.
    const double chord = R * std::sqrt(2.0);
    const auto ratios = effort_space_joint(loop, Role::head, cfg);
    for (double r : ratios) {
      CHECK(std::isfinite(r));
      CHECK(r == doctest::Approx(4 * chord / 1e-3).epsilon(1e-6));
    }

    // Zigzag through (0,0) (1,1) (2,0) (3,1) (4,0) sampled every inner window.
    const std::vector<Vec3> knots = {{0, 0, 0}, {1, 1, 0}, {2, 0, 0}, {3, 1, 0}, {4, 0, 0}};
    const auto zig = moving(20, Role::head, [&](double t) {
      const double u = t * 60.0 / 4.0;
      const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(u), 3);
      return knots[i] + (knots[i + 1] - knots[i]) * (u - static_cast<double>(i));
    });
    const auto z = effort_space_joint(zig, Role::head, config(20));
    REQUIRE(z.size() == 1);
    CHECK(z[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    const auto still = moving(40, Role::head, [](double) { return Vec3{0, 1.6, 0}; });
    for (double r : effort_space_joint(still, Role::head, cfg)) CHECK(r == 0.0);
    CHECK_THROWS_AS(effort_space_joint(line, Role::head, config(3)), DataError);
  }

  TEST_CASE("effort space total is the alpha-weighted sum") {
    const auto line = make_sequence(60, 60.0, [](std::size_t t, std::size_t j) {
      return Vec3{0.01 * double(t) * double(j + 1), 0.5 * double(j), 0.003 * double(t)};
    });
    auto cfg = config(20);
    double alpha_sum = 0.0;
    for (Role r : cfg.selected) alpha_sum += line.skeleton().weight(r);
    for (double v : effort_space_total(line, cfg)) CHECK(v == doctest::Approx(alpha_sum).epsilon(1e-9));

    const auto one = effort_space_total(line, config(20, 1, {Role::left_hand}));
    const auto joint = effort_space_joint(line, Role::left_hand, config(20));
    for (std::size_t k = 0; k < one.size(); ++k) CHECK(one[k] == doctest::Approx(joint[k]).epsilon(1e-15));

    // Two joints with alphas (1.0, 0.5) and ratios (1.0, 3.0): a straight hand
    // and a pelvis that zigzags with three times its net displacement.
    const auto pose = testing::standing_pose();
    const auto mixed = make_sequence(9, 60.0, [&](std::size_t t, std::size_t j) {
      if (j == ri(Role::left_hand)) return pose[j] + Vec3{0.1 * double(t), 0, 0};
      if (j == ri(Role::pelvis)) {
        // Chords of 0.75 m per inner window (2 frames), net 1.0 m over 8 frames.
        const double h = std::sqrt(0.75 * 0.75 - 0.25 * 0.25);
        const std::vector<Vec3> k = {{0, 0, 0}, {0.25, h, 0}, {0.5, 0, 0}, {0.75, h, 0}, {1.0, 0, 0}};
        const std::size_t i = t / 2;
        const Vec3 a = k[std::min<std::size_t>(i, 4)], b = k[std::min<std::size_t>(i + 1, 4)];
        return pose[j] + a + (b - a) * (double(t % 2) / 2.0);
      }
      return pose[j];
    });
    const auto total = effort_space_total(mixed, config(9, 1, {Role::left_hand, Role::pelvis}));
    REQUIRE(total.size() == 1);
    CHECK(total[0] == doctest::Approx(2.5).epsilon(1e-9));
  }

  TEST_CASE("effort weight and time") {
    const auto still = moving(30, Role::left_hand, [](double) { return Vec3{0, 1, 0}; });
    for (const auto& m : effort_weight(still, config(10))) CHECK((m.mean == 0.0 && m.max == 0.0));

    const auto run = moving(60, Role::left_hand, [](double t) { return Vec3{1.2 * t, 1.0, 1.6 * t}; });
    for (const auto& m : effort_weight(run, config(10, 1, {Role::left_hand}))) {
      CHECK(m.mean == doctest::Approx(2.0).epsilon(1e-9));
      CHECK(m.max == doctest::Approx(2.0).epsilon(1e-9));
    }
    for (const auto& m : effort_time(run, config(10, 1, {Role::left_hand}))) CHECK(std::abs(m.mean) <= 1e-9);

    // Constant acceleration magnitude 2 m/s^2; windows away from the ends.
    const auto acc = moving(60, Role::left_hand, [](double t) { return Vec3{0.6 * t * t, 1.0, 0.8 * t * t}; });
    const auto times = effort_time(acc, config(10, 1, {Role::left_hand}));
    for (std::size_t k = 3; k + 10 + 3 <= 60; ++k) CHECK(times[k].mean == doctest::Approx(2.0).epsilon(1e-6));

    // Doubling every alpha doubles effort time.
    const auto wig = wiggle(80, 4);
    auto names = wig.skeleton().joint_names();
    auto weights = wig.skeleton().joint_weights();
    for (double& a : weights) a *= 2.0;
    auto doubled_sk = std::make_shared<const SkeletonSpec>(names, wig.skeleton().role_map(), weights);
    const JointSequence doubled(doubled_sk, 60.0, wig.positions(), "x", "g");
    const auto t1 = effort_time(wig, config(20)), t2 = effort_time(doubled, config(20));
    for (std::size_t k = 0; k < t1.size(); ++k) CHECK(t2[k].mean == doctest::Approx(2 * t1[k].mean).epsilon(1e-12));
  }

  TEST_CASE("effort flow") {
    const auto acc = moving(60, Role::head, [](double t) { return Vec3{t * t, 1.6, 0}; });
    // Each differencing pass moves the end error two frames inward; jerk is exact from frame 5.
    const auto flat = effort_flow(acc, config(10, 1, {Role::head}));
    for (std::size_t k = 5; k + 10 + 5 <= 60; ++k) {
      for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(flat[k][i]) <= 1e-6);
    }
    // Jerk magnitude of sin(wt) is w^3 |cos(wt)|; compare window means.
    const double w = 2 * std::numbers::pi;
    const auto s = moving(300, Role::right_hand, [&](double t) { return Vec3{std::sin(w * t), 0.8, 0}; });
    const std::size_t win = 55;
    const auto flow = effort_flow(s, config(win, 5, {Role::right_hand}));
    for (std::size_t k = 1; k + 1 < flow.size(); ++k) {
      double analytic = 0.0;
      for (std::size_t t = k * 5; t < k * 5 + win; ++t) analytic += w * w * w * std::abs(std::cos(w * double(t) / 60.0));
      analytic /= double(win);
      CHECK(flow[k][2] == doctest::Approx(analytic).epsilon(0.05));
      CHECK(flow[k][5] == doctest::Approx(analytic).epsilon(0.05));
    }
  }

  TEST_CASE("body distances and angles") {
    auto pose = testing::standing_pose();
    pose[ri(Role::left_hand)] = {0.8, 1.42, 0};
    pose[ri(Role::right_hand)] = {-0.8, 1.42, 0};
    // Straight left leg, right knee at 90 degrees.
    pose[ri(Role::pelvis)] = {0.0, 0.95, 0};
    pose[ri(Role::left_knee)] = {0.0, 0.5, 0};
    pose[ri(Role::left_ankle)] = {0.0, 0.08, 0};
    pose[ri(Role::right_knee)] = {-0.1, 0.5, 0};
    pose[ri(Role::right_ankle)] = {-0.1, 0.5, 0.4};
    pose[ri(Role::pelvis)] = {-0.1, 0.95, 0};
    const auto seq = make_sequence(12, 60.0, [&](std::size_t, std::size_t j) { return pose[j]; });
    const auto b = body_distances_angles(seq, config(5));
    CHECK(b[0][0] == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(b[0][11] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-9));
    // T-pose arms are straight through the elbow proxy.
    CHECK(b[0][8] == doctest::Approx(std::numbers::pi).epsilon(1e-9));

    auto straight = testing::standing_pose();
    straight[ri(Role::pelvis)] = {0.1, 0.95, 0.0};
    straight[ri(Role::left_knee)] = {0.1, 0.5, 0.0};
    straight[ri(Role::left_ankle)] = {0.1, 0.08, 0.0};
    const auto leg = make_sequence(12, 60.0, [&](std::size_t, std::size_t j) { return straight[j]; });
    CHECK(std::abs(body_distances_angles(leg, config(5))[0][10] - std::numbers::pi) <= 1e-9);
  }

  TEST_CASE("elbow joints are used when present") {
    auto names = SkeletonSpec::canonical().joint_names();
    names.push_back("lelbow");
    names.push_back("relbow");
    auto roles = SkeletonSpec::canonical().role_map();
    roles[ri(Role::left_elbow)] = 13;
    roles[ri(Role::right_elbow)] = 14;
    auto sk = std::make_shared<const SkeletonSpec>(names, roles, SkeletonSpec::default_weights(names, roles));
    auto pose = testing::standing_pose();
    std::vector<Vec3> frame(pose.begin(), pose.end());
    frame[ri(Role::left_shoulder)] = {0.2, 1.4, 0};
    frame[ri(Role::left_hand)] = {0.2, 1.4, 0.6};
    frame.push_back({0.2, 1.1, 0});  // elbow below the shoulder: 90 degrees
    frame.push_back({-0.3, 1.1, 0});
    std::vector<Vec3> pos;
    for (int t = 0; t < 8; ++t) pos.insert(pos.end(), frame.begin(), frame.end());
    const JointSequence seq(sk, 60.0, pos, "x", "g");
    const double expect = angle_at(frame[ri(Role::left_shoulder)], frame[13], frame[ri(Role::left_hand)]);
    CHECK(body_distances_angles(seq, config(4))[0][8] == doctest::Approx(expect).epsilon(1e-12));
  }

  TEST_CASE("shape volume of tetrahedron and cube frames") {
    const std::vector<Vec3> tet = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const auto a = make_sequence(10, 60.0, [&](std::size_t, std::size_t j) { return tet[j % 4]; });
    for (const auto& v : shape_volume(a, config(5))) {
      CHECK(v[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
      CHECK(v[1] == 0.0);
    }
    const auto b = make_sequence(10, 60.0, [&](std::size_t, std::size_t j) {
      const std::size_t i = j % 8;
      return Vec3{double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)};
    });
    for (const auto& v : shape_volume(b, config(5))) {
      CHECK(v[2] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(v[3] == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("spatial dispersion") {
    const Vec3 torso{0, 1.3, 0};
    const std::set<std::size_t> upper = {ri(Role::head), ri(Role::left_hand), ri(Role::right_hand),
                                         ri(Role::left_shoulder), ri(Role::right_shoulder)};
    const auto fixed = make_sequence(20, 60.0, [&](std::size_t, std::size_t j) {
      if (j == ri(Role::torso)) return torso;
      if (upper.count(j)) return torso + Vec3{0.5 * std::cos(double(j)), 0.5 * std::sin(double(j)), 0};
      return testing::standing_pose()[j];
    });
    for (const auto& d : spatial_dispersion(fixed, config(10))) {
      CHECK(d[0] == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(std::abs(d[1]) <= 1e-12);
    }
    // Reach grows linearly from 0.3 to 0.7 m over one 21-frame window.
    const auto ramp = make_sequence(21, 60.0, [&](std::size_t t, std::size_t j) {
      if (j == ri(Role::torso)) return torso;
      if (upper.count(j)) return torso + Vec3{0, 0, 0.3 + 0.4 * double(t) / 20.0};
      return testing::standing_pose()[j];
    });
    CHECK(spatial_dispersion(ramp, config(21))[0][0] == doctest::Approx(0.5).epsilon(1e-6));
  }

  TEST_CASE("space trajectory") {
    const auto line = moving(60, Role::pelvis, [](double t) { return Vec3{t, 0.9, 0}; });
    const auto f = space_trajectory(line, FloorPlane::flat(), config(60));
    REQUIRE(f.size() == 1);
    CHECK(f[0][0] == doctest::Approx(59.0 / 60.0).epsilon(1e-12));
    CHECK(f[0][1] == doctest::Approx(59.0 / 60.0).epsilon(1e-12));
    CHECK(f[0][2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(f[0][3]) <= 1e-6);

    const double R = 0.5, omega = std::numbers::pi;  // one revolution per 2 s
    const auto circle = moving(240, Role::pelvis, [&](double t) {
      return Vec3{R * std::cos(omega * t), 0.9, R * std::sin(omega * t)};
    });
    const auto circ = space_trajectory(circle, FloorPlane::flat(), config(55, 20));
    for (std::size_t k = 1; k + 1 < circ.size(); ++k) CHECK(circ[k][3] == doctest::Approx(1.0 / R).epsilon(0.02));

    const auto still = moving(30, Role::pelvis, [](double) { return Vec3{0.3, 0.9, 2.0}; });
    for (const auto& s : space_trajectory(still, FloorPlane::flat(), config(10))) {
      CHECK(s[0] == 0.0);
      CHECK(s[2] == 0.0);
      CHECK(s[10] == doctest::Approx(0.9).epsilon(1e-12));
      CHECK(s[11] == doctest::Approx(0.9).epsilon(1e-12));
      CHECK(s[12] == doctest::Approx(0.9).epsilon(1e-12));
    }
  }

  TEST_CASE("assemble: counts, stationary dancer and schema") {
    const auto seq = wiggle(120, 1);
    CHECK(assemble_features(seq, FloorPlane::flat(), config(55, 1)).size() == 66);
    CHECK(assemble_features(seq, FloorPlane::flat(), config(30, 7)).size() == (120 - 30) / 7 + 1);
    CHECK_THROWS_AS(assemble_features(seq, FloorPlane::flat(), config(121)), DataError);

    const auto pose = testing::standing_pose();
    const auto still = make_sequence(40, 60.0, [&](std::size_t, std::size_t j) { return pose[j]; }, "s", "g7");
    const auto rows = assemble_features(still, FloorPlane::flat(), config(20));
    for (const auto& r : rows) {
      CHECK(r.label == std::optional<std::string>("s"));
      CHECK(r.group_id == "g7");
      for (std::size_t i = slot::initiation; i < slot::shape; ++i) CHECK(r.values[i] == 0.0);
      CHECK(r.values[slot::pelvis_path] == 0.0);
      CHECK(r.values[slot::distances] == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(r.values[slot::pelvis_height] == doctest::Approx(0.95).epsilon(1e-12));
      CHECK(std::abs(r.values[slot::shape + 1]) <= 1e-12);
      CHECK(r.values[slot::shape] > 0.0);
    }
    CHECK(rows.front().window_start == 0);
    CHECK(rows.back().window_start == 20);
  }

  TEST_CASE("joint storage order does not matter") {
    const auto seq = wiggle(90, 2);
    std::vector<std::size_t> perm(13);
    for (std::size_t i = 0; i < 13; ++i) perm[i] = (i * 5 + 3) % 13;  // new slot i holds old joint perm[i]
    const auto& sk = seq.skeleton();
    std::vector<std::string> names(13);
    std::vector<double> weights(13);
    std::array<int, kRoleCount> roles{};
    roles.fill(-1);
    for (std::size_t i = 0; i < 13; ++i) {
      names[i] = sk.joint_names()[perm[i]];
      weights[i] = sk.joint_weights()[perm[i]];
      roles[perm[i]] = static_cast<int>(i);
    }
    std::vector<Vec3> pos(seq.positions().size());
    for (std::size_t t = 0; t < 90; ++t) {
      for (std::size_t i = 0; i < 13; ++i) pos[t * 13 + i] = seq.at(t, perm[i]);
    }
    const JointSequence shuffled(std::make_shared<const SkeletonSpec>(names, roles, weights), 60.0, pos, "x", "g");
    const auto a = values(assemble_features(seq, FloorPlane::flat(), config(30, 5)));
    const auto b = values(assemble_features(shuffled, FloorPlane::flat(), config(30, 5)));
    for (std::size_t k = 0; k < a.size(); ++k) {
      for (std::size_t i = 0; i < kFeatureCount; ++i) CHECK(std::abs(a[k][i] - b[k][i]) <= 1e-12 * std::max(1.0, std::abs(a[k][i])));
    }
  }

  TEST_CASE("time reversal preserves paths, volumes, dispersion and energy") {
    const auto seq = wiggle(100, 3);
    const auto rev = make_sequence(100, 60.0, [&](std::size_t t, std::size_t j) { return seq.at(99 - t, j); });
    const auto a = values(assemble_features(seq, FloorPlane::flat(), config(100)));
    const auto b = values(assemble_features(rev, FloorPlane::flat(), config(100)));
    const std::vector<std::size_t> slots = {slot::pelvis_path, slot::pelvis_path + 1, slot::shape, slot::shape + 1,
                                            slot::shape + 2,   slot::shape + 3,       slot::dispersion,
                                            slot::dispersion + 1, slot::dispersion + 2, slot::dispersion + 3,
                                            slot::effort_weight, slot::effort_weight + 1, slot::joint_distance,
                                            slot::joint_distance + 4};
    for (std::size_t s : slots) CHECK(std::abs(a[0][s] - b[0][s]) <= 1e-9 * std::max(1.0, std::abs(a[0][s])));
  }

  TEST_CASE("rigid motion leaves translation-invariant slots unchanged") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 5; ++rep) {
      const auto seq = wiggle(90, 100 + rep);
      const auto rigid = testing::Rigid::random(rng);
      const auto moved = make_sequence(90, 60.0, [&](std::size_t t, std::size_t j) { return rigid(seq.at(t, j)); });
      const auto a = values(assemble_features(seq, FloorPlane::flat(), config(55, 5)));
      const auto b = values(assemble_features(moved, FloorPlane::flat(), config(55, 5)));
      for (std::size_t k = 0; k < a.size(); ++k) {
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
          if (translation_sensitive(i)) continue;
          CHECK(std::abs(a[k][i] - b[k][i]) <= 1e-6 * std::max(1.0, std::abs(a[k][i])));
        }
      }
    }
  }

  TEST_CASE("config validation") {
    const auto seq = wiggle(60, 1);
    auto cfg = config(20);
    cfg.threshold_scale = 0.0;
    CHECK_THROWS_AS(assemble_features(seq, FloorPlane::flat(), cfg), DataError);
    cfg = config(20);
    cfg.epsilon_net = 0.0;
    CHECK_THROWS_AS(assemble_features(seq, FloorPlane::flat(), cfg), DataError);
    cfg = config(20);
    cfg.selected = {Role::left_elbow};
    CHECK_THROWS_AS(assemble_features(seq, FloorPlane::flat(), cfg), DataError);
  }
}
