#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "laban/errors.hpp"
#include "laban/motion_io.hpp"
#include "support.hpp"

using namespace laban;
using testing::make_sequence;

namespace {

std::string header(std::size_t joints = 13) {
  std::string h = R"({"format_version":1,"fps":60,"units":"meters","joints":[)";
  const auto sk = SkeletonSpec::canonical();
  for (std::size_t j = 0; j < joints; ++j) h += (j ? ",\"" : "\"") + sk.joint_names()[j] + "\"";
  return h + R"(],"label":"pop","group_id":"v1"})" + "\n";
}

std::string frame(std::size_t joints, double v = 0.0) {
  std::string f = "[";
  for (std::size_t j = 0; j < joints; ++j) f += (j ? "," : "") + std::string("[") + std::to_string(v + j) + ",1,2]";
  return f + "]\n";
}

}  // namespace

TEST_SUITE("motion-io") {
  TEST_CASE("two-frame file parses") {
    std::istringstream in(header() + frame(13) + frame(13, 0.5));
    const auto seq = parse_sequence(in);
    CHECK(seq.frame_count() == 2);
    CHECK(seq.joint_count() == 13);
    CHECK(seq.fps() == 60.0);
    CHECK(seq.label() == std::optional<std::string>("pop"));
    CHECK(seq.group_id() == "v1");
    CHECK(seq.at(1, 3).x == doctest::Approx(3.5));
  }

  TEST_CASE("single frame is rejected") {
    std::istringstream in(header() + frame(13));
    CHECK_THROWS_WITH_AS(parse_sequence(in), doctest::Contains("T >= 2 required"), DataError);
  }

  TEST_CASE("short row names the frame and line") {
    std::istringstream in(header() + frame(13) + frame(12));
    try {
      parse_sequence(in);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("frame 1") != std::string::npos);
      CHECK(std::string(e.what()).find("12 joints") != std::string::npos);
    }
  }

  TEST_CASE("unknown units and bad json are rejected") {
    std::istringstream units(R"({"format_version":1,"fps":60,"units":"cm","joints":[]})" "\n");
    CHECK_THROWS_AS(parse_sequence(units), DataError);
    std::istringstream bad(header() + "[[0,0,0],\n");
    CHECK_THROWS_AS(parse_sequence(bad), ParseError);
  }

  TEST_CASE("target skeleton reorders joints and rejects unknown names") {
    // File lists the canonical joints in reverse order.
    const auto sk = SkeletonSpec::canonical();
    std::string h = R"({"format_version":1,"fps":30,"units":"meters","joints":[)";
    for (int j = 12; j >= 0; --j) h += (j != 12 ? ",\"" : "\"") + sk.joint_names()[static_cast<std::size_t>(j)] + "\"";
    h += "]}\n";
    std::string f = "[";
    for (int j = 12; j >= 0; --j) f += (j != 12 ? "," : "") + std::string("[") + std::to_string(j) + ",0,0]";
    f += "]\n";
    std::istringstream in(h + f + f);
    const auto seq = parse_sequence(in, &sk);
    for (std::size_t j = 0; j < 13; ++j) CHECK(seq.at(0, j).x == static_cast<double>(j));

    std::vector<std::string> names = sk.joint_names();
    names[0] = "nose";
    std::array<int, kRoleCount> roles{};
    roles.fill(-1);
    for (int r = 0; r < 13; ++r) roles[static_cast<std::size_t>(r)] = r;
    const SkeletonSpec other(names, roles, SkeletonSpec::default_weights(names, roles));
    std::istringstream in2(header() + frame(13) + frame(13));
    CHECK_THROWS_AS(parse_sequence(in2, &other), DataError);
  }

  TEST_CASE("skeleton invariants") {
    auto names = SkeletonSpec::canonical().joint_names();
    auto roles = SkeletonSpec::canonical().role_map();
    auto weights = SkeletonSpec::canonical().joint_weights();
    CHECK(weights[testing::ri(Role::left_hand)] == 1.0);
    CHECK(weights[testing::ri(Role::right_foot)] == 1.0);
    CHECK(weights[testing::ri(Role::head)] == 0.8);
    CHECK(weights[testing::ri(Role::pelvis)] == 0.5);
    CHECK(weights[testing::ri(Role::torso)] == 0.3);

    auto dup = names;
    dup[1] = dup[0];
    CHECK_THROWS_AS(SkeletonSpec(dup, roles, weights), DataError);
    auto shared = roles;
    shared[1] = shared[0];
    CHECK_THROWS_AS(SkeletonSpec(names, shared, weights), DataError);
    auto negative = weights;
    negative[2] = -1.0;
    CHECK_THROWS_AS(SkeletonSpec(names, roles, negative), DataError);
    CHECK_THROWS_AS(SkeletonSpec(names, roles, std::vector<double>(13, 0.0)), DataError);
  }

  TEST_CASE("write then parse round-trips") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const auto seq = make_sequence(17, 60.0, [&](std::size_t, std::size_t) { return Vec3{u(rng), u(rng), u(rng)}; },
                                   "lock", "vid_3");
    std::stringstream buf;
    write_sequence(buf, seq);
    const auto back = parse_sequence(buf);
    REQUIRE(back.frame_count() == 17);
    CHECK(back.label() == seq.label());
    CHECK(back.group_id() == seq.group_id());
    double worst = 0.0;
    for (std::size_t i = 0; i < seq.positions().size(); ++i) {
      worst = std::max(worst, distance(seq.positions()[i], back.positions()[i]));
    }
    CHECK(worst <= 1e-9);
  }

  TEST_CASE("null coordinates load as gaps") {
    std::string f = frame(13);
    f.replace(1, 14, "null");  // first joint becomes null
    std::istringstream in(header() + frame(13) + f + frame(13));
    const auto seq = parse_sequence(in);
    CHECK(std::isnan(seq.at(1, 0).x));
    CHECK_FALSE(seq.all_finite());
  }
}

TEST_SUITE("motion-io") {
  const double nan = std::numeric_limits<double>::quiet_NaN();

  TEST_CASE("single missing frame is the midpoint") {
    auto seq = make_sequence(10, 60.0, [&](std::size_t t, std::size_t j) {
      if (j == 2 && t == 5) return Vec3{nan, nan, nan};
      if (j == 2) return Vec3{0, 0, t < 5 ? 0.0 : 0.2};
      return Vec3{0, 1, 0};
    });
    const auto fixed = validate_and_repair(seq);
    CHECK(fixed.all_finite());
    CHECK(fixed.at(5, 2).z == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(fixed.at(5, 2).x == 0.0);
  }

  TEST_CASE("gap longer than max_gap is unrecoverable") {
    const int max_gap = 6;
    auto seq = make_sequence(20, 60.0, [&](std::size_t t, std::size_t j) {
      return (j == 4 && t >= 3 && t < 3 + max_gap + 1) ? Vec3{nan, 0, 0} : Vec3{0, 0, 0};
    });
    CHECK_THROWS_WITH_AS(validate_and_repair(seq, max_gap), doctest::Contains("unrecoverable"), DataError);
    auto ok = make_sequence(20, 60.0, [&](std::size_t t, std::size_t j) {
      return (j == 4 && t >= 3 && t < 3 + max_gap) ? Vec3{nan, 0, 0} : Vec3{0, 0, 0};
    });
    CHECK(validate_and_repair(ok, max_gap).all_finite());
  }

  TEST_CASE("boundary gap is an error") {
    auto first = make_sequence(8, 60.0, [&](std::size_t t, std::size_t j) {
      return (j == 0 && t == 0) ? Vec3{nan, 0, 0} : Vec3{0, 0, 0};
    });
    CHECK_THROWS_WITH_AS(validate_and_repair(first), doctest::Contains("boundary"), DataError);
    auto last = make_sequence(8, 60.0, [&](std::size_t t, std::size_t j) {
      return (j == 0 && t == 7) ? Vec3{nan, 0, 0} : Vec3{0, 0, 0};
    });
    CHECK_THROWS_AS(validate_and_repair(last), DataError);
  }

  TEST_CASE("repair is identity on clean data and idempotent") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto clean = make_sequence(12, 60.0, [&](std::size_t, std::size_t) { return Vec3{u(rng), u(rng), u(rng)}; });
    CHECK(validate_and_repair(clean).positions() == clean.positions());

    const auto gappy = make_sequence(12, 60.0, [&](std::size_t t, std::size_t j) {
      return (t == 4 || t == 5) && j % 3 == 0 ? Vec3{nan, nan, nan} : Vec3{u(rng), u(rng), u(rng)};
    });
    const auto once = validate_and_repair(gappy);
    CHECK(validate_and_repair(once).positions() == once.positions());
  }

  TEST_CASE("resample halves a one second clip") {
    const auto seq = make_sequence(60, 60.0, [](std::size_t t, std::size_t j) {
      return Vec3{static_cast<double>(t) / 60.0, static_cast<double>(j), 0};
    });
    const auto half = resample(seq, 30.0);
    CHECK(half.fps() == 30.0);
    CHECK(half.frame_count() == 30);
    CHECK(half.at(0, 3) == seq.at(0, 3));
  }

  TEST_CASE("resample to the same rate is identity") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto seq = make_sequence(25, 60.0, [&](std::size_t, std::size_t) { return Vec3{u(rng), u(rng), u(rng)}; });
    const auto same = resample(seq, 60.0);
    REQUIRE(same.frame_count() == 25);
    for (std::size_t i = 0; i < seq.positions().size(); ++i) {
      CHECK(distance(seq.positions()[i], same.positions()[i]) <= 1e-12);
    }
  }

  TEST_CASE("resampled linear motion stays on the line and keeps endpoints") {
    const Vec3 v{0.3, -0.2, 1.1};
    const auto seq = make_sequence(61, 60.0, [&](std::size_t t, std::size_t j) {
      return Vec3{0, static_cast<double>(j), 0} + v * (static_cast<double>(t) / 60.0);
    });
    for (double fps : {24.0, 30.0, 50.0, 90.0, 120.0}) {
      const auto r = resample(seq, fps);
      for (std::size_t t = 0; t < r.frame_count(); ++t) {
        const Vec3 expect = Vec3{0, 5, 0} + v * (static_cast<double>(t) / fps);
        CHECK(distance(r.at(t, 5), expect) <= 1e-9);
      }
      CHECK(distance(r.at(0, 5), seq.at(0, 5)) <= 1e-9);
      CHECK(distance(r.at(r.frame_count() - 1, 5), seq.at(60, 5)) <= 1e-9);
    }
    CHECK_THROWS_AS(resample(seq, 0.0), DataError);
  }
}
