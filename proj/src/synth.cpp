#include "laban/synth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "laban/errors.hpp"

namespace laban {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  // 53-bit mantissa from the raw engine output keeps results platform-independent.
  const double u = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
  return lo + (hi - lo) * u;
}

Oscillator osc(std::string target, double amplitude, double frequency, double phase, Vec3 axis) {
  return Oscillator{std::move(target), amplitude, frequency, phase, axis};
}

Vec3& pose_at(std::array<Vec3, kRequiredRoles>& pose, Role r) { return pose[static_cast<int>(r)]; }

double burst_envelope(const BurstPattern& b, double t) {
  const double u = std::fmod(t, b.period);
  if (u >= b.width) return 1.0;
  return 1.0 + b.gain * 0.5 * (1.0 - std::cos(kTwoPi * u / b.width));
}

nlohmann::json vec_to_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw DataError("expected an [x, y, z] triplet");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

void StyleSpec::validate() const {
  if (name.empty()) throw DataError("style needs a name");
  for (const auto& o : oscillators) {
    if (!(o.amplitude >= 0.0) || !(o.frequency >= 0.0) || !std::isfinite(o.phase) || !is_finite(o.axis)) {
      throw DataError("style '" + name + "': oscillator amplitude and frequency must be >= 0");
    }
    if (o.target != "root" && !role_from_name(o.target)) {
      throw DataError("style '" + name + "': unknown oscillator target '" + o.target + "'");
    }
    if (o.target != "root" && !role_is_required(*role_from_name(o.target))) {
      throw DataError("style '" + name + "': oscillator target '" + o.target + "' is not a synthetic joint");
    }
  }
  if (pause && (!(pause->duty >= 0.0 && pause->duty <= 1.0) || !(pause->period > 0.0))) {
    throw DataError("style '" + name + "': pause duty must lie in [0, 1] with a positive period");
  }
  if (burst && (!(burst->period > 0.0) || !(burst->width > 0.0) || !(burst->gain >= 0.0))) {
    throw DataError("style '" + name + "': burst needs positive period and width and gain >= 0");
  }
  if (!(noise_sigma >= 0.0)) throw DataError("style '" + name + "': noise_sigma must be >= 0");
  for (const auto& p : base_pose) {
    if (!is_finite(p)) throw DataError("style '" + name + "': base pose must be finite");
  }
}

std::array<Vec3, kRequiredRoles> default_base_pose() {
  std::array<Vec3, kRequiredRoles> p{};
  pose_at(p, Role::head) = {0.0, 1.65, 0.0};
  pose_at(p, Role::torso) = {0.0, 1.30, 0.0};
  pose_at(p, Role::pelvis) = {0.0, 0.95, 0.0};
  pose_at(p, Role::left_shoulder) = {0.18, 1.42, 0.0};
  pose_at(p, Role::right_shoulder) = {-0.18, 1.42, 0.0};
  pose_at(p, Role::left_hand) = {0.25, 0.85, 0.05};
  pose_at(p, Role::right_hand) = {-0.25, 0.85, 0.05};
  pose_at(p, Role::left_knee) = {0.10, 0.50, 0.03};
  pose_at(p, Role::right_knee) = {-0.10, 0.50, 0.03};
  pose_at(p, Role::left_ankle) = {0.11, 0.08, 0.0};
  pose_at(p, Role::right_ankle) = {-0.11, 0.08, 0.0};
  pose_at(p, Role::left_foot) = {0.11, 0.02, 0.12};
  pose_at(p, Role::right_foot) = {-0.11, 0.02, 0.12};
  return p;
}

std::vector<StyleSpec> default_styles() {
  const Vec3 X{1, 0, 0}, Y{0, 1, 0}, Z{0, 0, 1};
  const double pi = std::numbers::pi;
  std::vector<StyleSpec> s;
  auto make = [&](std::string name) {
    StyleSpec spec;
    spec.name = std::move(name);
    spec.base_pose = default_base_pose();
    return spec;
  };

  // Erratic, incommensurate frequencies, low stance.
  auto brk = make("break");
  brk.oscillators = {osc("root", 0.12, 0.7, 0.0, Y),        osc("root", 0.10, 0.31, 1.0, X),
                     osc("left_hand", 0.25, 1.3, 0.0, X),   osc("left_hand", 0.18, 2.9, 0.5, Y),
                     osc("right_hand", 0.22, 1.7, 2.0, Z),  osc("right_hand", 0.15, 3.3, 0.0, Y),
                     osc("left_foot", 0.20, 1.1, 0.3, Z),   osc("right_foot", 0.20, 2.3, 1.2, X),
                     osc("left_knee", 0.10, 1.1, 0.3, Z),   osc("right_knee", 0.10, 2.3, 1.2, X)};
  s.push_back(brk);

  // Small fast hits with sharp bursts.
  auto pop = make("pop");
  pop.oscillators = {osc("left_hand", 0.05, 3.0, 0.0, Y), osc("right_hand", 0.05, 3.0, pi, Y),
                     osc("torso", 0.02, 3.0, 0.0, Z), osc("head", 0.02, 3.0, 0.5, Z)};
  pop.burst = BurstPattern{0.5, 4.0, 0.1};
  s.push_back(pop);

  // Pointing arms with freezes.
  auto lock = make("lock");
  lock.oscillators = {osc("left_hand", 0.30, 1.5, 0.0, Vec3{0.7, 0.7, 0}),
                      osc("right_hand", 0.30, 1.5, pi / 2, Vec3{-0.7, 0.7, 0}),
                      osc("left_knee", 0.05, 1.5, 0.0, Z), osc("right_knee", 0.05, 1.5, pi, Z)};
  lock.pause = PausePattern{1.0, 0.45};
  s.push_back(lock);

  // Raised arms whipping in circles.
  auto waack = make("waack");
  pose_at(waack.base_pose, Role::left_hand) = {0.40, 1.45, 0.10};
  pose_at(waack.base_pose, Role::right_hand) = {-0.40, 1.45, 0.10};
  waack.oscillators = {osc("left_hand", 0.40, 2.2, 0.0, X),    osc("left_hand", 0.40, 2.2, pi / 2, Y),
                       osc("right_hand", 0.40, 2.2, pi, X),    osc("right_hand", 0.40, 2.2, 3 * pi / 2, Y),
                       osc("head", 0.02, 1.1, 0.0, X)};
  s.push_back(waack);

  // Steady groove bounce.
  auto mh = make("middle_hiphop");
  mh.oscillators = {osc("root", 0.08, 2.0, 0.0, Y),         osc("left_hand", 0.10, 2.0, 0.0, Y),
                    osc("right_hand", 0.10, 2.0, 0.0, Y),   osc("left_knee", 0.08, 2.0, 0.0, Z),
                    osc("right_knee", 0.08, 2.0, 0.0, Z),   osc("head", 0.05, 2.0, 0.3, Z)};
  s.push_back(mh);

  // Side sway with swinging arms.
  auto la = make("la_hiphop");
  la.oscillators = {osc("pelvis", 0.12, 0.7, 0.0, X),     osc("torso", 0.10, 0.7, 0.2, X),
                    osc("left_hand", 0.30, 0.7, 0.0, Z),  osc("right_hand", 0.30, 0.7, pi, Z),
                    osc("head", 0.03, 1.4, 0.0, Y),       osc("root", 0.02, 1.4, 0.0, Y)};
  s.push_back(la);

  // Quick footwork travelling sideways.
  auto house = make("house");
  house.oscillators = {osc("left_foot", 0.12, 2.2, 0.0, X),  osc("right_foot", 0.12, 2.2, pi, X),
                       osc("left_ankle", 0.10, 2.2, 0.0, X), osc("right_ankle", 0.10, 2.2, pi, X),
                       osc("left_knee", 0.06, 2.2, 0.0, X),  osc("right_knee", 0.06, 2.2, pi, X),
                       osc("root", 0.03, 4.4, 0.0, Y),       osc("root", 0.40, 0.25, 0.0, X)};
  s.push_back(house);

  // Aggressive chest and arm bursts.
  auto krump = make("krump");
  krump.oscillators = {osc("left_hand", 0.15, 1.2, 0.0, Z), osc("right_hand", 0.15, 1.2, 0.4, Z),
                       osc("torso", 0.08, 1.2, 0.0, Z),     osc("head", 0.06, 1.2, 0.0, Z),
                       osc("root", 0.04, 1.2, 0.0, Y)};
  krump.burst = BurstPattern{0.8, 3.0, 0.2};
  s.push_back(krump);

  // Kicks and opposing arm lines.
  auto js = make("street_jazz");
  js.oscillators = {osc("right_foot", 0.35, 0.9, 0.0, Vec3{0, 0.6, 0.8}),
                    osc("right_ankle", 0.30, 0.9, 0.0, Vec3{0, 0.6, 0.8}),
                    osc("right_knee", 0.18, 0.9, 0.0, Vec3{0, 0.6, 0.8}),
                    osc("left_hand", 0.30, 0.9, 0.0, Vec3{0.6, 0.8, 0}),
                    osc("right_hand", 0.30, 0.9, pi, Vec3{-0.6, 0.8, 0}),
                    osc("head", 0.05, 0.9, 0.0, X)};
  s.push_back(js);

  // Slow, wide extensions.
  auto jb = make("ballet_jazz");
  jb.oscillators = {osc("left_hand", 0.40, 0.5, 0.0, Vec3{0.5, 0.85, 0}),
                    osc("right_hand", 0.40, 0.5, 0.0, Vec3{-0.5, 0.85, 0}),
                    osc("left_foot", 0.20, 0.5, pi / 2, Vec3{0.6, 0.3, 0.7}),
                    osc("left_ankle", 0.18, 0.5, pi / 2, Vec3{0.6, 0.3, 0.7}),
                    osc("root", 0.10, 0.25, 0.0, X)};
  s.push_back(jb);

  return s;
}

double gated_time(const StyleSpec& spec, double t) {
  if (!spec.pause || spec.pause->duty <= 0.0) return t;
  const double period = spec.pause->period;
  const double moving = (1.0 - spec.pause->duty) * period;
  const double cycles = std::floor(t / period);
  const double within = t - cycles * period;
  return cycles * moving + std::min(within, moving);
}

JointSequence generate(const StyleSpec& spec, double duration, double fps, std::uint64_t seed) {
  spec.validate();
  if (!(fps > 0.0) || !(duration > 0.0)) throw DataError("duration and fps must be > 0");
  const auto T = static_cast<std::size_t>(std::floor(duration * fps + 1e-9));
  if (T < 2) throw DataError("duration * fps must be >= 2");

  auto skeleton = std::make_shared<const SkeletonSpec>(SkeletonSpec::canonical());
  const std::size_t J = kRequiredRoles;
  std::vector<Vec3> positions(T * J);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<int> target(spec.oscillators.size(), -1);
  for (std::size_t k = 0; k < spec.oscillators.size(); ++k) {
    if (spec.oscillators[k].target != "root") target[k] = static_cast<int>(*role_from_name(spec.oscillators[k].target));
  }

  for (std::size_t i = 0; i < T; ++i) {
    const double tau = gated_time(spec, static_cast<double>(i) / fps);
    const double gain = spec.burst ? burst_envelope(*spec.burst, tau) : 1.0;
    Vec3* frame = positions.data() + i * J;
    for (std::size_t j = 0; j < J; ++j) frame[j] = spec.base_pose[j];
    for (std::size_t k = 0; k < spec.oscillators.size(); ++k) {
      const Oscillator& o = spec.oscillators[k];
      const Vec3 d = o.axis * (gain * o.amplitude * std::sin(kTwoPi * o.frequency * tau + o.phase));
      if (target[k] < 0) {
        for (std::size_t j = 0; j < J; ++j) frame[j] += d;
      } else {
        frame[target[k]] += d;
      }
    }
    if (spec.noise_sigma > 0.0) {
      for (std::size_t j = 0; j < J; ++j) {
        frame[j] += Vec3{noise(rng), noise(rng), noise(rng)} * spec.noise_sigma;
      }
    }
  }
  return JointSequence(std::move(skeleton), fps, std::move(positions), spec.name);
}

StyleSpec vary_style(const StyleSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(mix(seed));
  StyleSpec v = spec;
  const double body = uniform(rng, 0.95, 1.05);
  const double tempo = uniform(rng, 0.95, 1.05);
  const Vec3 stage{uniform(rng, -0.5, 0.5), 0.0, uniform(rng, 2.5, 4.0)};
  for (auto& p : v.base_pose) p = p * body + stage;
  for (auto& o : v.oscillators) {
    o.amplitude *= uniform(rng, 0.9, 1.1);
    o.frequency *= tempo;
  }
  if (v.pause) v.pause->period /= tempo;
  if (v.burst) {
    v.burst->period /= tempo;
    v.burst->width /= tempo;
  }
  return v;
}

std::vector<JointSequence> generate_corpus(const std::vector<StyleSpec>& specs, int per_style, double duration,
                                           double fps, std::uint64_t master_seed) {
  if (per_style < 3) throw DataError("per_style must be >= 3 for grouped 3-fold cross-validation");
  std::vector<JointSequence> out;
  out.reserve(specs.size() * static_cast<std::size_t>(per_style));
  for (std::size_t s = 0; s < specs.size(); ++s) {
    for (int k = 0; k < per_style; ++k) {
      const std::uint64_t structure = mix((static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint64_t>(k));
      const std::uint64_t seq_seed = mix(master_seed ^ structure);
      const StyleSpec variant = vary_style(specs[s], seq_seed);
      const JointSequence raw = generate(variant, duration, fps, mix(seq_seed + 1));
      char id[32];
      std::snprintf(id, sizeof(id), "_%02d", k);
      out.emplace_back(raw.skeleton_ptr(), raw.fps(), raw.positions(), specs[s].name, specs[s].name + id);
    }
  }
  return out;
}

std::string styles_to_json(const std::vector<StyleSpec>& specs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : specs) {
    nlohmann::json j;
    j["name"] = s.name;
    nlohmann::json pose = nlohmann::json::object();
    for (std::size_t r = 0; r < kRequiredRoles; ++r) {
      pose[std::string(role_name(static_cast<Role>(r)))] = vec_to_json(s.base_pose[r]);
    }
    j["base_pose"] = pose;
    nlohmann::json oscs = nlohmann::json::array();
    for (const auto& o : s.oscillators) {
      oscs.push_back({{"target", o.target},
                      {"amplitude", o.amplitude},
                      {"frequency", o.frequency},
                      {"phase", o.phase},
                      {"axis", vec_to_json(o.axis)}});
    }
    j["oscillators"] = oscs;
    if (s.pause) j["pause"] = {{"period", s.pause->period}, {"duty", s.pause->duty}};
    if (s.burst) j["burst"] = {{"period", s.burst->period}, {"gain", s.burst->gain}, {"width", s.burst->width}};
    j["noise_sigma"] = s.noise_sigma;
    arr.push_back(j);
  }
  nlohmann::json doc;
  doc["styles"] = arr;
  return doc.dump(2) + "\n";
}

std::vector<StyleSpec> styles_from_json(const std::string& text) {
  std::vector<StyleSpec> out;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& j : doc.at("styles")) {
      StyleSpec s;
      s.name = j.at("name").get<std::string>();
      s.base_pose = default_base_pose();
      if (j.contains("base_pose")) {
        for (const auto& [role, value] : j.at("base_pose").items()) {
          const auto r = role_from_name(role);
          if (!r || !role_is_required(*r)) throw DataError("unknown base pose role '" + role + "'");
          s.base_pose[static_cast<int>(*r)] = vec_from_json(value);
        }
      }
      for (const auto& o : j.value("oscillators", nlohmann::json::array())) {
        s.oscillators.push_back(Oscillator{o.at("target").get<std::string>(), o.at("amplitude").get<double>(),
                                           o.at("frequency").get<double>(), o.value("phase", 0.0),
                                           o.contains("axis") ? vec_from_json(o.at("axis")) : Vec3{1, 0, 0}});
      }
      if (j.contains("pause")) {
        s.pause = PausePattern{j["pause"].at("period").get<double>(), j["pause"].at("duty").get<double>()};
      }
      if (j.contains("burst")) {
        s.burst = BurstPattern{j["burst"].at("period").get<double>(), j["burst"].at("gain").get<double>(),
                               j["burst"].value("width", 0.15)};
      }
      s.noise_sigma = j.value("noise_sigma", 0.005);
      s.validate();
      out.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed style bundle: ") + e.what());
  }
  return out;
}

std::vector<StyleSpec> load_styles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return styles_from_json(buffer.str());
}

}  // namespace laban
