#include "laban/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "laban/errors.hpp"
#include "laban/hull.hpp"

namespace laban {

namespace {

double range_mean(const std::vector<double>& v, const FrameRange& r) {
  double s = 0.0;
  for (std::size_t t = r.begin; t < r.end; ++t) s += v[t];
  return s / static_cast<double>(r.size());
}

double range_max(const std::vector<double>& v, const FrameRange& r) {
  return *std::max_element(v.begin() + static_cast<std::ptrdiff_t>(r.begin),
                           v.begin() + static_cast<std::ptrdiff_t>(r.end));
}

double range_min(const std::vector<double>& v, const FrameRange& r) {
  return *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(r.begin),
                           v.begin() + static_cast<std::ptrdiff_t>(r.end));
}

double range_std(const std::vector<double>& v, const FrameRange& r) {
  const double m = range_mean(v, r);
  double s = 0.0;
  for (std::size_t t = r.begin; t < r.end; ++t) s += (v[t] - m) * (v[t] - m);
  return std::sqrt(s / static_cast<double>(r.size()));
}

double population_std(const std::vector<double>& v) {
  return range_std(v, FrameRange{0, v.size()});
}

// Per-sequence cache of derivative magnitudes and per-frame scalars shared by
// the feature families.
class FeatureBank {
 public:
  FeatureBank(const JointSequence& seq, const LmaConfig& cfg) : seq_(seq), cfg_(cfg) {
    cfg_.validate(seq.skeleton());
    windows_ = windows(seq.frame_count(), cfg.window);
    if (!seq.all_finite()) throw DataError("sequence has non-finite positions; run repair first");
  }

  const std::vector<FrameRange>& ranges() const { return windows_; }
  const JointSequence& seq() const { return seq_; }
  const LmaConfig& cfg() const { return cfg_; }

  const std::vector<Vec3>& track(std::size_t joint) {
    auto& slot = tracks_[joint];
    if (slot.empty()) slot = seq_.track(joint);
    return slot;
  }

  const DerivativeTrack& deriv(std::size_t joint, int order) {
    const auto key = std::make_pair(joint, order);
    auto it = derivs_.find(key);
    if (it == derivs_.end()) {
      const auto& x = track(joint);
      if (x.size() < static_cast<std::size_t>(order) + 1) {
        throw DataError("sequence too short for derivative order " + std::to_string(order));
      }
      it = derivs_.emplace(key, derivative(x, order, seq_.dt())).first;
    }
    return it->second;
  }

  const std::vector<double>& speed(std::size_t joint, int order) {
    const auto key = std::make_pair(joint, order);
    auto it = magnitudes_.find(key);
    if (it == magnitudes_.end()) it = magnitudes_.emplace(key, deriv(joint, order).magnitudes()).first;
    return it->second;
  }

  std::size_t idx(Role r) const { return seq_.skeleton().index(r); }
  double alpha(Role r) const { return seq_.skeleton().weight(r); }

  std::vector<double> initiation(Role role) {
    const std::size_t j = idx(role);
    const std::size_t T = seq_.frame_count();
    const std::size_t w = cfg_.window.w;
    const double tau = cfg_.threshold_scale * population_std(speed(j, 1));
    const auto& x = track(j);
    std::vector<double> out;
    out.reserve(windows_.size());
    for (const auto& r : windows_) {
      std::size_t defined = 0, hits = 0;
      for (std::size_t t = r.begin; t < r.end && t + w < T; ++t) {
        ++defined;
        const double rate = distance(x[t + w], x[t]) / (static_cast<double>(w) * seq_.dt());
        if (rate > tau) ++hits;
      }
      out.push_back(defined == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(defined));
    }
    return out;
  }

  std::vector<double> space_ratio(Role role) {
    const std::size_t wi = inner_window(cfg_.window.w);
    if (cfg_.window.w < 2 * wi) {
      throw DataError("window of " + std::to_string(cfg_.window.w) + " frames is too short for Effort Space");
    }
    const auto& x = track(idx(role));
    std::vector<double> out;
    out.reserve(windows_.size());
    for (const auto& r : windows_) {
      double chords = 0.0;
      std::size_t last = r.begin;
      for (std::size_t t = r.begin + wi; t < r.end; t += wi) {
        chords += distance(x[t], x[t - wi]);
        last = t;
      }
      const double net = distance(x[last], x[r.begin]);
      out.push_back(chords == 0.0 ? 0.0 : chords / std::max(net, cfg_.epsilon_net));
    }
    return out;
  }

  std::vector<double> space_total() {
    std::vector<double> total(windows_.size(), 0.0);
    for (Role role : cfg_.selected) {
      const auto ratio = space_ratio(role);
      const double a = alpha(role);
      for (std::size_t k = 0; k < total.size(); ++k) total[k] += a * ratio[k];
    }
    return total;
  }

  std::vector<MeanMax> weight() {
    std::vector<double> energy(seq_.frame_count(), 0.0);
    for (Role role : cfg_.selected) {
      const auto& v = speed(idx(role), 1);
      const double a = alpha(role);
      for (std::size_t t = 0; t < energy.size(); ++t) energy[t] += 0.5 * a * v[t] * v[t];
    }
    std::vector<MeanMax> out;
    for (const auto& r : windows_) out.push_back({range_mean(energy, r), range_max(energy, r)});
    return out;
  }

  std::vector<MeanMax> time() {
    std::vector<double> weighted(seq_.frame_count(), 0.0);
    for (Role role : cfg_.selected) {
      const auto& acc = speed(idx(role), 2);
      const double a = alpha(role);
      for (std::size_t t = 0; t < weighted.size(); ++t) weighted[t] += a * acc[t];
    }
    std::vector<MeanMax> out;
    for (const auto& r : windows_) out.push_back({range_mean(weighted, r), range_max(weighted, r)});
    return out;
  }

  std::vector<std::array<double, 6>> flow() {
    std::vector<std::array<double, 6>> out(windows_.size());
    for (std::size_t k = 0; k < windows_.size(); ++k) {
      for (std::size_t i = 0; i < kExtremityRoles.size(); ++i) {
        out[k][i] = range_mean(speed(idx(kExtremityRoles[i]), 3), windows_[k]);
      }
      double total = 0.0;
      for (Role role : cfg_.selected) total += alpha(role) * range_mean(speed(idx(role), 3), windows_[k]);
      out[k][5] = total;
    }
    return out;
  }

  std::vector<std::array<double, 14>> body() {
    const auto& sk = seq_.skeleton();
    const std::size_t T = seq_.frame_count();
    const bool elbows = sk.has_role(Role::left_elbow) && sk.has_role(Role::right_elbow);
    std::array<std::vector<double>, 14> per_frame;
    for (auto& v : per_frame) v.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
      auto p = [&](Role r) { return seq_.at(t, r); };
      const std::array<std::pair<Role, Role>, 8> pairs = {{{Role::left_hand, Role::right_hand},
                                                           {Role::left_hand, Role::pelvis},
                                                           {Role::right_hand, Role::pelvis},
                                                           {Role::left_ankle, Role::right_ankle},
                                                           {Role::left_knee, Role::right_knee},
                                                           {Role::left_shoulder, Role::left_hand},
                                                           {Role::right_shoulder, Role::right_hand},
                                                           {Role::head, Role::pelvis}}};
      for (std::size_t i = 0; i < pairs.size(); ++i) per_frame[i][t] = distance(p(pairs[i].first), p(pairs[i].second));

      const Vec3 lelbow = elbows ? p(Role::left_elbow) : (p(Role::left_shoulder) + p(Role::left_hand)) * 0.5;
      const Vec3 relbow = elbows ? p(Role::right_elbow) : (p(Role::right_shoulder) + p(Role::right_hand)) * 0.5;
      per_frame[8][t] = angle_at(p(Role::left_shoulder), lelbow, p(Role::left_hand));
      per_frame[9][t] = angle_at(p(Role::right_shoulder), relbow, p(Role::right_hand));
      per_frame[10][t] = angle_at(p(Role::pelvis), p(Role::left_knee), p(Role::left_ankle));
      per_frame[11][t] = angle_at(p(Role::pelvis), p(Role::right_knee), p(Role::right_ankle));
      per_frame[12][t] = angle_at(p(Role::head), p(Role::left_shoulder), p(Role::left_hand));
      per_frame[13][t] = angle_at(p(Role::head), p(Role::right_shoulder), p(Role::right_hand));
    }
    std::vector<std::array<double, 14>> out(windows_.size());
    for (std::size_t k = 0; k < windows_.size(); ++k) {
      for (std::size_t i = 0; i < 14; ++i) out[k][i] = range_mean(per_frame[i], windows_[k]);
    }
    return out;
  }

  std::vector<std::array<double, 4>> volume() {
    std::vector<double> vol(seq_.frame_count());
    for (std::size_t t = 0; t < vol.size(); ++t) vol[t] = convex_hull_volume(seq_.frame(t));
    std::vector<std::array<double, 4>> out;
    for (const auto& r : windows_) {
      out.push_back({range_mean(vol, r), range_std(vol, r), range_min(vol, r), range_max(vol, r)});
    }
    return out;
  }

  std::vector<std::array<double, 4>> dispersion() {
    const std::size_t T = seq_.frame_count();
    std::vector<double> upper(T), lower(T);
    const std::array<Role, 5> up = {Role::head, Role::left_hand, Role::right_hand, Role::left_shoulder,
                                    Role::right_shoulder};
    const std::array<Role, 4> low = {Role::left_knee, Role::right_knee, Role::left_ankle, Role::right_ankle};
    for (std::size_t t = 0; t < T; ++t) {
      const Vec3 torso = seq_.at(t, Role::torso);
      const Vec3 pelvis = seq_.at(t, Role::pelvis);
      double su = 0.0, sl = 0.0;
      for (Role r : up) su += distance(seq_.at(t, r), torso);
      for (Role r : low) sl += distance(seq_.at(t, r), pelvis);
      upper[t] = su / static_cast<double>(up.size());
      lower[t] = sl / static_cast<double>(low.size());
    }
    std::vector<std::array<double, 4>> out;
    for (const auto& r : windows_) {
      out.push_back({range_mean(upper, r), range_std(upper, r), range_mean(lower, r), range_std(lower, r)});
    }
    return out;
  }

  std::vector<std::array<double, 13>> trajectory(const FloorPlane& plane) {
    plane.validate();
    const std::size_t pelvis = idx(Role::pelvis);
    const auto& x = track(pelvis);
    const auto& v = deriv(pelvis, 1).values;
    const auto& a = deriv(pelvis, 2).values;
    const std::size_t T = x.size();
    std::vector<double> curvature(T), height(T);
    for (std::size_t t = 0; t < T; ++t) {
      const double speed = norm(v[t]);
      curvature[t] = norm(cross(v[t], a[t])) / std::max(speed * speed * speed, 1e-9);
      height[t] = height_above_floor(x[t], plane);
    }
    std::vector<std::array<double, 13>> out;
    for (const auto& r : windows_) {
      std::array<double, 13> f{};
      const double path = path_length(x, r);
      const double net = distance(x[r.end - 1], x[r.begin]);
      f[0] = path;
      f[1] = net;
      f[2] = path == 0.0 ? 0.0 : path / std::max(net, cfg_.epsilon_net);
      f[3] = range_mean(curvature, r);
      f[4] = range_max(curvature, r);
      for (std::size_t i = 0; i < kExtremityRoles.size(); ++i) f[5 + i] = path_length(track(idx(kExtremityRoles[i])), r);
      f[10] = range_mean(height, r);
      f[11] = range_min(height, r);
      f[12] = range_max(height, r);
      out.push_back(f);
    }
    return out;
  }

 private:
  static double path_length(const std::vector<Vec3>& x, const FrameRange& r) {
    double s = 0.0;
    for (std::size_t t = r.begin + 1; t < r.end; ++t) s += distance(x[t], x[t - 1]);
    return s;
  }

  const JointSequence& seq_;
  const LmaConfig& cfg_;
  std::vector<FrameRange> windows_;
  std::map<std::size_t, std::vector<Vec3>> tracks_;
  std::map<std::pair<std::size_t, int>, DerivativeTrack> derivs_;
  std::map<std::pair<std::size_t, int>, std::vector<double>> magnitudes_;
};

}  // namespace

void LmaConfig::validate(const SkeletonSpec& skeleton) const {
  if (window.w < 2) throw DataError("window length must be >= 2");
  if (window.stride < 1) throw DataError("window stride must be >= 1");
  if (!(threshold_scale > 0.0)) throw DataError("initiation threshold scale must be > 0");
  if (!(epsilon_net > 0.0)) throw DataError("epsilon_net must be > 0");
  if (selected.empty()) throw DataError("selected joint set must not be empty");
  for (Role r : selected) {
    if (!skeleton.has_role(r)) throw DataError("selected role '" + std::string(role_name(r)) + "' is not mapped");
  }
}

std::size_t inner_window(std::size_t w) { return std::max<std::size_t>(2, w / 5); }

std::vector<double> initiation_rate(const JointSequence& seq, Role joint, const LmaConfig& cfg) {
  return FeatureBank(seq, cfg).initiation(joint);
}

std::vector<double> effort_space_joint(const JointSequence& seq, Role joint, const LmaConfig& cfg) {
  return FeatureBank(seq, cfg).space_ratio(joint);
}

std::vector<double> effort_space_total(const JointSequence& seq, const LmaConfig& cfg) {
  return FeatureBank(seq, cfg).space_total();
}

std::vector<MeanMax> effort_weight(const JointSequence& seq, const LmaConfig& cfg) {
  return FeatureBank(seq, cfg).weight();
}

std::vector<MeanMax> effort_time(const JointSequence& seq, const LmaConfig& cfg) {
  return FeatureBank(seq, cfg).time();
}

std::vector<std::array<double, 6>> effort_flow(const JointSequence& seq, const LmaConfig& cfg) {
  return FeatureBank(seq, cfg).flow();
}

std::vector<std::array<double, 14>> body_distances_angles(const JointSequence& seq, const LmaConfig& cfg) {
  return FeatureBank(seq, cfg).body();
}

std::vector<std::array<double, 4>> shape_volume(const JointSequence& seq, const LmaConfig& cfg) {
  if (seq.joint_count() < 4) throw DataError("hull volume needs at least 4 joints");
  return FeatureBank(seq, cfg).volume();
}

std::vector<std::array<double, 4>> spatial_dispersion(const JointSequence& seq, const LmaConfig& cfg) {
  return FeatureBank(seq, cfg).dispersion();
}

std::vector<std::array<double, 13>> space_trajectory(const JointSequence& seq, const FloorPlane& plane,
                                                     const LmaConfig& cfg) {
  return FeatureBank(seq, cfg).trajectory(plane);
}

std::vector<WindowFeatures> assemble_features(const JointSequence& seq, const FloorPlane& plane,
                                              const LmaConfig& cfg) {
  FeatureBank bank(seq, cfg);
  const auto& ranges = bank.ranges();
  const std::size_t n = ranges.size();

  const auto body = bank.body();
  std::array<std::vector<double>, 4> init;
  const std::array<Role, 4> init_roles = {Role::left_hand, Role::right_hand, Role::left_foot, Role::right_foot};
  for (std::size_t i = 0; i < 4; ++i) init[i] = bank.initiation(init_roles[i]);
  std::array<std::vector<double>, 5> space;
  for (std::size_t i = 0; i < 5; ++i) space[i] = bank.space_ratio(kExtremityRoles[i]);
  const auto space_total = bank.space_total();
  const auto weight = bank.weight();
  const auto time = bank.time();
  const auto flow = bank.flow();
  const auto volume = bank.volume();
  const auto disp = bank.dispersion();
  const auto traj = bank.trajectory(plane);

  std::vector<WindowFeatures> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto& v = out[k].values;
    std::copy(body[k].begin(), body[k].end(), v.begin() + slot::distances);
    for (std::size_t i = 0; i < 4; ++i) v[slot::initiation + i] = init[i][k];
    for (std::size_t i = 0; i < 5; ++i) v[slot::effort_space + i] = space[i][k];
    v[slot::effort_space + 5] = space_total[k];
    v[slot::effort_weight] = weight[k].mean;
    v[slot::effort_weight + 1] = weight[k].max;
    v[slot::effort_time] = time[k].mean;
    v[slot::effort_time + 1] = time[k].max;
    std::copy(flow[k].begin(), flow[k].end(), v.begin() + slot::effort_flow);
    std::copy(volume[k].begin(), volume[k].end(), v.begin() + slot::shape);
    std::copy(disp[k].begin(), disp[k].end(), v.begin() + slot::dispersion);
    std::copy(traj[k].begin(), traj[k].end(), v.begin() + slot::pelvis_path);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      if (!std::isfinite(v[i])) {
        throw InvariantError("feature '" + std::string(kFeatureNames[i]) + "' is not finite in window " +
                             std::to_string(ranges[k].begin));
      }
    }
    out[k].window_start = ranges[k].begin;
    out[k].label = seq.label();
    out[k].group_id = seq.group_id();
  }
  return out;
}

}  // namespace laban
