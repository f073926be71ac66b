#include "laban/motion_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "laban/errors.hpp"

namespace laban {

namespace {

constexpr std::array<std::string_view, kRoleCount> kRoleNames = {
    "head",      "left_hand",  "right_hand",  "left_shoulder", "right_shoulder",
    "pelvis",    "torso",      "left_knee",   "right_knee",    "left_ankle",
    "right_ankle", "left_foot", "right_foot", "left_elbow",    "right_elbow",
};

constexpr int kFormatVersion = 1;

double read_coordinate(const nlohmann::json& v, std::size_t line) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) throw ParseError("coordinate is not a number or null", line);
  return v.get<double>();
}

}  // namespace

std::string_view role_name(Role r) { return kRoleNames[static_cast<int>(r)]; }

std::optional<Role> role_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kRoleCount; ++i) {
    if (kRoleNames[i] == name) return static_cast<Role>(i);
  }
  return std::nullopt;
}

bool role_is_required(Role r) { return static_cast<std::size_t>(r) < kRequiredRoles; }

SkeletonSpec::SkeletonSpec(std::vector<std::string> joint_names,
                           std::array<int, kRoleCount> role_map,
                           std::vector<double> joint_weights)
    : joint_names_(std::move(joint_names)),
      role_map_(role_map),
      joint_weights_(std::move(joint_weights)) {
  const int n = static_cast<int>(joint_names_.size());
  std::set<std::string> seen;
  for (const auto& name : joint_names_) {
    if (!seen.insert(name).second) throw DataError("duplicate joint name '" + name + "'");
  }
  std::set<int> used;
  for (std::size_t r = 0; r < kRoleCount; ++r) {
    const int idx = role_map_[r];
    const auto role = static_cast<Role>(r);
    if (idx < 0) {
      if (role_is_required(role)) {
        throw DataError("skeleton lacks required role '" + std::string(role_name(role)) + "'");
      }
      continue;
    }
    if (idx >= n) {
      throw DataError("role '" + std::string(role_name(role)) + "' maps to invalid joint index");
    }
    if (!used.insert(idx).second) {
      throw DataError("role '" + std::string(role_name(role)) + "' shares a joint with another role");
    }
  }
  if (joint_weights_.size() != joint_names_.size()) {
    throw DataError("joint weight count does not match joint count");
  }
  bool any_positive = false;
  for (double w : joint_weights_) {
    if (!std::isfinite(w) || w < 0.0) throw DataError("joint weights must be finite and >= 0");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw DataError("at least one joint weight must be positive");
}

std::vector<double> SkeletonSpec::default_weights(const std::vector<std::string>& joint_names,
                                                  const std::array<int, kRoleCount>& role_map) {
  std::vector<double> w(joint_names.size(), 0.3);
  auto set = [&](Role r, double value) {
    const int idx = role_map[static_cast<int>(r)];
    if (idx >= 0 && idx < static_cast<int>(w.size())) w[idx] = value;
  };
  for (Role r : {Role::left_hand, Role::right_hand, Role::left_foot, Role::right_foot,
                 Role::left_ankle, Role::right_ankle}) {
    set(r, 1.0);
  }
  set(Role::head, 0.8);
  set(Role::pelvis, 0.5);
  return w;
}

SkeletonSpec SkeletonSpec::canonical() {
  std::vector<std::string> names;
  std::array<int, kRoleCount> roles;
  roles.fill(-1);
  for (std::size_t r = 0; r < kRequiredRoles; ++r) {
    roles[r] = static_cast<int>(names.size());
    names.emplace_back(kRoleNames[r]);
  }
  auto weights = default_weights(names, roles);
  return SkeletonSpec(std::move(names), roles, std::move(weights));
}

std::size_t SkeletonSpec::index(Role r) const {
  const int idx = role_map_[static_cast<int>(r)];
  if (idx < 0) throw DataError("role '" + std::string(role_name(r)) + "' is not mapped");
  return static_cast<std::size_t>(idx);
}

std::optional<std::size_t> SkeletonSpec::find_joint(std::string_view name) const {
  for (std::size_t i = 0; i < joint_names_.size(); ++i) {
    if (joint_names_[i] == name) return i;
  }
  return std::nullopt;
}

JointSequence::JointSequence(std::shared_ptr<const SkeletonSpec> skeleton, double fps,
                             std::vector<Vec3> positions, std::optional<std::string> label,
                             std::string group_id)
    : skeleton_(std::move(skeleton)),
      fps_(fps),
      positions_(std::move(positions)),
      label_(std::move(label)),
      group_id_(std::move(group_id)) {
  if (!skeleton_) throw DataError("sequence needs a skeleton");
  if (!(fps_ > 0.0) || !std::isfinite(fps_)) throw DataError("fps must be > 0");
  const std::size_t j = skeleton_->joint_count();
  if (j == 0 || positions_.size() % j != 0) {
    throw DataError("position count is not a multiple of the joint count");
  }
  if (positions_.size() / j < 2) throw DataError("T >= 2 required");
}

std::vector<Vec3> JointSequence::track(std::size_t joint) const {
  std::vector<Vec3> out(frame_count());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = at(t, joint);
  return out;
}

bool JointSequence::all_finite() const {
  return std::all_of(positions_.begin(), positions_.end(), [](const Vec3& p) { return is_finite(p); });
}

JointSequence parse_sequence(std::istream& in, const SkeletonSpec* target) {
  using nlohmann::json;
  std::string line;
  std::size_t line_no = 0;

  json header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      header = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed header: ") + e.what(), line_no);
    }
    break;
  }
  if (!header.is_object()) throw ParseError("missing header object", std::max<std::size_t>(line_no, 1));

  const std::size_t header_line = line_no;
  std::vector<std::string> names;
  std::array<int, kRoleCount> roles;
  roles.fill(-1);
  std::vector<double> weights;
  double fps = kDefaultFps;
  std::optional<std::string> label;
  std::string group_id;
  try {
    if (header.value("format_version", kFormatVersion) != kFormatVersion) {
      throw ParseError("unsupported format_version", header_line);
    }
    if (header.value("units", std::string("meters")) != "meters") {
      throw ParseError("units must be \"meters\"", header_line);
    }
    fps = header.value("fps", kDefaultFps);
    names = header.at("joints").get<std::vector<std::string>>();
    if (header.contains("roles")) {
      for (const auto& [role_str, joint] : header.at("roles").items()) {
        const auto role = role_from_name(role_str);
        if (!role) throw ParseError("unknown role '" + role_str + "'", header_line);
        const auto name = joint.get<std::string>();
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) {
          throw ParseError("role '" + role_str + "' names unknown joint '" + name + "'", header_line);
        }
        roles[static_cast<int>(*role)] = static_cast<int>(it - names.begin());
      }
    } else {
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (auto role = role_from_name(names[i])) roles[static_cast<int>(*role)] = static_cast<int>(i);
      }
    }
    weights = SkeletonSpec::default_weights(names, roles);
    if (header.contains("weights")) {
      for (const auto& [name, w] : header.at("weights").items()) {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw ParseError("weight for unknown joint '" + name + "'", header_line);
        weights[it - names.begin()] = w.get<double>();
      }
    }
    if (header.contains("label") && !header.at("label").is_null()) {
      label = header.at("label").get<std::string>();
    }
    if (header.contains("group_id")) group_id = header.at("group_id").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad header: ") + e.what(), header_line);
  }

  std::shared_ptr<const SkeletonSpec> file_skeleton;
  try {
    file_skeleton = std::make_shared<SkeletonSpec>(names, roles, weights);
  } catch (const DataError& e) {
    throw ParseError(e.what(), header_line);
  }

  const std::size_t j = names.size();
  std::vector<Vec3> positions;
  std::size_t frame_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed frame: ") + e.what(), line_no);
    }
    if (!row.is_array()) throw ParseError("frame is not an array", line_no);
    if (row.size() != j) {
      throw ParseError("frame " + std::to_string(frame_index) + " has " + std::to_string(row.size()) +
                           " joints, expected " + std::to_string(j),
                       line_no);
    }
    for (const auto& triplet : row) {
      if (triplet.is_null()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        positions.push_back({nan, nan, nan});
        continue;
      }
      if (!triplet.is_array() || triplet.size() != 3) {
        throw ParseError("frame " + std::to_string(frame_index) + " has a joint that is not an [x,y,z] triplet",
                         line_no);
      }
      positions.push_back({read_coordinate(triplet[0], line_no), read_coordinate(triplet[1], line_no),
                           read_coordinate(triplet[2], line_no)});
    }
    ++frame_index;
  }
  if (frame_index < 2) throw DataError("T >= 2 required, file has " + std::to_string(frame_index) + " frame(s)");

  if (target == nullptr) {
    return JointSequence(file_skeleton, fps, std::move(positions), std::move(label), std::move(group_id));
  }

  // Reorder into the target skeleton's joint order.
  std::vector<std::size_t> source_of(target->joint_count());
  for (std::size_t i = 0; i < target->joint_count(); ++i) {
    const auto src = file_skeleton->find_joint(target->joint_names()[i]);
    if (!src) throw DataError("skeleton mismatch: file lacks joint '" + target->joint_names()[i] + "'");
    source_of[i] = *src;
  }
  for (const auto& name : names) {
    if (!target->find_joint(name)) throw DataError("skeleton mismatch: unknown joint name '" + name + "'");
  }
  std::vector<Vec3> reordered(positions.size());
  for (std::size_t t = 0; t < frame_index; ++t) {
    for (std::size_t i = 0; i < j; ++i) reordered[t * j + i] = positions[t * j + source_of[i]];
  }
  return JointSequence(std::make_shared<SkeletonSpec>(*target), fps, std::move(reordered), std::move(label),
                       std::move(group_id));
}

JointSequence load_sequence(const std::filesystem::path& path, const SkeletonSpec* target) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_sequence(in, target);
}

void write_sequence(std::ostream& out, const JointSequence& seq) {
  using nlohmann::json;
  const auto& sk = seq.skeleton();
  json header;
  header["format_version"] = kFormatVersion;
  header["fps"] = seq.fps();
  header["units"] = "meters";
  header["joints"] = sk.joint_names();
  json roles = json::object();
  for (std::size_t r = 0; r < kRoleCount; ++r) {
    const int idx = sk.role_map()[r];
    if (idx >= 0) roles[std::string(kRoleNames[r])] = sk.joint_names()[idx];
  }
  header["roles"] = roles;
  json weights = json::object();
  for (std::size_t i = 0; i < sk.joint_count(); ++i) weights[sk.joint_names()[i]] = sk.joint_weights()[i];
  header["weights"] = weights;
  if (seq.label()) header["label"] = *seq.label();
  header["group_id"] = seq.group_id();
  out << header.dump() << '\n';

  auto coord = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  for (std::size_t t = 0; t < seq.frame_count(); ++t) {
    json row = json::array();
    for (const auto& p : seq.frame(t)) row.push_back(json::array({coord(p.x), coord(p.y), coord(p.z)}));
    out << row.dump() << '\n';
  }
}

void save_sequence(const std::filesystem::path& path, const JointSequence& seq) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_sequence(out, seq);
}

JointSequence validate_and_repair(const JointSequence& seq, int max_gap) {
  if (seq.all_finite()) return seq;
  const std::size_t T = seq.frame_count();
  const std::size_t J = seq.joint_count();
  std::vector<Vec3> pos = seq.positions();
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t c = 0; c < 3; ++c) {
      auto value = [&](std::size_t t) -> double& { return pos[t * J + j][c]; };
      std::size_t t = 0;
      while (t < T) {
        if (std::isfinite(value(t))) {
          ++t;
          continue;
        }
        std::size_t end = t;
        while (end < T && !std::isfinite(value(end))) ++end;
        const std::string where = "joint '" + seq.skeleton().joint_names()[j] + "' frames " +
                                  std::to_string(t) + ".." + std::to_string(end - 1);
        if (t == 0 || end == T) throw DataError("boundary gap: " + where);
        if (end - t > static_cast<std::size_t>(std::max(max_gap, 0))) {
          throw DataError("unrecoverable gap longer than " + std::to_string(max_gap) + " frames: " + where);
        }
        const double a = value(t - 1);
        const double b = value(end);
        const double span = static_cast<double>(end - t + 1);
        for (std::size_t k = t; k < end; ++k) {
          const double f = static_cast<double>(k - t + 1) / span;
          value(k) = a + (b - a) * f;
        }
        t = end;
      }
    }
  }
  return JointSequence(seq.skeleton_ptr(), seq.fps(), std::move(pos), seq.label(), seq.group_id());
}

JointSequence resample(const JointSequence& seq, double target_fps) {
  if (!(target_fps > 0.0) || !std::isfinite(target_fps)) throw DataError("target fps must be > 0");
  const std::size_t T = seq.frame_count();
  const std::size_t J = seq.joint_count();
  const double ratio = seq.fps() / target_fps;  // source frames per output frame
  const double span = static_cast<double>(T - 1);
  const auto out_frames = static_cast<std::size_t>(std::floor(span / ratio + 1e-9)) + 1;
  if (out_frames < 2) throw DataError("resampled sequence would have fewer than 2 frames");

  std::vector<Vec3> out(out_frames * J);
  for (std::size_t k = 0; k < out_frames; ++k) {
    const double s = std::min(static_cast<double>(k) * ratio, span);
    const auto i0 = std::min(static_cast<std::size_t>(std::floor(s)), T - 1);
    const std::size_t i1 = std::min(i0 + 1, T - 1);
    const double f = s - static_cast<double>(i0);
    for (std::size_t j = 0; j < J; ++j) {
      const Vec3& a = seq.at(i0, j);
      if (f == 0.0) {
        out[k * J + j] = a;
      } else {
        out[k * J + j] = a + (seq.at(i1, j) - a) * f;
      }
    }
  }
  return JointSequence(seq.skeleton_ptr(), target_fps, std::move(out), seq.label(), seq.group_id());
}

}  // namespace laban
