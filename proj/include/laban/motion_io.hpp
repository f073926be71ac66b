#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laban/geometry.hpp"

namespace laban {

// Semantic joint roles. The first kRequiredRoles are mandatory in every
// skeleton; elbows are optional.
enum class Role : int {
  head = 0,
  left_hand,
  right_hand,
  left_shoulder,
  right_shoulder,
  pelvis,
  torso,
  left_knee,
  right_knee,
  left_ankle,
  right_ankle,
  left_foot,
  right_foot,
  left_elbow,
  right_elbow,
};

inline constexpr std::size_t kRequiredRoles = 13;
inline constexpr std::size_t kRoleCount = 15;

std::string_view role_name(Role r);
std::optional<Role> role_from_name(std::string_view name);
bool role_is_required(Role r);

inline constexpr double kDefaultFps = 60.0;
inline constexpr int kDefaultMaxGap = 6;

class SkeletonSpec {
 public:
  // Throws DataError when an invariant does not hold.
  SkeletonSpec(std::vector<std::string> joint_names, std::array<int, kRoleCount> role_map,
               std::vector<double> joint_weights);

  // The 13-joint skeleton whose joint names are the role names.
  static SkeletonSpec canonical();

  // Extremities 1.0, head 0.8, pelvis 0.5, everything else 0.3.
  static std::vector<double> default_weights(const std::vector<std::string>& joint_names,
                                             const std::array<int, kRoleCount>& role_map);

  std::size_t joint_count() const { return joint_names_.size(); }
  const std::vector<std::string>& joint_names() const { return joint_names_; }
  const std::vector<double>& joint_weights() const { return joint_weights_; }
  const std::array<int, kRoleCount>& role_map() const { return role_map_; }

  bool has_role(Role r) const { return role_map_[static_cast<int>(r)] >= 0; }
  // Throws DataError for an unmapped role.
  std::size_t index(Role r) const;
  double weight(Role r) const { return joint_weights_[index(r)]; }
  std::optional<std::size_t> find_joint(std::string_view name) const;

  friend bool operator==(const SkeletonSpec&, const SkeletonSpec&) = default;

 private:
  std::vector<std::string> joint_names_;
  std::array<int, kRoleCount> role_map_;
  std::vector<double> joint_weights_;
};

// T x J positions in meters, frame-major.
class JointSequence {
 public:
  JointSequence(std::shared_ptr<const SkeletonSpec> skeleton, double fps,
                std::vector<Vec3> positions, std::optional<std::string> label = std::nullopt,
                std::string group_id = {});

  std::size_t frame_count() const { return positions_.size() / skeleton_->joint_count(); }
  std::size_t joint_count() const { return skeleton_->joint_count(); }
  double fps() const { return fps_; }
  double dt() const { return 1.0 / fps_; }

  const SkeletonSpec& skeleton() const { return *skeleton_; }
  const std::shared_ptr<const SkeletonSpec>& skeleton_ptr() const { return skeleton_; }

  const Vec3& at(std::size_t frame, std::size_t joint) const {
    return positions_[frame * joint_count() + joint];
  }
  const Vec3& at(std::size_t frame, Role r) const { return at(frame, skeleton_->index(r)); }
  std::span<const Vec3> frame(std::size_t t) const {
    return std::span<const Vec3>(positions_).subspan(t * joint_count(), joint_count());
  }
  const std::vector<Vec3>& positions() const { return positions_; }

  // Track of one joint over all frames.
  std::vector<Vec3> track(std::size_t joint) const;
  std::vector<Vec3> track(Role r) const { return track(skeleton_->index(r)); }

  const std::optional<std::string>& label() const { return label_; }
  const std::string& group_id() const { return group_id_; }

  bool all_finite() const;

 private:
  std::shared_ptr<const SkeletonSpec> skeleton_;
  double fps_;
  std::vector<Vec3> positions_;
  std::optional<std::string> label_;
  std::string group_id_;
};

// Parses the JSONL sequence format. When `target` is given, joints are
// reordered to its ordering and the file must name every target joint.
JointSequence parse_sequence(std::istream& in, const SkeletonSpec* target = nullptr);
JointSequence load_sequence(const std::filesystem::path& path, const SkeletonSpec* target = nullptr);

void write_sequence(std::ostream& out, const JointSequence& seq);
void save_sequence(const std::filesystem::path& path, const JointSequence& seq);

// Linearly interpolates non-finite runs of at most `max_gap` frames.
JointSequence validate_and_repair(const JointSequence& seq, int max_gap = kDefaultMaxGap);

// Linear resampling onto a uniform grid at `target_fps` starting at frame 0.
JointSequence resample(const JointSequence& seq, double target_fps);

}  // namespace laban
