#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "laban/floor.hpp"
#include "laban/kinematics.hpp"
#include "laban/motion_io.hpp"

namespace laban {

inline constexpr std::size_t kFeatureCount = 55;

// Canonical descriptor layout. Body 0-17, Effort 18-33, Shape 34-37,
// Space 38-54. This order is the CSV header and the model schema.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    // Body: distances (m)
    "body_dist_lhand_rhand",
    "body_dist_lhand_pelvis",
    "body_dist_rhand_pelvis",
    "body_dist_lankle_rankle",
    "body_dist_lknee_rknee",
    "body_dist_lshoulder_lhand",
    "body_dist_rshoulder_rhand",
    "body_dist_head_pelvis",
    // Body: angles (rad)
    "body_angle_lelbow",
    "body_angle_relbow",
    "body_angle_lknee",
    "body_angle_rknee",
    "body_angle_lshoulder",
    "body_angle_rshoulder",
    // Body: movement initiation rate
    "body_initiation_lhand",
    "body_initiation_rhand",
    "body_initiation_lfoot",
    "body_initiation_rfoot",
    // Effort: space (directness ratio)
    "effort_space_head",
    "effort_space_lhand",
    "effort_space_rhand",
    "effort_space_lfoot",
    "effort_space_rfoot",
    "effort_space_total",
    // Effort: weight (kinetic energy)
    "effort_weight_mean",
    "effort_weight_max",
    // Effort: time (acceleration)
    "effort_time_mean",
    "effort_time_max",
    // Effort: flow (jerk)
    "effort_flow_head",
    "effort_flow_lhand",
    "effort_flow_rhand",
    "effort_flow_lfoot",
    "effort_flow_rfoot",
    "effort_flow_total",
    // Shape: convex hull volume (m^3)
    "shape_volume_mean",
    "shape_volume_std",
    "shape_volume_min",
    "shape_volume_max",
    // Space: dispersion (m)
    "space_dispersion_upper_mean",
    "space_dispersion_upper_std",
    "space_dispersion_lower_mean",
    "space_dispersion_lower_std",
    // Space: pelvis trajectory
    "space_pelvis_path",
    "space_pelvis_net",
    "space_pelvis_path_ratio",
    "space_pelvis_curvature_mean",
    "space_pelvis_curvature_max",
    // Space: per-joint distance travelled (m)
    "space_distance_head",
    "space_distance_lhand",
    "space_distance_rhand",
    "space_distance_lfoot",
    "space_distance_rfoot",
    // Space: pelvis height above floor (m)
    "space_pelvis_height_mean",
    "space_pelvis_height_min",
    "space_pelvis_height_max",
};

// Slot offsets of each family inside the descriptor.
namespace slot {
inline constexpr std::size_t distances = 0;
inline constexpr std::size_t angles = 8;
inline constexpr std::size_t initiation = 14;
inline constexpr std::size_t effort_space = 18;
inline constexpr std::size_t effort_weight = 24;
inline constexpr std::size_t effort_time = 26;
inline constexpr std::size_t effort_flow = 28;
inline constexpr std::size_t shape = 34;
inline constexpr std::size_t dispersion = 38;
inline constexpr std::size_t pelvis_path = 42;
inline constexpr std::size_t curvature = 45;
inline constexpr std::size_t joint_distance = 47;
inline constexpr std::size_t pelvis_height = 52;
}  // namespace slot

// Roles with per-role Effort and travelled-distance slots.
inline constexpr std::array<Role, 5> kExtremityRoles = {Role::head, Role::left_hand, Role::right_hand,
                                                        Role::left_foot, Role::right_foot};

struct LmaConfig {
  WindowConfig window{55, 1};
  double threshold_scale = 1.0;  // initiation threshold = scale * std(speed)
  double epsilon_net = 1e-3;     // meters; guards net-displacement denominators
  std::vector<Role> selected = {Role::head,      Role::left_hand,  Role::right_hand,
                                Role::left_foot, Role::right_foot, Role::pelvis};

  // Throws DataError on invalid values or roles missing from the skeleton.
  void validate(const SkeletonSpec& skeleton) const;
};

// Look-back of the Effort Space chords inside a descriptor window.
std::size_t inner_window(std::size_t w);

struct MeanMax {
  double mean = 0.0;
  double max = 0.0;
};

struct WindowFeatures {
  std::array<double, kFeatureCount> values{};
  std::size_t window_start = 0;
  std::optional<std::string> label;
  std::string group_id;
};

// Each operation returns one entry per sliding window of cfg.window.

std::vector<double> initiation_rate(const JointSequence& seq, Role joint, const LmaConfig& cfg);
std::vector<double> effort_space_joint(const JointSequence& seq, Role joint, const LmaConfig& cfg);
std::vector<double> effort_space_total(const JointSequence& seq, const LmaConfig& cfg);
std::vector<MeanMax> effort_weight(const JointSequence& seq, const LmaConfig& cfg);
std::vector<MeanMax> effort_time(const JointSequence& seq, const LmaConfig& cfg);
// Five per-role jerk means (kExtremityRoles order) followed by the weighted total.
std::vector<std::array<double, 6>> effort_flow(const JointSequence& seq, const LmaConfig& cfg);
std::vector<std::array<double, 14>> body_distances_angles(const JointSequence& seq, const LmaConfig& cfg);
// (mean, std, min, max) of the per-frame hull volume.
std::vector<std::array<double, 4>> shape_volume(const JointSequence& seq, const LmaConfig& cfg);
// (upper mean, upper std, lower mean, lower std).
std::vector<std::array<double, 4>> spatial_dispersion(const JointSequence& seq, const LmaConfig& cfg);
std::vector<std::array<double, 13>> space_trajectory(const JointSequence& seq, const FloorPlane& plane,
                                                     const LmaConfig& cfg);

std::vector<WindowFeatures> assemble_features(const JointSequence& seq, const FloorPlane& plane,
                                              const LmaConfig& cfg);

}  // namespace laban
