#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "laban/geometry.hpp"
#include "laban/motion_io.hpp"

namespace laban {

// Sinusoidal displacement A * sin(2*pi*f*t + phase) * axis added to one
// role, or to every joint when target is "root".
struct Oscillator {
  std::string target;
  double amplitude = 0.0;  // m
  double frequency = 0.0;  // Hz
  double phase = 0.0;      // rad
  Vec3 axis{1.0, 0.0, 0.0};
};

// Motion freezes for the last `duty` fraction of every period.
struct PausePattern {
  double period = 1.0;  // s
  double duty = 0.0;    // [0, 1]
};

// Oscillator amplitudes are scaled by 1 + gain * bump at the start of every
// period, bump being a raised cosine `width` seconds long.
struct BurstPattern {
  double period = 1.0;  // s
  double gain = 0.0;
  double width = 0.15;  // s
};

struct StyleSpec {
  std::string name;
  std::array<Vec3, kRequiredRoles> base_pose{};  // indexed by Role, meters
  std::vector<Oscillator> oscillators;
  std::optional<PausePattern> pause;
  std::optional<BurstPattern> burst;
  double noise_sigma = 0.005;  // m

  void validate() const;
};

// Standing pose on the y = 0 floor, Y up, facing +Z.
std::array<Vec3, kRequiredRoles> default_base_pose();

// Ten styles covering bursty, paused, smooth-periodic, wide-armed and erratic motion.
std::vector<StyleSpec> default_styles();

JointSequence generate(const StyleSpec& spec, double duration, double fps, std::uint64_t seed);

// Clock that stands still during pauses.
double gated_time(const StyleSpec& spec, double t);

// Per-video variant of a style: body scale, amplitude, tempo and stage
// position are perturbed deterministically from the seed.
StyleSpec vary_style(const StyleSpec& spec, std::uint64_t seed);

// per_style sequences for each spec, group ids "<name>_<kk>", seeds derived
// from master_seed. Throws DataError when per_style < 3.
std::vector<JointSequence> generate_corpus(const std::vector<StyleSpec>& specs, int per_style, double duration,
                                           double fps, std::uint64_t master_seed);

std::string styles_to_json(const std::vector<StyleSpec>& specs);
std::vector<StyleSpec> styles_from_json(const std::string& text);
std::vector<StyleSpec> load_styles(const std::filesystem::path& path);

}  // namespace laban
