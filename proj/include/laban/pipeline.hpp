#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "laban/features.hpp"
#include "laban/floor.hpp"
#include "laban/forest.hpp"
#include "laban/motion_io.hpp"

namespace laban {

inline constexpr const char* kToolVersion = "1.0.0";

// Feature CSV: the 55 feature names, then label, group_id, window_start.
std::string features_to_csv(std::span<const WindowFeatures> rows);
std::vector<WindowFeatures> features_from_csv(const std::string& text);
void save_features(const std::filesystem::path& path, std::span<const WindowFeatures> rows);
std::vector<WindowFeatures> load_features(const std::filesystem::path& path);

// Labels are mapped through class_names when given, otherwise the sorted
// distinct labels become the classes. Unlabeled rows are a DataError.
Dataset to_dataset(std::span<const WindowFeatures> rows, const std::vector<std::string>* class_names = nullptr);

// Repair and featurize every sequence, rows in input order.
std::vector<WindowFeatures> extract_all(std::span<const JointSequence> sequences, const FloorPlane& plane,
                                        const LmaConfig& cfg, int threads = 1);

// Per-window CSV rows of the velocity curve: mean speed over the selected
// joints, averaged over each window.
std::vector<double> velocity_curve(const JointSequence& seq, const LmaConfig& cfg);

std::string sha256_file(const std::filesystem::path& path);

struct RunContext {
  std::string command;
  std::string resolved_config;  // merged flags and config file, as text
  std::filesystem::path out_dir;
  std::uint64_t seed = 42;
  int threads = 1;
};

// Writes out_dir/manifest.json. notes are recorded verbatim.
void write_manifest(const RunContext& ctx, std::span<const std::filesystem::path> inputs,
                    const std::vector<std::string>& notes, const std::string& started);

std::string utc_timestamp();

struct GridSpec {
  std::vector<int> n_trees = {50, 100, 200};
  std::vector<int> max_depth = {8, 12, 0};
  std::vector<int> min_samples_leaf = {1, 5};
  int folds = 3;
};

// Each command writes its outputs and one manifest into ctx.out_dir.

std::size_t cmd_extract(const RunContext& ctx, std::span<const std::filesystem::path> inputs,
                        const std::optional<std::filesystem::path>& cloud, const LmaConfig& cfg, double tau);

FloorPlane cmd_floor(const RunContext& ctx, const std::filesystem::path& cloud, double tau);

std::vector<std::filesystem::path> cmd_synth(const RunContext& ctx, const std::optional<std::filesystem::path>& styles,
                                             int per_style, double duration, double fps,
                                             std::optional<double> noise_sigma);

GridResult cmd_train(const RunContext& ctx, const std::filesystem::path& features, const ForestParams& base,
                     const GridSpec& grid);

ClassificationReport cmd_eval(const RunContext& ctx, const std::filesystem::path& model,
                              const std::filesystem::path& features, bool video_vote);

struct SweepRow {
  std::size_t w = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
};

std::vector<SweepRow> sweep(std::span<const JointSequence> sequences, const std::vector<std::size_t>& sizes,
                            const LmaConfig& cfg, const FloorPlane& plane, const ForestParams& params, int folds,
                            std::uint64_t seed, int threads);

std::vector<SweepRow> cmd_sweep(const RunContext& ctx, std::span<const std::filesystem::path> inputs,
                                const std::vector<std::size_t>& sizes, const LmaConfig& cfg,
                                const ForestParams& params, int folds);

void cmd_explain(const RunContext& ctx, const std::filesystem::path& model, const std::filesystem::path& features,
                 std::size_t top_k, int permutation_repeats);

void cmd_kinplot(const RunContext& ctx, std::span<const std::filesystem::path> inputs, const LmaConfig& cfg);

}  // namespace laban
