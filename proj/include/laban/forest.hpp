#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace laban {

// Row-major feature matrix with labels and source-video groups.
struct Dataset {
  std::size_t n_features = 0;
  std::vector<double> X;
  std::vector<int> y;
  std::vector<std::string> groups;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;

  std::size_t rows() const { return y.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(X).subspan(i * n_features, n_features);
  }
  // Throws DataError when shapes, labels or values are inconsistent.
  void validate() const;
  Dataset subset(std::span<const std::size_t> indices) const;
};

struct ForestParams {
  int n_trees = 100;
  int max_depth = 0;  // 0 = unlimited
  int min_samples_leaf = 1;
  int features_per_split = 0;  // 0 = ceil(sqrt(n_features))
  bool bootstrap = true;
  std::uint64_t seed = 42;

  void validate() const;
  int resolved_features(std::size_t n_features) const;
  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<double> counts;  // leaves only: weighted class counts
  double cover = 0.0;          // weighted training samples reaching the node

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int leaf_index(std::span<const double> x) const;
  int depth() const;
  // Fills cover of internal nodes from their leaves.
  void recompute_cover();
};

class ForestModel {
 public:
  static constexpr int kFormatVersion = 1;

  ForestModel() = default;
  ForestModel(std::vector<Tree> trees, ForestParams params, std::vector<std::string> feature_names,
              std::vector<std::string> class_names);

  std::size_t n_features() const { return feature_names_.size(); }
  std::size_t n_classes() const { return class_names_.size(); }
  const std::vector<Tree>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& class_names() const { return class_names_; }

  // Leaf class frequencies of one tree.
  std::vector<double> tree_proba(std::size_t tree, std::span<const double> x) const;
  std::vector<double> predict_proba(std::span<const double> x) const;
  // Argmax of predict_proba; ties go to the lowest class index.
  int predict(std::span<const double> x) const;
  std::vector<int> predict_all(const Dataset& data, int threads = 1) const;

  std::string serialize() const;
  static ForestModel deserialize(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static ForestModel load(const std::filesystem::path& path);

 private:
  void check_input(std::span<const double> x) const;

  std::vector<Tree> trees_;
  ForestParams params_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> class_names_;
};

// CART trees on Gini impurity; deterministic in (data, params) for any thread count.
ForestModel train(const Dataset& data, const ForestParams& params, int threads = 1);

// Per-tree stream seed derived from the master seed.
std::uint64_t tree_seed(std::uint64_t seed, std::size_t tree_index);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Folds partition the groups; each class's groups are spread across folds.
std::vector<Fold> stratified_group_kfold(std::span<const int> y, std::span<const std::string> groups, int k,
                                         std::uint64_t seed);

struct CrossValidation {
  std::vector<double> fold_accuracy;
  std::vector<int> out_of_fold;  // prediction for every row
  double mean_accuracy() const;
};

CrossValidation cross_validate(const Dataset& data, const ForestParams& params, const std::vector<Fold>& folds,
                               int threads = 1);

struct GridPoint {
  ForestParams params;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
};

struct GridResult {
  std::size_t best = 0;
  std::vector<GridPoint> points;
  const ForestParams& best_params() const { return points[best].params; }
};

// Cartesian lattice over the listed values; other fields come from `base`.
std::vector<ForestParams> make_grid(const ForestParams& base, const std::vector<int>& n_trees,
                                    const std::vector<int>& max_depth, const std::vector<int>& min_samples_leaf);
std::vector<ForestParams> default_grid(const ForestParams& base);

// Max mean validation accuracy; ties go to fewer trees, then shallower depth.
GridResult grid_search(const Dataset& data, const std::vector<ForestParams>& grid, int k, std::uint64_t seed,
                       int threads = 1);

struct ClassMetrics {
  std::string name;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  bool precision_undefined = false;  // class never predicted
  bool recall_undefined = false;     // class never present
};

struct ClassificationReport {
  std::vector<ClassMetrics> classes;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
};

ClassificationReport metrics(std::span<const int> y_true, std::span<const int> y_pred,
                             const std::vector<std::string>& class_names);

// Fixed-width percentage table with one row per class and an average row.
std::string format_report(const ClassificationReport& report);
std::string report_csv(const ClassificationReport& report);

}  // namespace laban
