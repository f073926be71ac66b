#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "laban/forest.hpp"

namespace laban {

// Attributions of one instance. phi[c][i] is feature i's contribution to the
// probability of class c; base[c] + sum_i phi[c][i] == predict_proba(x)[c].
struct ShapExplanation {
  std::vector<std::vector<double>> phi;
  std::vector<double> base;
  std::vector<double> x;
  std::vector<std::string> class_names;
  std::vector<std::string> feature_names;
};

// Path-dependent Tree SHAP: conditional expectations follow training cover.
ShapExplanation tree_shap(const ForestModel& model, std::span<const double> x);

// Tree SHAP for a single tree, phi[c][i] against that tree's leaf frequencies.
std::vector<std::vector<double>> tree_shap_single(const Tree& tree, std::size_t n_features, std::size_t n_classes,
                                                  std::span<const double> x);

// Cover-weighted expected leaf distribution of one tree.
std::vector<double> expected_value(const Tree& tree, std::size_t n_classes);

// Exact Shapley values by subset enumeration over the features the model
// splits on. Throws DataError above kMaxBruteFeatures.
inline constexpr std::size_t kMaxBruteFeatures = 12;
std::vector<std::vector<double>> brute_shap(const ForestModel& model, std::span<const double> x);

struct FeatureImportance {
  std::vector<double> mean;
  std::vector<double> std;
};

// Accuracy drop after shuffling each column, averaged over n_repeats.
FeatureImportance permutation_importance(const ForestModel& model, const Dataset& data, int n_repeats,
                                         std::uint64_t seed, int threads = 1);

struct RankedFeature {
  std::size_t index = 0;
  std::string name;
  double mean_abs_phi = 0.0;
  std::size_t rank = 0;  // 1-based
};

// Mean |phi| over instances and classes, descending; ties keep index order.
std::vector<RankedFeature> summary_rank(std::span<const ShapExplanation> explanations);
// Same, restricted to one class.
std::vector<RankedFeature> summary_rank_class(std::span<const ShapExplanation> explanations, std::size_t cls);

}  // namespace laban
