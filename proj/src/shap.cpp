#include "laban/shap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "laban/errors.hpp"
#include "laban/parallel.hpp"

namespace laban {

namespace {

struct PathElement {
  int feature = -1;
  double zero_fraction = 0.0;
  double one_fraction = 0.0;
  double weight = 0.0;
};

void extend_path(std::vector<PathElement>& path, int depth, double zero_fraction, double one_fraction,
                 int feature) {
  path[depth] = {feature, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0};
  for (int i = depth - 1; i >= 0; --i) {
    path[i + 1].weight += one_fraction * path[i].weight * (i + 1) / static_cast<double>(depth + 1);
    path[i].weight = zero_fraction * path[i].weight * (depth - i) / static_cast<double>(depth + 1);
  }
}

void unwind_path(std::vector<PathElement>& path, int depth, int index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next = path[depth].weight;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0.0) {
      const double tmp = path[i].weight;
      path[i].weight = next * (depth + 1) / ((i + 1) * one);
      next = tmp - path[i].weight * zero * (depth - i) / static_cast<double>(depth + 1);
    } else {
      path[i].weight = path[i].weight * (depth + 1) / (zero * (depth - i));
    }
  }
  for (int i = index; i < depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
}

double unwound_sum(const std::vector<PathElement>& path, int depth, int index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next = path[depth].weight;
  double total = 0.0;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0.0) {
      const double tmp = next * (depth + 1) / ((i + 1) * one);
      total += tmp;
      next = path[i].weight - tmp * zero * (depth - i) / static_cast<double>(depth + 1);
    } else {
      total += path[i].weight / zero * (depth + 1) / static_cast<double>(depth - i);
    }
  }
  return total;
}

class TreeExplainer {
 public:
  TreeExplainer(const Tree& tree, std::span<const double> x, std::vector<std::vector<double>>& phi)
      : tree_(tree), x_(x), phi_(phi) {}

  void run() {
    const int max_depth = tree_.depth() + 2;
    std::vector<PathElement> root_path(static_cast<std::size_t>(max_depth + 1));
    recurse(0, root_path, 0, 1.0, 1.0, -1);
  }

 private:
  void recurse(int node_id, const std::vector<PathElement>& parent_path, int depth, double zero_fraction,
               double one_fraction, int feature) {
    std::vector<PathElement> path = parent_path;
    extend_path(path, depth, zero_fraction, one_fraction, feature);
    const TreeNode& node = tree_.nodes[node_id];

    if (node.is_leaf()) {
      const double total = std::accumulate(node.counts.begin(), node.counts.end(), 0.0);
      for (int i = 1; i <= depth; ++i) {
        const double w = unwound_sum(path, depth, i);
        const PathElement& el = path[i];
        const double scale = w * (el.one_fraction - el.zero_fraction);
        for (std::size_t c = 0; c < phi_.size(); ++c) phi_[c][el.feature] += scale * node.counts[c] / total;
      }
      return;
    }

    const bool go_left = x_[node.feature] <= node.threshold;
    const int hot = go_left ? node.left : node.right;
    const int cold = go_left ? node.right : node.left;
    double incoming_zero = 1.0;
    double incoming_one = 1.0;
    for (int k = 1; k <= depth; ++k) {
      if (path[k].feature == node.feature) {
        incoming_zero = path[k].zero_fraction;
        incoming_one = path[k].one_fraction;
        unwind_path(path, depth, k);
        --depth;
        break;
      }
    }
    const double hot_fraction = tree_.nodes[hot].cover / node.cover;
    const double cold_fraction = tree_.nodes[cold].cover / node.cover;
    recurse(hot, path, depth + 1, hot_fraction * incoming_zero, incoming_one, node.feature);
    recurse(cold, path, depth + 1, cold_fraction * incoming_zero, 0.0, node.feature);
  }

  const Tree& tree_;
  std::span<const double> x_;
  std::vector<std::vector<double>>& phi_;
};

// E[f(x) | features in `known` fixed to x], following cover elsewhere.
void conditional_expectation(const Tree& tree, int node_id, std::span<const double> x,
                             const std::vector<char>& known, double weight, std::vector<double>& out) {
  const TreeNode& node = tree.nodes[node_id];
  if (node.is_leaf()) {
    const double total = std::accumulate(node.counts.begin(), node.counts.end(), 0.0);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += weight * node.counts[c] / total;
    return;
  }
  if (known[node.feature]) {
    conditional_expectation(tree, x[node.feature] <= node.threshold ? node.left : node.right, x, known, weight, out);
    return;
  }
  conditional_expectation(tree, node.left, x, known, weight * tree.nodes[node.left].cover / node.cover, out);
  conditional_expectation(tree, node.right, x, known, weight * tree.nodes[node.right].cover / node.cover, out);
}

std::vector<double> model_expectation(const ForestModel& model, std::span<const double> x,
                                      const std::vector<char>& known) {
  std::vector<double> out(model.n_classes(), 0.0);
  for (const Tree& t : model.trees()) conditional_expectation(t, 0, x, known, 1.0, out);
  for (double& v : out) v /= static_cast<double>(model.trees().size());
  return out;
}

void check_cover(const Tree& tree) {
  for (const auto& n : tree.nodes) {
    if (!(n.cover > 0.0)) throw DataError("model lacks training cover counts");
  }
}

std::vector<RankedFeature> rank(std::vector<double> score, const std::vector<std::string>& names) {
  std::vector<RankedFeature> out(score.size());
  for (std::size_t i = 0; i < score.size(); ++i) out[i] = {i, names[i], score[i], 0};
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedFeature& a, const RankedFeature& b) { return a.mean_abs_phi > b.mean_abs_phi; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

void check_schema(std::span<const ShapExplanation> explanations) {
  if (explanations.empty()) throw DataError("no explanations to summarise");
  const auto& first = explanations.front();
  for (const auto& e : explanations) {
    if (e.feature_names != first.feature_names || e.class_names != first.class_names ||
        e.phi.size() != first.class_names.size()) {
      throw DataError("explanations do not share one schema");
    }
  }
}

}  // namespace

std::vector<std::vector<double>> tree_shap_single(const Tree& tree, std::size_t n_features, std::size_t n_classes,
                                                  std::span<const double> x) {
  check_cover(tree);
  std::vector<std::vector<double>> phi(n_classes, std::vector<double>(n_features, 0.0));
  TreeExplainer(tree, x, phi).run();
  return phi;
}

std::vector<double> expected_value(const Tree& tree, std::size_t n_classes) {
  std::vector<double> out(n_classes, 0.0);
  const double root = tree.nodes[0].cover;
  for (const auto& n : tree.nodes) {
    if (!n.is_leaf()) continue;
    const double total = std::accumulate(n.counts.begin(), n.counts.end(), 0.0);
    for (std::size_t c = 0; c < n_classes; ++c) out[c] += (n.cover / root) * n.counts[c] / total;
  }
  return out;
}

ShapExplanation tree_shap(const ForestModel& model, std::span<const double> x) {
  if (x.size() != model.n_features()) throw DataError("instance length does not match the model");
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError("instance contains non-finite values");
  }
  const std::size_t C = model.n_classes();
  const std::size_t F = model.n_features();
  ShapExplanation e;
  e.phi.assign(C, std::vector<double>(F, 0.0));
  e.base.assign(C, 0.0);
  e.x.assign(x.begin(), x.end());
  e.class_names = model.class_names();
  e.feature_names = model.feature_names();
  const double n_trees = static_cast<double>(model.trees().size());
  for (const Tree& t : model.trees()) {
    const auto phi = tree_shap_single(t, F, C, x);
    const auto base = expected_value(t, C);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t i = 0; i < F; ++i) e.phi[c][i] += phi[c][i] / n_trees;
      e.base[c] += base[c] / n_trees;
    }
  }
  return e;
}

std::vector<std::vector<double>> brute_shap(const ForestModel& model, std::span<const double> x) {
  if (x.size() != model.n_features()) throw DataError("instance length does not match the model");
  std::set<int> used_set;
  for (const Tree& t : model.trees()) {
    check_cover(t);
    for (const auto& n : t.nodes) {
      if (!n.is_leaf()) used_set.insert(n.feature);
    }
  }
  const std::vector<int> used(used_set.begin(), used_set.end());
  const std::size_t M = used.size();
  if (M > kMaxBruteFeatures) {
    throw DataError("brute-force Shapley values support at most " + std::to_string(kMaxBruteFeatures) +
                    " features, model uses " + std::to_string(M));
  }
  const std::size_t C = model.n_classes();
  std::vector<std::vector<double>> phi(C, std::vector<double>(model.n_features(), 0.0));
  if (M == 0) return phi;

  // value[mask] for every subset of the used features.
  const std::size_t subsets = std::size_t{1} << M;
  std::vector<std::vector<double>> value(subsets);
  std::vector<char> known(model.n_features(), 0);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    for (std::size_t b = 0; b < M; ++b) known[used[b]] = (mask >> b) & 1U;
    value[mask] = model_expectation(model, x, known);
  }

  std::vector<double> factorial(M + 1, 1.0);
  for (std::size_t i = 1; i <= M; ++i) factorial[i] = factorial[i - 1] * static_cast<double>(i);
  for (std::size_t b = 0; b < M; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      if (mask & bit) continue;
      const auto s = static_cast<std::size_t>(__builtin_popcountll(mask));
      const double w = factorial[s] * factorial[M - s - 1] / factorial[M];
      for (std::size_t c = 0; c < C; ++c) phi[c][used[b]] += w * (value[mask | bit][c] - value[mask][c]);
    }
  }
  return phi;
}

FeatureImportance permutation_importance(const ForestModel& model, const Dataset& data, int n_repeats,
                                         std::uint64_t seed, int threads) {
  if (data.rows() == 0) throw DataError("permutation importance needs data");
  if (n_repeats < 1) throw DataError("n_repeats must be >= 1");
  if (data.n_features != model.n_features()) throw DataError("dataset does not match the model schema");
  const std::size_t N = data.rows();
  const std::size_t F = data.n_features;

  auto accuracy_of = [&](const Dataset& d) {
    const auto pred = model.predict_all(d, 1);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < N; ++i) ok += pred[i] == d.y[i] ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(N);
  };
  const double baseline = accuracy_of(data);

  FeatureImportance out;
  out.mean.assign(F, 0.0);
  out.std.assign(F, 0.0);
  parallel_for(F, threads, [&](std::size_t f) {
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (f + 1)));
    Dataset shuffled = data;
    std::vector<double> drops;
    for (int r = 0; r < n_repeats; ++r) {
      std::vector<std::size_t> perm(N);
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i = N; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
      for (std::size_t i = 0; i < N; ++i) shuffled.X[i * F + f] = data.X[perm[i] * F + f];
      drops.push_back(baseline - accuracy_of(shuffled));
    }
    const double m = std::accumulate(drops.begin(), drops.end(), 0.0) / static_cast<double>(drops.size());
    double v = 0.0;
    for (double d : drops) v += (d - m) * (d - m);
    out.mean[f] = m;
    out.std[f] = std::sqrt(v / static_cast<double>(drops.size()));
  });
  return out;
}

std::vector<RankedFeature> summary_rank(std::span<const ShapExplanation> explanations) {
  check_schema(explanations);
  const auto& first = explanations.front();
  std::vector<double> score(first.feature_names.size(), 0.0);
  for (const auto& e : explanations) {
    for (const auto& per_class : e.phi) {
      for (std::size_t i = 0; i < score.size(); ++i) score[i] += std::abs(per_class[i]);
    }
  }
  const double n = static_cast<double>(explanations.size() * first.class_names.size());
  for (double& s : score) s /= n;
  return rank(std::move(score), first.feature_names);
}

std::vector<RankedFeature> summary_rank_class(std::span<const ShapExplanation> explanations, std::size_t cls) {
  check_schema(explanations);
  const auto& first = explanations.front();
  if (cls >= first.class_names.size()) throw DataError("class index out of range");
  std::vector<double> score(first.feature_names.size(), 0.0);
  for (const auto& e : explanations) {
    for (std::size_t i = 0; i < score.size(); ++i) score[i] += std::abs(e.phi[cls][i]);
  }
  for (double& s : score) s /= static_cast<double>(explanations.size());
  return rank(std::move(score), first.feature_names);
}

}  // namespace laban
