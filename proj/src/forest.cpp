#include "laban/forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "laban/errors.hpp"
#include "laban/parallel.hpp"

namespace laban {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::size_t bounded(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = -1.0;  // sum over children of sum_c count_c^2 / n_child; larger is purer
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const ForestParams& params, std::uint64_t seed)
      : data_(data),
        params_(params),
        rng_(seed),
        n_classes_(static_cast<int>(data.class_names.size())),
        mtry_(params.resolved_features(data.n_features)) {}

  Tree build() {
    const std::size_t n = data_.rows();
    weight_.assign(n, 0.0);
    if (params_.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) weight_[bounded(rng_, n)] += 1.0;
    } else {
      std::fill(weight_.begin(), weight_.end(), 1.0);
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (weight_[i] > 0.0) rows.push_back(i);
    }
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t>& rows, int depth) {
    std::vector<double> counts(n_classes_, 0.0);
    for (std::size_t r : rows) counts[data_.y[r]] += weight_[r];
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    tree_.nodes[id].cover = total;

    const int nonzero = static_cast<int>(std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; }));
    const bool depth_limited = params_.max_depth > 0 && depth >= params_.max_depth;
    const Split split = (nonzero <= 1 || depth_limited || total < 2.0 * params_.min_samples_leaf)
                            ? Split{}
                            : find_split(rows, total);
    if (split.feature < 0) {
      tree_.nodes[id].counts = std::move(counts);
      return id;
    }

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (data_.X[r * data_.n_features + split.feature] <= split.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    TreeNode& node = tree_.nodes[id];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  Split find_split(const std::vector<std::size_t>& rows, double total) {
    const std::size_t F = data_.n_features;
    std::vector<std::size_t> order(F);
    std::iota(order.begin(), order.end(), 0);
    Split best;
    std::vector<std::pair<double, std::size_t>> values(rows.size());
    std::vector<double> left(n_classes_), right(n_classes_);
    const double min_leaf = params_.min_samples_leaf;

    for (std::size_t visited = 0; visited < F; ++visited) {
      if (visited >= static_cast<std::size_t>(mtry_) && best.feature >= 0) break;
      std::swap(order[visited], order[visited + bounded(rng_, F - visited)]);
      const std::size_t f = order[visited];

      for (std::size_t i = 0; i < rows.size(); ++i) values[i] = {data_.X[rows[i] * F + f], rows[i]};
      std::sort(values.begin(), values.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (values.front().first == values.back().first) continue;

      std::fill(left.begin(), left.end(), 0.0);
      for (std::size_t c = 0; c < right.size(); ++c) right[c] = 0.0;
      for (const auto& [v, r] : values) right[data_.y[r]] += weight_[r];
      double n_left = 0.0;
      for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const std::size_t r = values[i].second;
        const double w = weight_[r];
        left[data_.y[r]] += w;
        right[data_.y[r]] -= w;
        n_left += w;
        if (!(values[i].first < values[i + 1].first)) continue;
        const double n_right = total - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        double sl = 0.0, sr = 0.0;
        for (int c = 0; c < n_classes_; ++c) {
          sl += left[c] * left[c];
          sr += right[c] * right[c];
        }
        const double score = sl / n_left + sr / n_right;
        const bool better = score > best.score ||
                            (score == best.score && static_cast<int>(f) < best.feature);
        if (better) {
          const double lo = values[i].first;
          const double hi = values[i + 1].first;
          double threshold = lo + (hi - lo) / 2.0;
          if (!(threshold < hi)) threshold = lo;
          best = Split{static_cast<int>(f), threshold, score};
        }
      }
    }
    return best;
  }

  const Dataset& data_;
  const ForestParams& params_;
  std::mt19937_64 rng_;
  int n_classes_;
  int mtry_;
  std::vector<double> weight_;
  Tree tree_;
};

nlohmann::json params_to_json(const ForestParams& p) {
  nlohmann::json j;
  j["n_trees"] = p.n_trees;
  j["max_depth"] = p.max_depth;
  j["min_samples_leaf"] = p.min_samples_leaf;
  j["features_per_split"] = p.features_per_split;
  j["bootstrap"] = p.bootstrap;
  j["seed"] = p.seed;
  return j;
}

ForestParams params_from_json(const nlohmann::json& j) {
  ForestParams p;
  p.n_trees = j.at("n_trees").get<int>();
  p.max_depth = j.at("max_depth").get<int>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  p.features_per_split = j.at("features_per_split").get<int>();
  p.bootstrap = j.at("bootstrap").get<bool>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

}  // namespace

void Dataset::validate() const {
  if (n_features == 0) throw DataError("dataset has no features");
  if (X.size() != rows() * n_features) throw DataError("feature matrix shape does not match label count");
  if (groups.size() != rows()) throw DataError("group count does not match label count");
  if (feature_names.size() != n_features) throw DataError("feature name count does not match feature count");
  for (int label : y) {
    if (label < 0 || label >= static_cast<int>(class_names.size())) throw DataError("label outside class list");
  }
  for (double v : X) {
    if (!std::isfinite(v)) throw DataError("feature matrix contains non-finite values");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.n_features = n_features;
  out.feature_names = feature_names;
  out.class_names = class_names;
  out.X.reserve(indices.size() * n_features);
  for (std::size_t i : indices) {
    const auto r = row(i);
    out.X.insert(out.X.end(), r.begin(), r.end());
    out.y.push_back(y[i]);
    out.groups.push_back(groups[i]);
  }
  return out;
}

void ForestParams::validate() const {
  if (n_trees < 1) throw DataError("n_trees must be >= 1");
  if (max_depth < 0) throw DataError("max_depth must be >= 1, or 0 for unlimited");
  if (min_samples_leaf < 1) throw DataError("min_samples_leaf must be >= 1");
  if (features_per_split < 0) throw DataError("features_per_split must be >= 1, or 0 for sqrt");
}

int ForestParams::resolved_features(std::size_t n_features) const {
  const int f = features_per_split > 0 ? features_per_split
                                       : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_features))));
  return std::clamp(f, 1, static_cast<int>(n_features));
}

int Tree::leaf_index(std::span<const double> x) const {
  int id = 0;
  while (!nodes[id].is_leaf()) {
    const TreeNode& n = nodes[id];
    id = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return id;
}

int Tree::depth() const {
  std::vector<std::pair<int, int>> stack{{0, 0}};
  int deepest = 0;
  while (!stack.empty()) {
    const auto [id, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes[id].is_leaf()) {
      stack.emplace_back(nodes[id].left, d + 1);
      stack.emplace_back(nodes[id].right, d + 1);
    }
  }
  return deepest;
}

void Tree::recompute_cover() {
  // Children always follow their parent, so a reverse sweep sees them first.
  for (std::size_t i = nodes.size(); i-- > 0;) {
    TreeNode& n = nodes[i];
    if (n.is_leaf()) {
      n.cover = std::accumulate(n.counts.begin(), n.counts.end(), 0.0);
    } else {
      n.cover = nodes[n.left].cover + nodes[n.right].cover;
    }
  }
}

ForestModel::ForestModel(std::vector<Tree> trees, ForestParams params, std::vector<std::string> feature_names,
                         std::vector<std::string> class_names)
    : trees_(std::move(trees)),
      params_(params),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)) {}

void ForestModel::check_input(std::span<const double> x) const {
  if (x.size() != n_features()) {
    throw DataError("input has " + std::to_string(x.size()) + " features, model expects " +
                    std::to_string(n_features()));
  }
}

std::vector<double> ForestModel::tree_proba(std::size_t tree, std::span<const double> x) const {
  check_input(x);
  const TreeNode& leaf = trees_[tree].nodes[trees_[tree].leaf_index(x)];
  std::vector<double> p(leaf.counts);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return p;
}

std::vector<double> ForestModel::predict_proba(std::span<const double> x) const {
  check_input(x);
  std::vector<double> p(n_classes(), 0.0);
  for (const Tree& t : trees_) {
    const TreeNode& leaf = t.nodes[t.leaf_index(x)];
    const double total = std::accumulate(leaf.counts.begin(), leaf.counts.end(), 0.0);
    for (std::size_t c = 0; c < p.size(); ++c) p[c] += leaf.counts[c] / total;
  }
  for (double& v : p) v /= static_cast<double>(trees_.size());
  return p;
}

int ForestModel::predict(std::span<const double> x) const {
  const auto p = predict_proba(x);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::vector<int> ForestModel::predict_all(const Dataset& data, int threads) const {
  std::vector<int> out(data.rows());
  parallel_for(data.rows(), threads, [&](std::size_t i) { out[i] = predict(data.row(i)); });
  return out;
}

std::string ForestModel::serialize() const {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["params"] = params_to_json(params_);
  j["class_names"] = class_names_;
  j["feature_names"] = feature_names_;
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& t : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : t.nodes) {
      if (n.is_leaf()) {
        nlohmann::json counts = nlohmann::json::array();
        for (double c : n.counts) counts.push_back(std::llround(c));
        nodes.push_back({{"c", counts}});
      } else {
        nodes.push_back({{"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right}});
      }
    }
    trees.push_back(std::move(nodes));
  }
  j["trees"] = std::move(trees);
  return j.dump() + "\n";
}

ForestModel ForestModel::deserialize(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const int version = j.at("format_version").get<int>();
    if (version != kFormatVersion) throw DataError("unsupported model format_version " + std::to_string(version));
    const ForestParams params = params_from_json(j.at("params"));
    auto class_names = j.at("class_names").get<std::vector<std::string>>();
    auto feature_names = j.at("feature_names").get<std::vector<std::string>>();
    const int F = static_cast<int>(feature_names.size());
    const std::size_t C = class_names.size();
    std::vector<Tree> trees;
    for (const auto& jt : j.at("trees")) {
      Tree t;
      const int n = static_cast<int>(jt.size());
      for (const auto& jn : jt) {
        TreeNode node;
        if (jn.contains("c")) {
          for (const auto& c : jn.at("c")) node.counts.push_back(c.get<double>());
          if (node.counts.size() != C) throw DataError("leaf class count does not match class list");
          const double total = std::accumulate(node.counts.begin(), node.counts.end(), 0.0);
          if (!(total >= params.min_samples_leaf) || !(total > 0)) throw DataError("leaf has too few samples");
        } else {
          node.feature = jn.at("f").get<int>();
          node.threshold = jn.at("t").get<double>();
          node.left = jn.at("l").get<int>();
          node.right = jn.at("r").get<int>();
          const int self = static_cast<int>(t.nodes.size());
          if (node.feature < 0 || node.feature >= F) throw DataError("split feature index out of range");
          if (node.left <= self || node.right <= self || node.left >= n || node.right >= n) {
            throw DataError("invalid child index");
          }
        }
        t.nodes.push_back(std::move(node));
      }
      if (t.nodes.empty()) throw DataError("empty tree");
      t.recompute_cover();
      trees.push_back(std::move(t));
    }
    if (trees.empty()) throw DataError("model has no trees");
    return ForestModel(std::move(trees), params, std::move(feature_names), std::move(class_names));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void ForestModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << serialize();
}

ForestModel ForestModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return deserialize(buffer.str());
}

std::uint64_t tree_seed(std::uint64_t seed, std::size_t tree_index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(0xA5A5A5A5ULL + tree_index));
}

ForestModel train(const Dataset& data, const ForestParams& params, int threads) {
  params.validate();
  data.validate();
  if (data.rows() == 0) throw DataError("cannot train on an empty dataset");
  std::vector<Tree> trees(static_cast<std::size_t>(params.n_trees));
  parallel_for(trees.size(), threads, [&](std::size_t i) {
    trees[i] = TreeBuilder(data, params, tree_seed(params.seed, i)).build();
  });
  return ForestModel(std::move(trees), params, data.feature_names, data.class_names);
}

std::vector<Fold> stratified_group_kfold(std::span<const int> y, std::span<const std::string> groups, int k,
                                         std::uint64_t seed) {
  if (k < 2) throw DataError("k must be >= 2");
  if (y.size() != groups.size()) throw DataError("labels and groups differ in length");

  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < y.size(); ++i) members[groups[i]].push_back(i);
  const int n_classes = y.empty() ? 0 : *std::max_element(y.begin(), y.end()) + 1;

  std::vector<std::set<std::string>> groups_with_class(n_classes);
  std::vector<std::vector<std::string>> groups_by_majority(n_classes);
  for (const auto& [g, rows] : members) {
    std::vector<std::size_t> counts(n_classes, 0);
    for (std::size_t r : rows) {
      ++counts[y[r]];
      groups_with_class[y[r]].insert(g);
    }
    const int majority = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    groups_by_majority[majority].push_back(g);
  }
  for (int c = 0; c < n_classes; ++c) {
    const auto present = groups_with_class[c].size();
    if (present > 0 && present < static_cast<std::size_t>(k)) {
      throw DataError("class " + std::to_string(c) + " appears in only " + std::to_string(present) +
                      " group(s); " + std::to_string(k) + "-fold grouped CV needs at least " + std::to_string(k));
    }
  }

  std::mt19937_64 rng(splitmix64(seed));
  std::vector<std::vector<std::string>> fold_groups(k);
  std::vector<std::size_t> fold_rows(k, 0);
  for (int c = 0; c < n_classes; ++c) {
    auto& gs = groups_by_majority[c];
    for (std::size_t i = gs.size(); i > 1; --i) std::swap(gs[i - 1], gs[bounded(rng, i)]);
    std::vector<std::size_t> class_groups_in_fold(k, 0);
    for (const auto& g : gs) {
      int best = 0;
      for (int f = 1; f < k; ++f) {
        const auto key = [&](int i) { return std::make_pair(class_groups_in_fold[i], fold_rows[i]); };
        if (key(f) < key(best)) best = f;
      }
      fold_groups[best].push_back(g);
      ++class_groups_in_fold[best];
      fold_rows[best] += members[g].size();
    }
  }

  std::vector<Fold> folds(k);
  std::vector<int> fold_of(y.size(), -1);
  for (int f = 0; f < k; ++f) {
    for (const auto& g : fold_groups[f]) {
      for (std::size_t r : members[g]) fold_of[r] = f;
    }
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (int f = 0; f < k; ++f) (fold_of[i] == f ? folds[f].test : folds[f].train).push_back(i);
  }
  return folds;
}

double CrossValidation::mean_accuracy() const {
  if (fold_accuracy.empty()) return 0.0;
  return std::accumulate(fold_accuracy.begin(), fold_accuracy.end(), 0.0) / static_cast<double>(fold_accuracy.size());
}

CrossValidation cross_validate(const Dataset& data, const ForestParams& params, const std::vector<Fold>& folds,
                               int threads) {
  CrossValidation cv;
  cv.out_of_fold.assign(data.rows(), -1);
  for (const Fold& fold : folds) {
    if (fold.test.empty()) throw DataError("cross-validation fold has no test rows");
    const ForestModel model = train(data.subset(fold.train), params, threads);
    std::vector<int> pred(fold.test.size());
    parallel_for(fold.test.size(), threads, [&](std::size_t i) { pred[i] = model.predict(data.row(fold.test[i])); });
    std::size_t correct = 0;
    for (std::size_t i = 0; i < fold.test.size(); ++i) {
      cv.out_of_fold[fold.test[i]] = pred[i];
      correct += pred[i] == data.y[fold.test[i]] ? 1 : 0;
    }
    cv.fold_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(fold.test.size()));
  }
  return cv;
}

std::vector<ForestParams> make_grid(const ForestParams& base, const std::vector<int>& n_trees,
                                    const std::vector<int>& max_depth, const std::vector<int>& min_samples_leaf) {
  std::vector<ForestParams> grid;
  for (int t : n_trees) {
    for (int d : max_depth) {
      for (int l : min_samples_leaf) {
        ForestParams p = base;
        p.n_trees = t;
        p.max_depth = d;
        p.min_samples_leaf = l;
        grid.push_back(p);
      }
    }
  }
  return grid;
}

std::vector<ForestParams> default_grid(const ForestParams& base) {
  return make_grid(base, {50, 100, 200}, {8, 12, 0}, {1, 5});
}

GridResult grid_search(const Dataset& data, const std::vector<ForestParams>& grid, int k, std::uint64_t seed,
                       int threads) {
  if (grid.empty()) throw DataError("parameter grid is empty");
  data.validate();
  const auto folds = stratified_group_kfold(data.y, data.groups, k, seed);
  GridResult result;
  for (const auto& params : grid) {
    const auto cv = cross_validate(data, params, folds, threads);
    result.points.push_back({params, cv.fold_accuracy, cv.mean_accuracy()});
  }
  const auto depth_rank = [](int d) { return d == 0 ? std::numeric_limits<int>::max() : d; };
  for (std::size_t i = 1; i < result.points.size(); ++i) {
    const auto& a = result.points[i];
    const auto& b = result.points[result.best];
    const bool better =
        a.mean_accuracy > b.mean_accuracy ||
        (a.mean_accuracy == b.mean_accuracy &&
         (a.params.n_trees < b.params.n_trees ||
          (a.params.n_trees == b.params.n_trees && depth_rank(a.params.max_depth) < depth_rank(b.params.max_depth))));
    if (better) result.best = i;
  }
  return result;
}

ClassificationReport metrics(std::span<const int> y_true, std::span<const int> y_pred,
                             const std::vector<std::string>& class_names) {
  if (y_true.size() != y_pred.size()) throw DataError("y_true and y_pred differ in length");
  const std::size_t C = class_names.size();
  ClassificationReport rep;
  rep.confusion.assign(C, std::vector<std::size_t>(C, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if (t < 0 || p < 0 || t >= static_cast<int>(C) || p >= static_cast<int>(C)) {
      throw DataError("label outside class list");
    }
    ++rep.confusion[t][p];
    correct += t == p ? 1 : 0;
  }
  rep.accuracy = y_true.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(y_true.size());
  for (std::size_t c = 0; c < C; ++c) {
    ClassMetrics m;
    m.name = class_names[c];
    const double tp = static_cast<double>(rep.confusion[c][c]);
    double predicted = 0.0, actual = 0.0;
    for (std::size_t o = 0; o < C; ++o) {
      predicted += static_cast<double>(rep.confusion[o][c]);
      actual += static_cast<double>(rep.confusion[c][o]);
    }
    m.support = static_cast<std::size_t>(actual);
    m.precision_undefined = predicted == 0.0;
    m.recall_undefined = actual == 0.0;
    m.precision = m.precision_undefined ? 0.0 : tp / predicted;
    m.recall = m.recall_undefined ? 0.0 : tp / actual;
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    rep.macro_precision += m.precision;
    rep.macro_recall += m.recall;
    rep.macro_f1 += m.f1;
    rep.classes.push_back(m);
  }
  if (C > 0) {
    rep.macro_precision /= static_cast<double>(C);
    rep.macro_recall /= static_cast<double>(C);
    rep.macro_f1 /= static_cast<double>(C);
  }
  return rep;
}

std::string format_report(const ClassificationReport& report) {
  std::size_t width = 7;
  for (const auto& c : report.classes) width = std::max(width, c.name.size());
  std::ostringstream out;
  char buf[128];
  auto line = [&](const std::string& name, double p, double r, double f, const char* note) {
    std::snprintf(buf, sizeof(buf), "  %9.2f  %9.2f  %9.2f%s\n", 100.0 * p, 100.0 * r, 100.0 * f, note);
    out << name << std::string(width - name.size(), ' ') << buf;
  };
  out << "Style" << std::string(width - 5, ' ') << "  Prec. (%)   Rec. (%)    F1 (%)\n";
  out << std::string(width + 33, '-') << '\n';
  for (const auto& c : report.classes) {
    line(c.name, c.precision, c.recall, c.f1, c.precision_undefined ? "  (never predicted)" : "");
  }
  out << std::string(width + 33, '-') << '\n';
  line("Average", report.macro_precision, report.macro_recall, report.macro_f1, "");
  std::snprintf(buf, sizeof(buf), "Accuracy: %.2f%%\n", 100.0 * report.accuracy);
  out << buf;
  return out.str();
}

std::string report_csv(const ClassificationReport& report) {
  std::ostringstream out;
  char buf[160];
  out << "class,precision,recall,f1,support,precision_undefined,recall_undefined\n";
  for (const auto& c : report.classes) {
    std::snprintf(buf, sizeof(buf), ",%.9g,%.9g,%.9g,%zu,%d,%d\n", c.precision, c.recall, c.f1, c.support,
                  c.precision_undefined ? 1 : 0, c.recall_undefined ? 1 : 0);
    out << c.name << buf;
  }
  std::snprintf(buf, sizeof(buf), "macro,%.9g,%.9g,%.9g,,,\n", report.macro_precision, report.macro_recall,
                report.macro_f1);
  out << buf;
  std::snprintf(buf, sizeof(buf), "accuracy,%.9g,,,,,\n", report.accuracy);
  out << buf;
  return out.str();
}

}  // namespace laban
