#include "laban/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "laban/errors.hpp"
#include "laban/kinematics.hpp"
#include "laban/parallel.hpp"
#include "laban/shap.hpp"
#include "laban/svg.hpp"
#include "laban/synth.hpp"

namespace laban {

namespace fs = std::filesystem;

namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

void check_field(const std::string& s, const char* what) {
  if (s.find_first_of(",\"\r\n") != std::string::npos) {
    throw DataError(std::string(what) + " '" + s + "' cannot contain commas, quotes or newlines");
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

void prepare_out(const RunContext& ctx) {
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec) throw DataError("cannot create output directory " + ctx.out_dir.string() + ": " + ec.message());
}

// Prefixes errors with the offending file.
template <class Fn>
auto with_file(const fs::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<JointSequence> load_all(std::span<const fs::path> inputs, int threads) {
  std::vector<std::optional<JointSequence>> slots(inputs.size());
  parallel_for(inputs.size(), threads, [&](std::size_t i) {
    slots[i] = with_file(inputs[i], [&] { return load_sequence(inputs[i]); });
  });
  std::vector<JointSequence> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<std::string> feature_name_list() { return {kFeatureNames.begin(), kFeatureNames.end()}; }

void check_schema(const ForestModel& model) {
  if (model.feature_names() != feature_name_list()) {
    throw DataError("schema mismatch: model features differ from the canonical feature layout");
  }
}

std::string class_file_name(const std::string& cls) {
  std::string out;
  for (char c : cls) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

std::string summary_csv(const std::vector<RankedFeature>& ranked, std::size_t top_k) {
  std::string out = "feature,mean_abs_phi,rank\n";
  for (std::size_t i = 0; i < std::min(top_k, ranked.size()); ++i) {
    out += ranked[i].name + "," + fmt9(ranked[i].mean_abs_phi) + "," + std::to_string(ranked[i].rank) + "\n";
  }
  return out;
}

}  // namespace

std::string features_to_csv(std::span<const WindowFeatures> rows) {
  std::string out;
  for (const auto& name : kFeatureNames) {
    out += name;
    out += ',';
  }
  out += "label,group_id,window_start\n";
  for (const auto& r : rows) {
    for (double v : r.values) {
      out += fmt9(v);
      out += ',';
    }
    const std::string label = r.label.value_or("");
    check_field(label, "label");
    check_field(r.group_id, "group_id");
    out += label + "," + r.group_id + "," + std::to_string(r.window_start) + "\n";
  }
  return out;
}

std::vector<WindowFeatures> features_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty feature file", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  std::vector<std::string> expected = feature_name_list();
  expected.insert(expected.end(), {"label", "group_id", "window_start"});
  if (header != expected) {
    std::size_t col = 0;
    while (col < header.size() && col < expected.size() && header[col] == expected[col]) ++col;
    const std::string got = col < header.size() ? header[col] : "<missing>";
    const std::string want = col < expected.size() ? expected[col] : "<end of row>";
    throw ParseError("schema mismatch at column " + std::to_string(col + 1) + ": got '" + got + "', expected '" +
                         want + "'",
                     line_no);
  }
  std::vector<WindowFeatures> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != expected.size()) {
      throw ParseError("row has " + std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(expected.size()),
                       line_no);
    }
    WindowFeatures wf;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const char* begin = fields[i].c_str();
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (fields[i].empty() || *end != '\0' || !std::isfinite(v)) {
        throw ParseError("column '" + expected[i] + "' is not a finite number: '" + fields[i] + "'", line_no);
      }
      wf.values[i] = v;
    }
    if (!fields[kFeatureCount].empty()) wf.label = fields[kFeatureCount];
    wf.group_id = fields[kFeatureCount + 1];
    const std::string& ws = fields[kFeatureCount + 2];
    if (ws.empty() || ws.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("window_start must be a non-negative integer", line_no);
    }
    wf.window_start = std::stoull(ws);
    rows.push_back(std::move(wf));
  }
  return rows;
}

void save_features(const fs::path& path, std::span<const WindowFeatures> rows) {
  write_text(path, features_to_csv(rows));
}

std::vector<WindowFeatures> load_features(const fs::path& path) {
  return with_file(path, [&] { return features_from_csv(read_text(path)); });
}

Dataset to_dataset(std::span<const WindowFeatures> rows, const std::vector<std::string>* class_names) {
  Dataset d;
  d.n_features = kFeatureCount;
  d.feature_names = feature_name_list();
  if (class_names) {
    d.class_names = *class_names;
  } else {
    std::set<std::string> labels;
    for (const auto& r : rows) {
      if (r.label) labels.insert(*r.label);
    }
    d.class_names.assign(labels.begin(), labels.end());
  }
  std::map<std::string, int> index;
  for (std::size_t c = 0; c < d.class_names.size(); ++c) index[d.class_names[c]] = static_cast<int>(c);
  d.X.reserve(rows.size() * kFeatureCount);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!r.label) throw DataError("row " + std::to_string(i + 1) + " has no label");
    const auto it = index.find(*r.label);
    if (it == index.end()) throw DataError("label '" + *r.label + "' is not a known class");
    d.X.insert(d.X.end(), r.values.begin(), r.values.end());
    d.y.push_back(it->second);
    d.groups.push_back(r.group_id);
  }
  d.validate();
  return d;
}

std::vector<WindowFeatures> extract_all(std::span<const JointSequence> sequences, const FloorPlane& plane,
                                        const LmaConfig& cfg, int threads) {
  std::vector<std::vector<WindowFeatures>> parts(sequences.size());
  parallel_for(sequences.size(), threads, [&](std::size_t i) {
    parts[i] = assemble_features(validate_and_repair(sequences[i]), plane, cfg);
  });
  std::vector<WindowFeatures> out;
  for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return out;
}

std::vector<double> velocity_curve(const JointSequence& seq, const LmaConfig& cfg) {
  cfg.validate(seq.skeleton());
  const std::size_t T = seq.frame_count();
  std::vector<double> speed(T, 0.0);
  for (Role r : cfg.selected) {
    const auto mags = derivative(seq.track(r), 1, seq.dt()).magnitudes();
    for (std::size_t t = 0; t < T; ++t) speed[t] += mags[t];
  }
  for (double& s : speed) s /= static_cast<double>(cfg.selected.size());
  std::vector<double> out;
  for (const auto& w : windows(T, cfg.window)) {
    double sum = 0.0;
    for (std::size_t t = w.begin; t < w.end; ++t) sum += speed[t];
    out.push_back(sum / static_cast<double>(w.size()));
  }
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw InvariantError("sha256 initialisation failed");
  }
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const RunContext& ctx, std::span<const fs::path> inputs, const std::vector<std::string>& notes,
                    const std::string& started) {
  nlohmann::ordered_json m;
  m["tool"] = "laban";
  m["version"] = kToolVersion;
  m["command"] = ctx.command;
  m["seed"] = ctx.seed;
  m["threads"] = ctx.threads;
  m["config"] = ctx.resolved_config;
  nlohmann::ordered_json in = nlohmann::ordered_json::array();
  for (const auto& p : inputs) in.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  m["inputs"] = in;
  m["notes"] = notes;
  m["started"] = started;
  m["finished"] = utc_timestamp();
  write_text(ctx.out_dir / "manifest.json", m.dump(2) + "\n");
}

std::size_t cmd_extract(const RunContext& ctx, std::span<const fs::path> inputs, const std::optional<fs::path>& cloud,
                        const LmaConfig& cfg, double tau) {
  const std::string started = utc_timestamp();
  if (inputs.empty()) throw DataError("no input sequences");
  prepare_out(ctx);
  std::vector<fs::path> hashed(inputs.begin(), inputs.end());
  std::vector<std::string> notes;
  FloorPlane plane = FloorPlane::flat();
  if (cloud) {
    plane = with_file(*cloud, [&] { return fit_floor(load_point_cloud(*cloud), tau); });
    save_floor(ctx.out_dir / "floor.json", plane);
    hashed.push_back(*cloud);
    notes.push_back("floor=fitted slope=" + fmt9(plane.slope) + " intercept=" + fmt9(plane.intercept));
  } else {
    notes.push_back("floor=assumed-flat");
  }
  const auto sequences = load_all(inputs, ctx.threads);
  std::vector<std::vector<WindowFeatures>> parts(sequences.size());
  parallel_for(sequences.size(), ctx.threads, [&](std::size_t i) {
    parts[i] = with_file(inputs[i], [&] { return assemble_features(validate_and_repair(sequences[i]), plane, cfg); });
  });
  std::vector<WindowFeatures> rows;
  for (auto& p : parts) rows.insert(rows.end(), p.begin(), p.end());
  save_features(ctx.out_dir / "features.csv", rows);
  write_manifest(ctx, hashed, notes, started);
  return rows.size();
}

FloorPlane cmd_floor(const RunContext& ctx, const fs::path& cloud, double tau) {
  const std::string started = utc_timestamp();
  prepare_out(ctx);
  const FloorPlane plane = with_file(cloud, [&] { return fit_floor(load_point_cloud(cloud), tau); });
  save_floor(ctx.out_dir / "floor.json", plane);
  const fs::path inputs[] = {cloud};
  write_manifest(ctx, inputs, {"slope=" + fmt9(plane.slope), "intercept=" + fmt9(plane.intercept)}, started);
  return plane;
}

std::vector<fs::path> cmd_synth(const RunContext& ctx, const std::optional<fs::path>& styles, int per_style,
                                double duration, double fps, std::optional<double> noise_sigma) {
  const std::string started = utc_timestamp();
  prepare_out(ctx);
  std::vector<StyleSpec> specs = styles ? with_file(*styles, [&] { return load_styles(*styles); }) : default_styles();
  if (noise_sigma) {
    for (auto& s : specs) s.noise_sigma = *noise_sigma;
  }
  const auto corpus = generate_corpus(specs, per_style, duration, fps, ctx.seed);
  std::vector<fs::path> written(corpus.size());
  parallel_for(corpus.size(), ctx.threads, [&](std::size_t i) {
    written[i] = ctx.out_dir / (corpus[i].group_id() + ".jsonl");
    save_sequence(written[i], corpus[i]);
  });
  write_text(ctx.out_dir / "styles.json", styles_to_json(specs));
  std::vector<fs::path> inputs;
  if (styles) inputs.push_back(*styles);
  write_manifest(ctx, inputs, {"sequences=" + std::to_string(corpus.size())}, started);
  return written;
}

GridResult cmd_train(const RunContext& ctx, const fs::path& features, const ForestParams& base, const GridSpec& grid) {
  const std::string started = utc_timestamp();
  prepare_out(ctx);
  const auto rows = load_features(features);
  const Dataset data = to_dataset(rows);
  ForestParams seeded = base;
  seeded.seed = ctx.seed;
  const auto lattice = make_grid(seeded, grid.n_trees, grid.max_depth, grid.min_samples_leaf);
  const GridResult result = grid_search(data, lattice, grid.folds, ctx.seed, ctx.threads);

  std::string grid_csv = "n_trees,max_depth,min_samples_leaf,mean_accuracy";
  for (int f = 0; f < grid.folds; ++f) grid_csv += ",fold" + std::to_string(f + 1);
  grid_csv += ",selected\n";
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& p = result.points[i];
    grid_csv += std::to_string(p.params.n_trees) + "," + std::to_string(p.params.max_depth) + "," +
                std::to_string(p.params.min_samples_leaf) + "," + fmt9(p.mean_accuracy);
    for (double a : p.fold_accuracy) grid_csv += "," + fmt9(a);
    grid_csv += i == result.best ? ",1\n" : ",0\n";
  }
  write_text(ctx.out_dir / "grid.csv", grid_csv);

  const auto folds = stratified_group_kfold(data.y, data.groups, grid.folds, ctx.seed);
  const auto cv = cross_validate(data, result.best_params(), folds, ctx.threads);
  const auto report = metrics(data.y, cv.out_of_fold, data.class_names);
  write_text(ctx.out_dir / "cv_report.txt", format_report(report));
  write_text(ctx.out_dir / "cv_report.csv", report_csv(report));

  const ForestModel model = train(data, result.best_params(), ctx.threads);
  model.save(ctx.out_dir / "model.json");
  const fs::path inputs[] = {features};
  const auto& b = result.best_params();
  write_manifest(ctx, inputs,
                 {"best n_trees=" + std::to_string(b.n_trees) + " max_depth=" + std::to_string(b.max_depth) +
                  " min_samples_leaf=" + std::to_string(b.min_samples_leaf),
                  "cv_mean_accuracy=" + fmt9(result.points[result.best].mean_accuracy)},
                 started);
  return result;
}

ClassificationReport cmd_eval(const RunContext& ctx, const fs::path& model_path, const fs::path& features,
                              bool video_vote) {
  const std::string started = utc_timestamp();
  prepare_out(ctx);
  const ForestModel model = with_file(model_path, [&] { return ForestModel::load(model_path); });
  check_schema(model);
  const auto rows = load_features(features);
  const Dataset data = with_file(features, [&] { return to_dataset(rows, &model.class_names()); });
  const auto pred = model.predict_all(data, ctx.threads);

  std::string pred_csv = "row,group_id,window_start,true,predicted\n";
  for (std::size_t i = 0; i < pred.size(); ++i) {
    pred_csv += std::to_string(i) + "," + data.groups[i] + "," + std::to_string(rows[i].window_start) + "," +
                data.class_names[data.y[i]] + "," + data.class_names[pred[i]] + "\n";
  }
  write_text(ctx.out_dir / "predictions.csv", pred_csv);

  std::vector<int> y_true = data.y, y_pred = pred;
  if (video_vote) {
    // One decision per group: majority of window predictions, ties to the lowest class.
    std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> votes;
    const std::size_t C = data.class_names.size();
    for (std::size_t i = 0; i < pred.size(); ++i) {
      auto& v = votes[data.groups[i]];
      if (v.first.empty()) v.first.assign(C, 0), v.second.assign(C, 0);
      ++v.first[static_cast<std::size_t>(data.y[i])];
      ++v.second[static_cast<std::size_t>(pred[i])];
    }
    y_true.clear();
    y_pred.clear();
    auto argmax = [](const std::vector<std::size_t>& v) {
      return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
    };
    for (const auto& [g, v] : votes) {
      y_true.push_back(argmax(v.first));
      y_pred.push_back(argmax(v.second));
    }
  }
  const auto report = metrics(y_true, y_pred, data.class_names);
  write_text(ctx.out_dir / "report.txt", format_report(report));
  write_text(ctx.out_dir / "report.csv", report_csv(report));
  const fs::path inputs[] = {model_path, features};
  write_manifest(ctx, inputs, {video_vote ? "level=video-majority-vote" : "level=window"}, started);
  return report;
}

std::vector<SweepRow> sweep(std::span<const JointSequence> sequences, const std::vector<std::size_t>& sizes,
                            const LmaConfig& cfg, const FloorPlane& plane, const ForestParams& params, int folds,
                            std::uint64_t seed, int threads) {
  if (sequences.empty()) throw DataError("no input sequences");
  std::size_t min_t = sequences.front().frame_count();
  for (const auto& s : sequences) min_t = std::min(min_t, s.frame_count());
  for (std::size_t w : sizes) {
    if (w > min_t) {
      throw DataError("window size " + std::to_string(w) + " exceeds the shortest sequence (" +
                      std::to_string(min_t) + " frames)");
    }
  }
  std::vector<JointSequence> repaired;
  for (const auto& s : sequences) repaired.push_back(validate_and_repair(s));
  std::vector<SweepRow> out;
  for (std::size_t w : sizes) {
    LmaConfig c = cfg;
    c.window.w = w;
    const auto rows = extract_all(repaired, plane, c, threads);
    const Dataset data = to_dataset(rows);
    const auto fs = stratified_group_kfold(data.y, data.groups, folds, seed);
    const auto cv = cross_validate(data, params, fs, threads);
    SweepRow r;
    r.w = w;
    r.mean_accuracy = cv.mean_accuracy();
    double ss = 0.0;
    for (double a : cv.fold_accuracy) ss += (a - r.mean_accuracy) * (a - r.mean_accuracy);
    r.std_accuracy = std::sqrt(ss / static_cast<double>(cv.fold_accuracy.size()));
    out.push_back(r);
  }
  return out;
}

std::vector<SweepRow> cmd_sweep(const RunContext& ctx, std::span<const fs::path> inputs,
                                const std::vector<std::size_t>& sizes, const LmaConfig& cfg,
                                const ForestParams& params, int folds) {
  const std::string started = utc_timestamp();
  if (sizes.empty()) throw DataError("no window sizes given");
  prepare_out(ctx);
  const auto sequences = load_all(inputs, ctx.threads);
  ForestParams p = params;
  p.seed = ctx.seed;
  const auto rows = sweep(sequences, sizes, cfg, FloorPlane::flat(), p, folds, ctx.seed, ctx.threads);
  std::string csv = "w,mean_accuracy,std_accuracy\n";
  Series s{"accuracy", {}, {}};
  for (const auto& r : rows) {
    csv += std::to_string(r.w) + "," + fmt9(r.mean_accuracy) + "," + fmt9(r.std_accuracy) + "\n";
    s.x.push_back(static_cast<double>(r.w));
    s.y.push_back(r.mean_accuracy);
  }
  write_text(ctx.out_dir / "sweep.csv", csv);
  write_text(ctx.out_dir / "sweep.svg",
             line_chart({s}, {"Accuracy vs sliding window size", "window size (frames)", "accuracy"}));
  write_manifest(ctx, inputs, {"floor=assumed-flat"}, started);
  return rows;
}

void cmd_explain(const RunContext& ctx, const fs::path& model_path, const fs::path& features, std::size_t top_k,
                 int permutation_repeats) {
  const std::string started = utc_timestamp();
  if (top_k == 0) throw DataError("top_k must be >= 1");
  prepare_out(ctx);
  const ForestModel model = with_file(model_path, [&] { return ForestModel::load(model_path); });
  check_schema(model);
  const auto rows = load_features(features);
  if (rows.empty()) throw DataError(features.string() + ": no rows to explain");

  std::vector<ShapExplanation> ex(rows.size());
  parallel_for(rows.size(), ctx.threads, [&](std::size_t i) { ex[i] = tree_shap(model, rows[i].values); });

  std::string values = "instance,class,feature,phi,base\n";
  for (std::size_t i = 0; i < ex.size(); ++i) {
    for (std::size_t c = 0; c < model.n_classes(); ++c) {
      for (std::size_t f = 0; f < model.n_features(); ++f) {
        values += std::to_string(i) + "," + model.class_names()[c] + "," + model.feature_names()[f] + "," +
                  fmt9(ex[i].phi[c][f]) + "," + fmt9(ex[i].base[c]) + "\n";
      }
    }
  }
  write_text(ctx.out_dir / "shap_values.csv", values);

  const auto overall = summary_rank(ex);
  write_text(ctx.out_dir / "shap_summary.csv", summary_csv(overall, top_k));
  std::vector<std::string> names;
  std::vector<double> bars;
  for (std::size_t i = 0; i < std::min(top_k, overall.size()); ++i) {
    names.push_back(overall[i].name);
    bars.push_back(overall[i].mean_abs_phi);
  }
  write_text(ctx.out_dir / "shap_summary.svg", bar_chart(names, bars, {"Mean |SHAP value|", "", "mean |phi|"}));
  for (std::size_t c = 0; c < model.n_classes(); ++c) {
    write_text(ctx.out_dir / ("shap_summary_" + class_file_name(model.class_names()[c]) + ".csv"),
               summary_csv(summary_rank_class(ex, c), top_k));
  }

  std::vector<std::string> notes = {"shap=path-dependent"};
  const bool labeled = std::all_of(rows.begin(), rows.end(), [](const WindowFeatures& r) { return r.label; });
  if (labeled && permutation_repeats > 0) {
    const Dataset data = to_dataset(rows, &model.class_names());
    const auto imp = permutation_importance(model, data, permutation_repeats, ctx.seed, ctx.threads);
    std::vector<std::size_t> order(imp.mean.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return imp.mean[a] > imp.mean[b]; });
    std::string csv = "feature,mean_accuracy_drop,std,rank\n";
    for (std::size_t r = 0; r < order.size(); ++r) {
      csv += model.feature_names()[order[r]] + "," + fmt9(imp.mean[order[r]]) + "," + fmt9(imp.std[order[r]]) + "," +
             std::to_string(r + 1) + "\n";
    }
    write_text(ctx.out_dir / "permutation_importance.csv", csv);
    std::size_t overlap = 0;
    for (std::size_t a = 0; a < std::min<std::size_t>(3, overall.size()); ++a) {
      for (std::size_t b = 0; b < std::min<std::size_t>(3, order.size()); ++b) overlap += overall[a].index == order[b];
    }
    notes.push_back("top3_overlap=" + std::to_string(overlap));
  } else {
    notes.push_back("permutation_importance=skipped");
  }
  const fs::path inputs[] = {model_path, features};
  write_manifest(ctx, inputs, notes, started);
}

void cmd_kinplot(const RunContext& ctx, std::span<const fs::path> inputs, const LmaConfig& cfg) {
  const std::string started = utc_timestamp();
  if (inputs.empty()) throw DataError("no input sequences");
  prepare_out(ctx);
  const auto sequences = load_all(inputs, ctx.threads);
  std::string csv = "sequence,frame,velocity\n";
  std::vector<Series> series;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    const auto curve = with_file(inputs[i], [&] { return velocity_curve(validate_and_repair(sequences[i]), cfg); });
    const auto& seq = sequences[i];
    Series s{seq.label().value_or(inputs[i].stem().string()), {}, {}};
    for (std::size_t k = 0; k < curve.size(); ++k) {
      const std::size_t frame = k * cfg.window.stride;
      csv += inputs[i].stem().string() + "," + std::to_string(frame) + "," + fmt9(curve[k]) + "\n";
      s.x.push_back(static_cast<double>(frame));
      s.y.push_back(curve[k]);
    }
    series.push_back(std::move(s));
  }
  write_text(ctx.out_dir / "velocity.csv", csv);
  write_text(ctx.out_dir / "velocity.svg",
             line_chart(series, {"Kinematic velocity evolution", "frame", "velocity (m/s)"}));
  write_manifest(ctx, inputs, {"window=" + std::to_string(cfg.window.w)}, started);
}

}  // namespace laban
