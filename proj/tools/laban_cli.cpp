#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "laban/errors.hpp"
#include "laban/parallel.hpp"
#include "laban/pipeline.hpp"

namespace fs = std::filesystem;
using namespace laban;

namespace {

struct Options {
  std::uint64_t seed = 42;
  int threads = 1;
  std::string out = "out";

  std::size_t window = 55;
  std::size_t stride = 1;
  double threshold_scale = 1.0;
  double epsilon_net = 1e-3;
  std::vector<std::string> joints = {"head", "left_hand", "right_hand", "left_foot", "right_foot", "pelvis"};
  double tau = kDefaultFloorTau;

  int trees = 100;
  int max_depth = 0;
  int min_leaf = 1;
  int mtry = 0;
  bool no_bootstrap = false;
  GridSpec grid;
};

CLI::Validator at_least(std::size_t lo) {
  return CLI::Validator(
      [lo](std::string& in) -> std::string {
        std::size_t v = 0;
        if (!CLI::detail::lexical_cast(in, v) || v < lo) return "value must be an integer >= " + std::to_string(lo);
        return {};
      },
      "INT>=" + std::to_string(lo));
}

LmaConfig lma_config(const Options& o) {
  LmaConfig cfg;
  cfg.window = {o.window, o.stride};
  cfg.threshold_scale = o.threshold_scale;
  cfg.epsilon_net = o.epsilon_net;
  cfg.selected.clear();
  for (const auto& name : o.joints) {
    const auto role = role_from_name(name);
    if (!role) throw CLI::ValidationError("--joints", "unknown joint role '" + name + "'");
    cfg.selected.push_back(*role);
  }
  return cfg;
}

ForestParams forest_params(const Options& o) {
  ForestParams p;
  p.n_trees = o.trees;
  p.max_depth = o.max_depth;
  p.min_samples_leaf = o.min_leaf;
  p.features_per_split = o.mtry;
  p.bootstrap = !o.no_bootstrap;
  p.seed = o.seed;
  p.validate();
  return p;
}

std::vector<fs::path> paths(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

// Merged configuration restricted to global keys and the active subcommand,
// so it can be fed back through --config.
std::string resolved_config(const CLI::App& app, const std::string& command) {
  std::istringstream in(app.config_to_str(true, false));
  std::string line, out;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    const auto dot = line.find('.');
    if (dot != std::string::npos && dot < eq && line.compare(0, dot, command) != 0) continue;
    out += line + "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laban movement descriptors, style classification and attribution"};
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(false);
  app.set_version_flag("--version", kToolVersion);

  Options o;
  app.set_config("--config", "", "Key-value config file (TOML or INI); flags override it");
  app.add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "Output directory")->capture_default_str();

  app.add_option("--window", o.window, "Sliding window size (frames)")
      ->check(at_least(2))
      ->capture_default_str()->group("Features");
  app.add_option("--stride", o.stride, "Window stride (frames)")
      ->check(at_least(1))
      ->capture_default_str()->group("Features");
  app.add_option("--threshold-scale", o.threshold_scale, "Initiation threshold multiplier of std(speed)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str()
      ->group("Features");
  app.add_option("--epsilon-net", o.epsilon_net, "Net-displacement guard (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str()->group("Features");
  app.add_option("--joints", o.joints, "Selected joint roles for Effort")
      ->delimiter(',')
      ->capture_default_str()
      ->group("Features");
  app.add_option("--tau", o.tau, "Floor quantile")->capture_default_str()->group("Features");

  app.add_option("--trees", o.trees, "Trees per forest")->capture_default_str()->group("Forest");
  app.add_option("--max-depth", o.max_depth, "Maximum depth, 0 = unlimited")->capture_default_str()->group("Forest");
  app.add_option("--min-leaf", o.min_leaf, "Minimum samples per leaf")->capture_default_str()->group("Forest");
  app.add_option("--mtry", o.mtry, "Features tried per split, 0 = ceil(sqrt(F))")
      ->capture_default_str()
      ->group("Forest");
  app.add_flag("--no-bootstrap", o.no_bootstrap, "Grow every tree on the full training set")->group("Forest");
  app.add_option("--grid-trees", o.grid.n_trees, "Grid values for trees")->delimiter(',')->capture_default_str()->group("Forest");
  app.add_option("--grid-depth", o.grid.max_depth, "Grid values for max depth")
      ->delimiter(',')
      ->capture_default_str()
      ->group("Forest");
  app.add_option("--grid-leaf", o.grid.min_samples_leaf, "Grid values for min leaf")
      ->delimiter(',')
      ->capture_default_str()
      ->group("Forest");
  app.add_option("--folds", o.grid.folds, "Grouped cross-validation folds")->capture_default_str()->group("Forest");

  std::vector<std::string> inputs;
  std::string cloud, styles, model, features;
  int per_style = 6;
  double duration = 20.0, fps = 60.0;
  std::optional<double> noise;
  bool vote = false;
  std::vector<std::size_t> sizes = {5, 15, 30, 55};
  std::size_t top_k = 10;
  int perm_repeats = 5;

  auto* extract = app.add_subcommand("extract", "Sequences to a per-window feature CSV");
  extract->add_option("inputs", inputs, "Sequence JSONL files")->required()->check(CLI::ExistingFile);
  extract->add_option("--pointcloud", cloud, "Scene point cloud for the floor fit")->check(CLI::ExistingFile);

  auto* floor = app.add_subcommand("floor", "Fit the floor line of a point cloud");
  floor->add_option("cloud", cloud, "Point cloud file")->required()->check(CLI::ExistingFile);

  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic corpus");
  synth->add_option("--styles", styles, "Style bundle JSON (default: built-in ten styles)")->check(CLI::ExistingFile);
  synth->add_option("--per-style", per_style, "Sequences per style")->capture_default_str();
  synth->add_option("--duration", duration, "Seconds per sequence")->capture_default_str();
  synth->add_option("--fps", fps, "Frame rate")->capture_default_str();
  synth->add_option("--noise", noise, "Override jitter sigma (m)");

  auto* train_cmd = app.add_subcommand("train", "Grid search with grouped CV, then fit the final model");
  train_cmd->add_option("features", features, "Feature CSV")->required()->check(CLI::ExistingFile);

  auto* eval = app.add_subcommand("eval", "Score a model on a feature CSV");
  eval->add_option("model", model, "Model JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("features", features, "Feature CSV")->required()->check(CLI::ExistingFile);
  eval->add_flag("--vote", vote, "Report per-video majority vote instead of per-window");

  auto* sweep_cmd = app.add_subcommand("sweep", "Cross-validated accuracy against window size");
  sweep_cmd->add_option("inputs", inputs, "Sequence JSONL files")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--sizes", sizes, "Window sizes")->delimiter(',')->capture_default_str();

  auto* explain = app.add_subcommand("explain", "Tree SHAP attributions and permutation importance");
  explain->add_option("model", model, "Model JSON")->required()->check(CLI::ExistingFile);
  explain->add_option("features", features, "Feature CSV")->required()->check(CLI::ExistingFile);
  explain->add_option("--top-k", top_k, "Features listed in the summaries")->capture_default_str();
  explain->add_option("--perm-repeats", perm_repeats, "Permutation repeats, 0 disables")->capture_default_str();

  auto* kinplot = app.add_subcommand("kinplot", "Windowed mean-speed curve per sequence");
  kinplot->add_option("inputs", inputs, "Sequence JSONL files")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunContext ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    ctx.resolved_config = resolved_config(app, ctx.command);
    ctx.out_dir = o.out;
    ctx.seed = o.seed;
    ctx.threads = o.threads;

    LmaConfig cfg;
    ForestParams params;
    try {
      cfg = lma_config(o);
      params = forest_params(o);
    } catch (const std::exception& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return 1;
    }

    if (*extract) {
      const auto v = paths(inputs);
      const std::size_t n = cmd_extract(ctx, v, cloud.empty() ? std::nullopt : std::optional<fs::path>(cloud), cfg,
                                        o.tau);
      std::cout << "wrote " << n << " windows to " << (ctx.out_dir / "features.csv").string() << "\n";
    } else if (*floor) {
      const FloorPlane p = cmd_floor(ctx, cloud, o.tau);
      std::printf("slope %.9g intercept %.9g loss %.9g\n", p.slope, p.intercept, p.pinball_loss);
    } else if (*synth) {
      const auto written = cmd_synth(ctx, styles.empty() ? std::nullopt : std::optional<fs::path>(styles), per_style,
                                     duration, fps, noise);
      std::cout << "wrote " << written.size() << " sequences to " << ctx.out_dir.string() << "\n";
    } else if (*train_cmd) {
      const auto result = cmd_train(ctx, features, params, o.grid);
      const auto& b = result.best_params();
      std::printf("best n_trees=%d max_depth=%d min_samples_leaf=%d cv_accuracy=%.4f\n", b.n_trees, b.max_depth,
                  b.min_samples_leaf, result.points[result.best].mean_accuracy);
    } else if (*eval) {
      const auto report = cmd_eval(ctx, model, features, vote);
      std::cout << format_report(report);
    } else if (*sweep_cmd) {
      const auto v = paths(inputs);
      for (const auto& r : cmd_sweep(ctx, v, sizes, cfg, params, o.grid.folds)) {
        std::printf("w=%zu accuracy=%.4f std=%.4f\n", r.w, r.mean_accuracy, r.std_accuracy);
      }
    } else if (*explain) {
      cmd_explain(ctx, model, features, top_k, perm_repeats);
      std::cout << "wrote attributions to " << ctx.out_dir.string() << "\n";
    } else if (*kinplot) {
      const auto v = paths(inputs);
      cmd_kinplot(ctx, v, cfg);
      std::cout << "wrote " << (ctx.out_dir / "velocity.csv").string() << "\n";
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
