// pathcast: learn per-scene navigation maps from trajectories, sample likely
// future paths, and transfer maps to unseen scenes by semantic similarity.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathcast/evaluation.hpp"
#include "pathcast/io.hpp"
#include "pathcast/navmap.hpp"
#include "pathcast/predictor.hpp"
#include "pathcast/render.hpp"
#include "pathcast/synth.hpp"
#include "pathcast/transfer.hpp"

namespace {

using namespace pathcast;

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;

std::vector<double> parse_number_list(const std::string& text, std::size_t expected,
                                      const std::string& what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(what + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != expected) {
    throw ValidationError(what + ": expected " + std::to_string(expected) +
                          " comma-separated numbers");
  }
  return out;
}

struct BuildMapArgs {
  std::string trajectories, labels, class_id, out;
  int patch_size = 16;
  double cell_size = 0.0;
  BuilderConfig config;
};

void run_build_map(const BuildMapArgs& a) {
  const SemanticGrid grid = load_semantic_grid(a.labels, a.cell_size);
  const auto all = load_trajectories_csv(a.trajectories);
  std::vector<Trajectory> selected;
  for (const Trajectory& t : all) {
    if (t.class_id == a.class_id) selected.push_back(t);
  }
  if (selected.empty()) {
    throw ValidationError("no trajectories of class '" + a.class_id + "' in " + a.trajectories);
  }
  const PatchGrid patches = PatchGrid::over(grid, a.patch_size);
  const NavigationMap map = build_map(selected, patches, a.class_id, a.config);
  save_navmap(map, a.out);
  std::cerr << "built map for class '" << a.class_id << "' from " << selected.size()
            << " trajectories";
  if (map.dropped_samples() > 0) {
    std::cerr << " (dropped " << map.dropped_samples() << " out-of-bounds samples)";
  }
  std::cerr << "\n";
}

struct PredictArgs {
  std::string map, start, goal, out, strategy = "closest-to-goal";
  std::string overlay, labels;
  PredictorConfig config;
  double cell_size = 0.0;
};

void run_predict(const PredictArgs& a) {
  const NavigationMap map = load_navmap(a.map);
  const auto s = parse_number_list(a.start, 4, "--start");
  TargetState start;
  start.position = Vec2(s[0], s[1]);
  start.speed = s[2];
  start.heading = normalize_angle(s[3]);
  if (start.speed < 0.0) throw ValidationError("--start: omega must be >= 0");
  if (!map.grid().world_to_patch(start.position)) {
    throw ValidationError("--start: position is outside the scene");
  }

  std::optional<Vec2> goal;
  if (!a.goal.empty()) {
    const auto g = parse_number_list(a.goal, 2, "--goal");
    goal = Vec2(g[0], g[1]);
  }

  PredictorConfig cfg = a.config;
  cfg.strategy = strategy_from_string(a.strategy);
  const Prediction prediction = predict(start, goal, map, cfg);
  save_prediction_csv(start, prediction, a.out);

  if (!a.overlay.empty()) {
    if (a.labels.empty()) throw ValidationError("--overlay needs --labels for the backdrop");
    const SemanticGrid grid = load_semantic_grid(a.labels, a.cell_size);
    save_overlay_ppm(grid, start, prediction, a.overlay);
  }
  std::cerr << "predicted " << prediction.samples.size() << " paths; " << to_string(cfg.strategy)
            << " selected " << prediction.selected.states.size() << " steps, score "
            << format_double(prediction.selected.score) << ", "
            << to_string(prediction.selected.termination) << "\n";
}

struct IndexArgs {
  std::string scenes, out;
  double w = 0.5;
  double cell_size = 0.0;
};

void run_index(const IndexArgs& a) {
  const auto list = load_scene_list(a.scenes);
  std::vector<SemanticGrid> grids;
  std::vector<NavigationMap> maps;
  grids.reserve(list.size());
  maps.reserve(list.size());
  for (const SceneListEntry& e : list) {
    grids.push_back(load_semantic_grid(e.labels, a.cell_size));
    maps.push_back(load_navmap(e.map));
  }
  std::vector<SceneRef> refs;
  for (std::size_t i = 0; i < list.size(); ++i) {
    refs.push_back(SceneRef{list[i].id, &grids[i], &maps[i]});
  }
  const DescriptorIndex index = build_index(refs, a.w);
  save_index(index, a.out);
  std::cerr << "indexed " << index.entries().size() << " patches from " << list.size()
            << " scenes\n";
}

struct TransferArgs {
  std::string index, labels, out, report;
  int k = 50;
  double w = -1.0;  // < 0: keep the index's stored blend weight
  double cell_size = 0.0;
};

void run_transfer(const TransferArgs& a) {
  DescriptorIndex index = load_index(a.index);
  if (a.w >= 0.0 && a.w != index.w()) index = with_blend(index, a.w);
  const SemanticGrid query = load_semantic_grid(a.labels, a.cell_size);
  const TransferResult result = transfer_map(query, index, a.k);
  save_navmap(result.map, a.out);
  if (!a.report.empty()) atomic_write_file(a.report, transfer_report_to_csv(result.report));
  std::cerr << "transferred statistics onto " << result.map.grid().count() << " patches\n";
}

struct EvalArgs {
  std::string trajectories, labels, out, csv;
  std::vector<std::string> predictors{"navmap", "linear"};
  EvalProtocol protocol;
  double cell_size = 0.0;
};

void run_eval(const EvalArgs& a) {
  const SemanticGrid grid = load_semantic_grid(a.labels, a.cell_size);
  const auto trajectories = load_trajectories_csv(a.trajectories);
  const auto predictors = predictors_from_names(a.predictors);
  const EvalReport report = run_benchmark(trajectories, grid, predictors, a.protocol);
  save_json_file(a.out, eval_report_to_json(report));
  if (!a.csv.empty()) atomic_write_file(a.csv, eval_report_to_csv(report));
  std::cout << format_summary(report);
}

struct HeatmapArgs {
  std::string map, field = "rho", out;
};

void run_heatmap(const HeatmapArgs& a) {
  const NavigationMap map = load_navmap(a.map);
  save_heatmap_pgm(map, heatmap_field_from_string(a.field), a.out);
}

struct SynthArgs {
  std::string spec, out_dir;
};

void run_synth(const SynthArgs& a) {
  const SynthSpec spec = load_synth_spec(a.spec);
  const SynthScene scene = generate_scene(spec);
  const std::filesystem::path dir(a.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  save_grid_pgm(scene.grid, dir / "labels.pgm");
  save_grid_text(scene.grid, dir / "labels.grid");
  save_trajectories_csv(scene.trajectories, dir / "trajectories.csv");
  save_navmap(scene.generator, dir / "generator_map.json");
  std::cerr << "wrote " << scene.trajectories.size() << " trajectories and scene files to "
            << dir.string() << "\n";
}

void add_builder_options(CLI::App* cmd, BuilderConfig& config) {
  cmd->add_option("--stop-threshold", config.stop_threshold, "speed below which a step counts as a stop");
  cmd->add_option("--kappa0", config.kappa0, "curvature half-saturation for the routing score");
  cmd->add_option("--sigma-floor", config.sigma_floor, "lower bound on fitted speed std");
}

void add_predictor_options(CLI::App* cmd, PredictorConfig& config) {
  cmd->add_option("--sigma", config.process_noise, "process noise std");
  cmd->add_option("--lambda", config.heading_smoothing, "heading smoothing factor");
  cmd->add_option("--alpha-cap", config.alpha_cap, "cap on the routing exponent");
  cmd->add_option("--max-steps", config.max_steps, "maximum path length");
  cmd->add_option("--goal-radius", config.goal_radius, "goal radius (default: one patch side)");
  cmd->add_option("--samples", config.num_samples, "number of sampled paths");
  cmd->add_option("--seed", config.seed, "RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"navigation-map trajectory forecasting toolkit"};
  app.require_subcommand(1);

  BuildMapArgs build_args;
  auto* build = app.add_subcommand("build-map", "estimate a navigation map from trajectories");
  build->add_option("--trajectories", build_args.trajectories, "trajectory CSV")->required();
  build->add_option("--labels", build_args.labels, "label grid (PGM or text)")->required();
  build->add_option("--class", build_args.class_id, "agent class to model")->required();
  build->add_option("--patch-size", build_args.patch_size, "patch side in cells");
  build->add_option("--cell-size", build_args.cell_size, "cell size override for PGM labels");
  build->add_option("--out", build_args.out, "output map JSON")->required();
  add_builder_options(build, build_args.config);

  PredictArgs predict_args;
  auto* pred = app.add_subcommand("predict", "sample future paths from a navigation map");
  pred->add_option("--map", predict_args.map, "navigation map JSON")->required();
  pred->add_option("--start", predict_args.start, "start state x,y,omega,theta")->required();
  pred->add_option("--goal", predict_args.goal, "goal point x,y");
  pred->add_option("--strategy", predict_args.strategy,
                   "closest-to-goal | max-popularity | mean-top-10");
  pred->add_option("--out", predict_args.out, "output paths CSV")->required();
  pred->add_option("--overlay", predict_args.overlay, "optional overlay PPM");
  pred->add_option("--labels", predict_args.labels, "label grid for the overlay backdrop");
  pred->add_option("--cell-size", predict_args.cell_size, "cell size override for PGM labels");
  add_predictor_options(pred, predict_args.config);

  IndexArgs index_args;
  auto* index = app.add_subcommand("index", "build a descriptor index from trained scenes");
  index->add_option("--scenes", index_args.scenes, "scene list file")->required();
  index->add_option("--w", index_args.w, "global/local context blend weight");
  index->add_option("--cell-size", index_args.cell_size, "cell size override for PGM labels");
  index->add_option("--out", index_args.out, "output index JSON")->required();

  TransferArgs transfer_args;
  auto* transfer = app.add_subcommand("transfer", "transfer a navigation map to an unseen scene");
  transfer->add_option("--index", transfer_args.index, "descriptor index JSON")->required();
  transfer->add_option("--labels", transfer_args.labels, "query label grid")->required();
  transfer->add_option("--k", transfer_args.k, "nearest neighbors per patch");
  transfer->add_option("--w", transfer_args.w,
                       "re-blend weight for stored descriptors (default: keep the index's)");
  transfer->add_option("--cell-size", transfer_args.cell_size, "cell size override for PGM labels");
  transfer->add_option("--out", transfer_args.out, "output map JSON")->required();
  transfer->add_option("--report", transfer_args.report, "optional neighbor-distance CSV");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "cross-validated benchmark of predictors");
  eval->add_option("--trajectories", eval_args.trajectories, "trajectory CSV")->required();
  eval->add_option("--labels", eval_args.labels, "label grid")->required();
  eval->add_option("--folds", eval_args.protocol.folds, "cross-validation folds");
  eval->add_option("--fold-seed", eval_args.protocol.fold_seed, "fold assignment seed");
  eval->add_option("--predictors", eval_args.predictors, "predictors to run (navmap, linear)")
      ->delimiter(',');
  eval->add_option("--patch-size", eval_args.protocol.patch_size, "patch side in cells");
  eval->add_option("--cell-size", eval_args.cell_size, "cell size override for PGM labels");
  eval->add_option("--out", eval_args.out, "output report JSON")->required();
  eval->add_option("--csv", eval_args.csv, "optional per-trajectory CSV");
  add_builder_options(eval, eval_args.protocol.builder);
  add_predictor_options(eval, eval_args.protocol.predictor);

  HeatmapArgs heatmap_args;
  auto* heatmap = app.add_subcommand("heatmap", "render a map field to a PGM heatmap");
  heatmap->add_option("--map", heatmap_args.map, "navigation map JSON")->required();
  heatmap->add_option("--field", heatmap_args.field, "rho | xi");
  heatmap->add_option("--out", heatmap_args.out, "output PGM")->required();

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "generate a synthetic scene and trajectories");
  synth->add_option("--spec", synth_args.spec, "synth spec JSON")->required();
  synth->add_option("--out-dir", synth_args.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message / help text
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  try {
    if (build->parsed()) run_build_map(build_args);
    if (pred->parsed()) run_predict(predict_args);
    if (index->parsed()) run_index(index_args);
    if (transfer->parsed()) run_transfer(transfer_args);
    if (eval->parsed()) run_eval(eval_args);
    if (heatmap->parsed()) run_heatmap(heatmap_args);
    if (synth->parsed()) run_synth(synth_args);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
