#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathcast/grid.hpp"
#include "pathcast/navmap.hpp"
#include "pathcast/predictor.hpp"

namespace pathcast {

struct EvalProtocol {
  int folds = 5;
  std::uint64_t fold_seed = 0;
  int min_class_trajectories = 5;  // smaller classes are skipped with a note
  int patch_size = 16;
  BuilderConfig builder;
  PredictorConfig predictor;
};

/// A benchmarked predictor: given the test trajectory (for its initial state
/// and horizon), the ground-truth endpoint as the goal, and the per-class map
/// trained on the fold's training split. Real predictors must only read the
/// start state and horizon from `truth`; the full trajectory is passed so
/// test harnesses can run oracle baselines.
using PredictorFn = std::function<PredictedPath(const Trajectory& truth, const TargetState& start,
                                                const Vec2& goal, const NavigationMap& map,
                                                const PredictorConfig& cfg)>;

struct NamedPredictor {
  std::string name;
  PredictorFn fn;
};

/// The two standard entrants: the map-driven sampler and the
/// constant-velocity baseline.
NamedPredictor navmap_predictor();
NamedPredictor linear_predictor();
std::vector<NamedPredictor> predictors_from_names(const std::vector<std::string>& names);

struct TrajectoryResult {
  int fold = 0;
  std::string class_id;
  std::string agent_id;
  std::string predictor;
  double mhd = 0.0;
  int predicted_steps = 0;
  Termination termination = Termination::kMaxSteps;
};

struct PredictorSummary {
  double mean = 0.0;    // mean of the per-fold mean errors
  double stddev = 0.0;  // std across folds
  std::vector<double> fold_means;
  int trajectory_count = 0;
};

struct EvalReport {
  int folds = 0;
  std::vector<TrajectoryResult> rows;  // ordered by fold, then agent id
  std::map<std::string, std::map<std::string, PredictorSummary>> summary;  // class -> predictor
  std::map<std::string, int> fold_of_agent;
  std::vector<std::string> notes;
};

/// Deterministic fold assignment key: hashes the full trajectory content.
std::uint64_t dataset_hash(const std::vector<Trajectory>& trajectories);

/// Cross-validated benchmark: per class and fold, maps are trained on the
/// other folds, each test trajectory is predicted from its initial state
/// with the ground-truth endpoint as goal, and the MHD between the predicted
/// and ground-truth point sets is recorded.
EvalReport run_benchmark(const std::vector<Trajectory>& trajectories, const SemanticGrid& grid,
                         const std::vector<NamedPredictor>& predictors,
                         const EvalProtocol& protocol);

/// Table-style text rendering of the per-class summary.
std::string format_summary(const EvalReport& report);

}  // namespace pathcast
