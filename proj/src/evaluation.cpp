#include "pathcast/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "pathcast/metrics.hpp"
#include "pathcast/random.hpp"

namespace pathcast {

namespace {

void hash_bytes(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

std::uint64_t dataset_hash(const std::vector<Trajectory>& trajectories) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Trajectory& t : trajectories) {
    hash_bytes(h, t.agent_id.data(), t.agent_id.size());
    hash_bytes(h, t.class_id.data(), t.class_id.size());
    for (const TrajectorySample& s : t.samples) {
      hash_bytes(h, &s.frame, sizeof(s.frame));
      hash_bytes(h, &s.x, sizeof(s.x));
      hash_bytes(h, &s.y, sizeof(s.y));
    }
  }
  return h;
}

NamedPredictor navmap_predictor() {
  return {"navmap", [](const Trajectory& /*truth*/, const TargetState& start, const Vec2& goal,
                       const NavigationMap& map, const PredictorConfig& cfg) {
            return predict(start, goal, map, cfg).selected;
          }};
}

NamedPredictor linear_predictor() {
  return {"linear", [](const Trajectory& truth, const TargetState& start, const Vec2& /*goal*/,
                       const NavigationMap& /*map*/, const PredictorConfig& /*cfg*/) {
            return linear_baseline(start, static_cast<int>(truth.samples.size()) - 1);
          }};
}

std::vector<NamedPredictor> predictors_from_names(const std::vector<std::string>& names) {
  std::vector<NamedPredictor> out;
  for (const std::string& name : names) {
    if (name == "navmap") {
      out.push_back(navmap_predictor());
    } else if (name == "linear") {
      out.push_back(linear_predictor());
    } else {
      throw ValidationError("unknown predictor '" + name + "'");
    }
  }
  return out;
}

namespace {

TargetState initial_state(const Trajectory& t) {
  TargetState s;
  s.position = t.position(0);
  const double dt = static_cast<double>(t.samples[1].frame - t.samples[0].frame);
  const Vec2 v = (t.position(1) - t.position(0)) / dt;
  s.speed = v.norm();
  s.heading = normalize_angle(std::atan2(v.y(), v.x()));
  return s;
}

// Paths end when the target leaves the scene: drop everything from the first
// out-of-bounds state on.
std::vector<Vec2> predicted_points(const TargetState& start, const PredictedPath& path,
                                   const SemanticGrid& grid) {
  std::vector<Vec2> pts;
  pts.reserve(path.states.size() + 1);
  pts.push_back(start.position);
  for (const TargetState& s : path.states) {
    if (!grid.contains(s.position)) break;
    pts.push_back(s.position);
  }
  return pts;
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (const double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double std_of(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double s = 0.0;
  for (const double x : xs) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(xs.size()));
}

}  // namespace

EvalReport run_benchmark(const std::vector<Trajectory>& trajectories, const SemanticGrid& grid,
                         const std::vector<NamedPredictor>& predictors,
                         const EvalProtocol& protocol) {
  if (protocol.folds < 2) throw ValidationError("run_benchmark: need at least 2 folds");
  if (predictors.empty()) throw ValidationError("run_benchmark: no predictors");
  for (const Trajectory& t : trajectories) t.validate();

  const PatchGrid patches(grid.width(), grid.height(), grid.cell_size(), protocol.patch_size);
  const std::uint64_t data_key = dataset_hash(trajectories);

  // Stable class grouping, input order preserved inside a class.
  std::map<std::string, std::vector<const Trajectory*>> by_class;
  for (const Trajectory& t : trajectories) by_class[t.class_id].push_back(&t);

  EvalReport report;
  report.folds = protocol.folds;

  for (auto& [class_id, members] : by_class) {
    if (static_cast<int>(members.size()) < protocol.min_class_trajectories ||
        static_cast<int>(members.size()) < protocol.folds) {
      report.notes.push_back("class '" + class_id + "' skipped: only " +
                             std::to_string(members.size()) + " trajectories");
      continue;
    }

    // Trajectories, not time steps, are the cross-validation unit.
    std::sort(members.begin(), members.end(),
              [](const Trajectory* a, const Trajectory* b) { return a->agent_id < b->agent_id; });
    std::vector<int> fold_of(members.size());
    {
      std::vector<std::size_t> order(members.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      auto rng = make_stream(protocol.fold_seed ^ data_key, "eval-folds", fnv1a(class_id));
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t i = 0; i < order.size(); ++i) {
        fold_of[order[i]] = static_cast<int>(i % protocol.folds);
      }
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      report.fold_of_agent[members[i]->agent_id] = fold_of[i];
    }

    std::map<std::string, std::vector<std::vector<double>>> fold_errors;  // predictor -> fold -> errs
    for (const NamedPredictor& p : predictors) {
      fold_errors[p.name].assign(protocol.folds, {});
    }

    for (int fold = 0; fold < protocol.folds; ++fold) {
      std::vector<Trajectory> train;
      std::vector<const Trajectory*> test;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (fold_of[i] == fold) {
          test.push_back(members[i]);
        } else {
          train.push_back(*members[i]);
        }
      }
      if (train.empty() || test.empty()) {
        report.notes.push_back("class '" + class_id + "' fold " + std::to_string(fold) +
                               " skipped: empty split");
        continue;
      }
      const NavigationMap map = build_map(train, patches, class_id, protocol.builder);

      for (const Trajectory* t : test) {
        const TargetState start = initial_state(*t);
        const Vec2 goal = t->position(t->samples.size() - 1);
        std::vector<Vec2> truth;
        truth.reserve(t->samples.size());
        for (std::size_t i = 0; i < t->samples.size(); ++i) truth.push_back(t->position(i));

        for (const NamedPredictor& predictor : predictors) {
          PredictorConfig cfg = protocol.predictor;
          cfg.seed = mix64(protocol.predictor.seed ^ fnv1a(t->agent_id));
          const PredictedPath path = predictor.fn(*t, start, goal, map, cfg);
          const double err = mhd(truth, predicted_points(start, path, grid));
          fold_errors[predictor.name][fold].push_back(err);
          report.rows.push_back({fold, class_id, t->agent_id, predictor.name, err,
                                 static_cast<int>(path.states.size()), path.termination});
        }
      }
    }

    for (const NamedPredictor& predictor : predictors) {
      PredictorSummary summary;
      for (int fold = 0; fold < protocol.folds; ++fold) {
        const auto& errs = fold_errors[predictor.name][fold];
        if (errs.empty()) continue;
        summary.fold_means.push_back(mean_of(errs));
        summary.trajectory_count += static_cast<int>(errs.size());
      }
      summary.mean = mean_of(summary.fold_means);
      summary.stddev = std_of(summary.fold_means, summary.mean);
      report.summary[class_id][predictor.name] = std::move(summary);
    }
  }

  std::sort(report.rows.begin(), report.rows.end(), [](const TrajectoryResult& a,
                                                       const TrajectoryResult& b) {
    if (a.fold != b.fold) return a.fold < b.fold;
    if (a.class_id != b.class_id) return a.class_id < b.class_id;
    if (a.agent_id != b.agent_id) return a.agent_id < b.agent_id;
    return a.predictor < b.predictor;
  });
  return report;
}

std::string format_summary(const EvalReport& report) {
  std::ostringstream out;
  out << "MHD error (mean +- std across " << report.folds << " folds)\n";
  for (const auto& [class_id, per_predictor] : report.summary) {
    out << "  class " << class_id << "\n";
    for (const auto& [name, s] : per_predictor) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "    %-10s %8.3f +- %.3f  (n=%d)", name.c_str(), s.mean,
                    s.stddev, s.trajectory_count);
      out << buf << "\n";
    }
  }
  for (const std::string& note : report.notes) out << "  note: " << note << "\n";
  return out.str();
}

}  // namespace pathcast
