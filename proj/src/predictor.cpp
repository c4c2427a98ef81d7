#include "pathcast/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pathcast/random.hpp"

namespace pathcast {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kClosestToGoal: return "closest-to-goal";
    case Strategy::kMaxPopularity: return "max-popularity";
    case Strategy::kMeanTop10: return "mean-top-10";
  }
  return "?";
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kGoalReached: return "goal-reached";
    case Termination::kOutOfScene: return "out-of-scene";
    case Termination::kMaxSteps: return "max-steps";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "closest-to-goal") return Strategy::kClosestToGoal;
  if (s == "max-popularity") return Strategy::kMaxPopularity;
  if (s == "mean-top-10") return Strategy::kMeanTop10;
  throw ValidationError("unknown strategy '" + s + "'");
}

Hod direction_weights(double heading, const Hod& hod, double lambda, double stop_distance) {
  Hod w;
  w[0] = hod[0] * std::exp(-lambda * stop_distance);
  for (int i = 1; i < kHodSize; ++i) {
    w[i] = hod[i] * std::exp(-lambda * angular_distance(heading, sector_angle(i)));
  }
  const double total = w.sum();
  if (!(total > 0.0)) throw ValidationError("direction_weights: hod has no probability mass");
  return w / total;
}

Eigen::VectorXd routing_transform(const Eigen::Ref<const Eigen::VectorXd>& pf, double xi,
                                  double alpha_cap) {
  if (!(alpha_cap > 0.0)) throw ValidationError("routing_transform: alpha_cap must be positive");
  const Eigen::Index n = pf.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);

  int support = 0;
  Eigen::Index last = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pf[i] < 0.0) throw ValidationError("routing_transform: negative probability");
    if (pf[i] > 0.0) {
      ++support;
      last = i;
    }
  }
  if (support == 0) throw ValidationError("routing_transform: empty support");
  if (support == 1) {
    out[last] = 1.0;
    return out;
  }

  const double alpha = xi <= 0.0 ? alpha_cap : std::min((1.0 - xi) / xi, alpha_cap);

  // log-space evaluation of p^alpha (1-p)^alpha keeps large alpha stable.
  double max_log = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd logs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pf[i] <= 0.0) continue;
    logs[i] = alpha * (std::log(pf[i]) + std::log1p(-pf[i]));
    max_log = std::max(max_log, logs[i]);
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pf[i] <= 0.0) continue;
    out[i] = std::exp(logs[i] - max_log);
    total += out[i];
  }
  return out / total;
}

double sample_gamma_speed(const SpeedStats& stats, std::mt19937_64& rng) {
  if (stats.sigma <= 0.0) return stats.mu;
  std::gamma_distribution<double> gamma(stats.gamma_shape(), stats.gamma_scale());
  // Gamma support is (0, inf); keep draws strictly positive even if the
  // underlying generator underflows.
  return std::max(gamma(rng), std::numeric_limits<double>::min());
}

namespace {

int sample_index(const Eigen::Ref<const Eigen::VectorXd>& probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  double cum = 0.0;
  int last_positive = 0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cum += probs[i];
    last_positive = static_cast<int>(i);
    if (u < cum) return last_positive;
  }
  return last_positive;  // u landed in rounding slack at the top
}

TargetState advance(const TargetState& from, double speed, double heading,
                    const PredictorConfig& cfg, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double nx = gauss(rng);
  const double ny = gauss(rng);
  TargetState next;
  next.speed = speed;
  next.heading = normalize_angle(heading);
  next.position = from.position + speed * Vec2(std::cos(heading), std::sin(heading)) +
                  cfg.process_noise * Vec2(nx, ny);
  return next;
}

}  // namespace

std::optional<StepOutcome> sample_step(const TargetState& state, const NavigationMap& map,
                                       const PredictorConfig& cfg, std::mt19937_64& rng) {
  const auto patch = map.grid().world_to_patch(state.position);
  if (!patch) throw ValidationError("sample_step: state is out of the scene");
  const PatchStats& stats = map.at(*patch);

  if (!stats.observed() || !stats.has_directions()) {
    if (cfg.unobserved == UnobservedPolicy::kTerminate) return std::nullopt;
    StepOutcome out;
    out.next = advance(state, state.speed, state.heading, cfg, rng);
    out.unobserved = true;
    return out;
  }

  const Hod pf = direction_weights(state.heading, stats.hod, cfg.heading_smoothing,
                                   cfg.stop_distance);
  const Eigen::VectorXd ptilde = routing_transform(pf, stats.xi, cfg.alpha_cap);
  const int dir = sample_index(ptilde, rng);

  StepOutcome out;
  out.direction = dir;
  if (dir == 0) {
    // Stop: zero speed, heading kept so the next step's weights stay defined.
    out.next = advance(state, 0.0, state.heading, cfg, rng);
  } else {
    const SpeedStats& hos = stats.hos[dir - 1];
    // A direction can carry hod mass without a fitted speed model only in
    // hand-authored maps; keep the current speed in that case.
    const double speed = hos.fitted() ? sample_gamma_speed(hos, rng) : state.speed;
    out.next = advance(state, speed, sector_angle(dir), cfg, rng);
  }
  return out;
}

PredictedPath sample_path(const TargetState& start, const std::optional<Vec2>& goal,
                          const NavigationMap& map, const PredictorConfig& cfg,
                          std::mt19937_64& rng) {
  const PatchGrid& grid = map.grid();
  const double radius = cfg.goal_radius > 0.0 ? cfg.goal_radius : grid.patch_world();

  PredictedPath path;
  double score_sum = 0.0;

  if (goal && (start.position - *goal).norm() <= radius) {
    path.termination = Termination::kGoalReached;
    return path;
  }

  TargetState state = start;
  state.heading = normalize_angle(state.heading);
  path.termination = Termination::kMaxSteps;
  for (int step = 0; step < cfg.max_steps; ++step) {
    const auto outcome = sample_step(state, map, cfg, rng);
    if (!outcome) {
      // Unobserved patch with the terminate policy: the target left the
      // mapped region, which we report as leaving the scene.
      path.termination = Termination::kOutOfScene;
      break;
    }
    const auto p = grid.world_to_patch(outcome->next.position);
    if (!p) {
      path.termination = Termination::kOutOfScene;
      break;
    }
    path.states.push_back(outcome->next);
    if (outcome->unobserved) ++path.fallback_steps;
    score_sum += map.at(*p).rho;
    if (goal && (outcome->next.position - *goal).norm() <= radius) {
      path.termination = Termination::kGoalReached;
      break;
    }
    state = outcome->next;
  }
  if (!path.states.empty()) score_sum /= static_cast<double>(path.states.size());
  path.score = score_sum;
  return path;
}

namespace {

double final_goal_distance(const TargetState& start, const PredictedPath& path, const Vec2& goal) {
  const Vec2 end = path.states.empty() ? start.position : path.states.back().position;
  return (end - goal).norm();
}

double path_score(const NavigationMap& map, const std::vector<TargetState>& states) {
  if (states.empty()) return 0.0;
  double sum = 0.0;
  for (const TargetState& s : states) {
    if (const auto p = map.grid().world_to_patch(s.position)) sum += map.at(*p).rho;
  }
  return sum / static_cast<double>(states.size());
}

PredictedPath mean_of_top(const std::vector<PredictedPath>& samples, const NavigationMap& map) {
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (samples[a].score != samples[b].score) return samples[a].score > samples[b].score;
    return a < b;
  });
  const std::size_t k = std::min<std::size_t>(10, order.size());

  std::size_t min_len = std::numeric_limits<std::size_t>::max();
  for (std::size_t j = 0; j < k; ++j) min_len = std::min(min_len, samples[order[j]].states.size());

  PredictedPath mean;
  mean.termination = samples[order[0]].termination;
  mean.states.resize(min_len);
  for (std::size_t step = 0; step < min_len; ++step) {
    Vec2 pos(0.0, 0.0);
    double speed = 0.0, sin_sum = 0.0, cos_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const TargetState& s = samples[order[j]].states[step];
      pos += s.position;
      speed += s.speed;
      sin_sum += std::sin(s.heading);
      cos_sum += std::cos(s.heading);
    }
    TargetState& m = mean.states[step];
    m.position = pos / static_cast<double>(k);
    m.speed = speed / static_cast<double>(k);
    m.heading = normalize_angle(std::atan2(sin_sum, cos_sum));
  }
  mean.score = path_score(map, mean.states);
  return mean;
}

}  // namespace

Prediction predict(const TargetState& start, const std::optional<Vec2>& goal,
                   const NavigationMap& map, const PredictorConfig& cfg) {
  if (cfg.num_samples < 1) throw ValidationError("predict: num_samples must be >= 1");
  if (cfg.process_noise < 0.0) throw ValidationError("predict: process noise must be >= 0");
  if (cfg.heading_smoothing < 0.0) throw ValidationError("predict: lambda must be >= 0");
  if (cfg.max_steps < 1) throw ValidationError("predict: max_steps must be >= 1");
  if (!(cfg.alpha_cap > 0.0)) throw ValidationError("predict: alpha_cap must be positive");
  if (cfg.strategy == Strategy::kClosestToGoal && !goal) {
    throw ValidationError("predict: the closest-to-goal strategy needs a goal");
  }

  Prediction result;
  result.samples.reserve(cfg.num_samples);
  for (int i = 0; i < cfg.num_samples; ++i) {
    auto rng = make_stream(cfg.seed, "predict-path", static_cast<std::uint64_t>(i));
    result.samples.push_back(sample_path(start, goal, map, cfg, rng));
  }

  switch (cfg.strategy) {
    case Strategy::kClosestToGoal: {
      std::size_t best = 0;
      double best_d = final_goal_distance(start, result.samples[0], *goal);
      for (std::size_t i = 1; i < result.samples.size(); ++i) {
        const double d = final_goal_distance(start, result.samples[i], *goal);
        if (d < best_d) {
          best = i;
          best_d = d;
        }
      }
      result.selected = result.samples[best];
      break;
    }
    case Strategy::kMaxPopularity: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < result.samples.size(); ++i) {
        if (result.samples[i].score > result.samples[best].score) best = i;
      }
      result.selected = result.samples[best];
      break;
    }
    case Strategy::kMeanTop10:
      result.selected = mean_of_top(result.samples, map);
      break;
  }
  return result;
}

PredictedPath linear_baseline(const TargetState& start, int steps) {
  PredictedPath path;
  path.termination = Termination::kMaxSteps;
  path.states.reserve(std::max(steps, 0));
  TargetState state = start;
  state.heading = normalize_angle(state.heading);
  const Vec2 velocity = state.speed * Vec2(std::cos(state.heading), std::sin(state.heading));
  for (int i = 0; i < steps; ++i) {
    state.position += velocity;
    path.states.push_back(state);
  }
  return path;
}

}  // namespace pathcast
