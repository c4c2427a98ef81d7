#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pathcast/common.hpp"
#include "pathcast/navmap.hpp"

namespace pathcast {

/// Continuous target state: position plus polar velocity.
struct TargetState {
  Vec2 position{0.0, 0.0};
  double speed = 0.0;    // magnitude, world units per frame
  double heading = 0.0;  // radians in [0, 2*pi)
};

enum class Strategy { kClosestToGoal, kMaxPopularity, kMeanTop10 };
enum class Termination { kGoalReached, kOutOfScene, kMaxSteps };
enum class UnobservedPolicy { kContinue, kTerminate };

std::string to_string(Strategy s);
std::string to_string(Termination t);
Strategy strategy_from_string(const std::string& s);

struct PredictorConfig {
  double process_noise = 0.1;      // std of the white position noise, world units
  double heading_smoothing = 1.0;  // lambda: weight of heading similarity
  double stop_distance = kPi;      // pseudo-distance of the stop slot
  double alpha_cap = 50.0;         // cap on (1-xi)/xi
  int max_steps = 500;
  double goal_radius = 0.0;        // <= 0: one patch side of the map at hand
  std::uint64_t seed = 0;
  int num_samples = 100;
  Strategy strategy = Strategy::kClosestToGoal;
  UnobservedPolicy unobserved = UnobservedPolicy::kContinue;
};

struct PredictedPath {
  std::vector<TargetState> states;  // generated states; the start state is not included
  double score = 0.0;               // mean popularity over crossed patches
  Termination termination = Termination::kMaxSteps;
  int fallback_steps = 0;           // steps taken on unobserved patches
};

struct Prediction {
  PredictedPath selected;
  std::vector<PredictedPath> samples;  // ordered by sample index
};

/// Heading-conditioned direction weights: each hod entry reweighted by
/// exp(-lambda * d(heading, slot heading)) and renormalized. The stop slot
/// uses the fixed pseudo-distance stop_distance.
Hod direction_weights(double heading, const Hod& hod, double lambda, double stop_distance = kPi);

/// Routing randomization: entries mapped through x^alpha (1-x)^alpha with
/// alpha = min((1-xi)/xi, alpha_cap), renormalized over the support of pf.
/// Zero entries stay zero; xi = 1 gives the uniform distribution on the
/// support; xi -> 0 approaches the escort limit.
Eigen::VectorXd routing_transform(const Eigen::Ref<const Eigen::VectorXd>& pf, double xi,
                                  double alpha_cap);

/// One strictly positive draw from the Gamma model behind a speed histogram.
double sample_gamma_speed(const SpeedStats& stats, std::mt19937_64& rng);

struct StepOutcome {
  TargetState next;
  bool unobserved = false;  // the step ran on the fallback dynamics
  int direction = -1;       // sampled slot, -1 on fallback
};

/// One DBN transition from an in-bounds state: velocity drawn from the
/// occupied patch's statistics, then the position advanced with the new
/// velocity plus white noise. Returns nullopt when the patch is unobserved
/// and the policy is to terminate.
std::optional<StepOutcome> sample_step(const TargetState& state, const NavigationMap& map,
                                       const PredictorConfig& cfg, std::mt19937_64& rng);

/// Iterates sample_step until the goal radius is reached, the path leaves the
/// scene, or max_steps; the score is the mean popularity of the patches the
/// generated states cross.
PredictedPath sample_path(const TargetState& start, const std::optional<Vec2>& goal,
                          const NavigationMap& map, const PredictorConfig& cfg,
                          std::mt19937_64& rng);

/// Draws num_samples independent paths (stream per sample index, so results
/// are reproducible and order-independent) and selects one per the strategy.
Prediction predict(const TargetState& start, const std::optional<Vec2>& goal,
                   const NavigationMap& map, const PredictorConfig& cfg);

/// Constant-velocity propagation of the start state, zero noise.
PredictedPath linear_baseline(const TargetState& start, int steps);

}  // namespace pathcast
