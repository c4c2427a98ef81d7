#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pathcast/common.hpp"
#include "pathcast/grid.hpp"

namespace pathcast {

/// Compass quantization: 8 sectors of 45 degrees counterclockwise from east,
/// plus slot 0 for the stop symbol.
inline constexpr int kNumDirections = 8;
inline constexpr int kHodSize = kNumDirections + 1;

using Hod = Eigen::Matrix<double, kHodSize, 1>;

/// Center heading of a compass slot (1..8). Slot 0 has no geometric angle.
inline double sector_angle(int direction) {
  return normalize_angle((direction - 1) * (kTwoPi / kNumDirections));
}

/// Direction slot for a leaving velocity: 0 when the speed is below
/// stop_threshold, otherwise the nearest 45-degree sector (ties round up).
inline int quantize_direction(double heading, double speed, double stop_threshold) {
  if (speed < stop_threshold) return 0;
  const double sectors = normalize_angle(heading) / (kTwoPi / kNumDirections);
  const int k = static_cast<int>(std::lround(sectors)) % kNumDirections;
  return k + 1;
}

/// Moment summary of the leaving speeds observed for one direction; backs a
/// Gamma model with shape (mu/sigma)^2 and scale sigma^2/mu.
struct SpeedStats {
  double mu = 0.0;
  double sigma = 0.0;
  std::int64_t n = 0;

  bool fitted() const { return n > 0; }
  double gamma_shape() const { return (mu / sigma) * (mu / sigma); }
  double gamma_scale() const { return sigma * sigma / mu; }
};

/// Method-of-moments fit: mu = sample mean, sigma = population std, floored
/// at sigma_floor so degenerate samples stay usable.
inline SpeedStats fit_speed_histogram(const std::vector<double>& speeds, double sigma_floor = 1e-3) {
  SpeedStats s;
  s.n = static_cast<std::int64_t>(speeds.size());
  if (speeds.empty()) return s;
  double sum = 0.0;
  for (const double v : speeds) sum += v;
  s.mu = sum / static_cast<double>(speeds.size());
  double ss = 0.0;
  for (const double v : speeds) ss += (v - s.mu) * (v - s.mu);
  s.sigma = std::max(std::sqrt(ss / static_cast<double>(speeds.size())), sigma_floor);
  return s;
}

/// Navigation statistics of one patch.
struct PatchStats {
  double rho = 0.0;  // popularity, visit count normalized by the busiest patch
  double xi = 0.0;   // routing score, saturated mean curvature
  Hod hod = Hod::Zero();
  std::array<SpeedStats, kNumDirections> hos{};
  std::int64_t visit_count = 0;

  bool observed() const { return visit_count > 0; }
  /// A patch can be visited yet have no leaving segment (trajectory ends
  /// there); such patches carry an all-zero hod.
  bool has_directions() const { return hod.sum() > 0.5; }
};

struct BuilderConfig {
  double stop_threshold = 0.05;      // speeds below this count as the stop symbol
  double kappa0 = 0.2;               // curvature half-saturation: xi = K/(K + kappa0)
  double sigma_floor = 1e-3;
  // Curvature samples below this speed are skipped: sub-stop motion is
  // position noise, and its curvature (inverse-cubic in speed) would swamp
  // the routing score.
  double min_curvature_speed = 0.05;

  friend bool operator==(const BuilderConfig&, const BuilderConfig&) = default;
};

/// Per-class navigation map over a patch grid. Immutable after construction.
class NavigationMap {
 public:
  NavigationMap(std::string class_id, PatchGrid grid, BuilderConfig config,
                std::vector<PatchStats> stats, std::int64_t dropped_samples = 0)
      : class_id_(std::move(class_id)),
        grid_(grid),
        config_(config),
        stats_(std::move(stats)),
        dropped_samples_(dropped_samples) {
    if (stats_.size() != static_cast<std::size_t>(grid_.count())) {
      throw ValidationError("navigation map stats do not match the patch grid");
    }
  }

  const std::string& class_id() const { return class_id_; }
  const PatchGrid& grid() const { return grid_; }
  const BuilderConfig& config() const { return config_; }
  const std::vector<PatchStats>& stats() const { return stats_; }
  const PatchStats& at(PatchIndex p) const { return stats_[grid_.flat(p)]; }
  std::int64_t dropped_samples() const { return dropped_samples_; }

  /// Checks the per-patch invariants; throws ValidationError on violation.
  void validate() const;

 private:
  std::string class_id_;
  PatchGrid grid_;
  BuilderConfig config_;
  std::vector<PatchStats> stats_;
  std::int64_t dropped_samples_;
};

/// Estimates the navigation map of one agent class from trajectories.
/// Out-of-bounds samples are dropped and counted. Deterministic: identical
/// inputs produce identical maps bit for bit.
NavigationMap build_map(const std::vector<Trajectory>& trajectories, const PatchGrid& grid,
                        const std::string& class_id, const BuilderConfig& config = {});

}  // namespace pathcast
