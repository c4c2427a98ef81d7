#include "pathcast/navmap.hpp"

#include <algorithm>
#include <optional>

#include "pathcast/kinematics.hpp"

namespace pathcast {

void NavigationMap::validate() const {
  for (int i = 0; i < grid_.count(); ++i) {
    const PatchStats& s = stats_[i];
    if (!s.observed()) continue;
    if (s.rho < 0.0 || s.rho > 1.0) throw ValidationError("rho out of [0,1]");
    if (s.xi < 0.0 || s.xi > 1.0) throw ValidationError("xi out of [0,1]");
    if (s.hod.minCoeff() < 0.0) throw ValidationError("hod entry negative");
    if (s.has_directions() && std::fabs(s.hod.sum() - 1.0) > 1e-9) {
      throw ValidationError("hod of an observed patch does not sum to 1");
    }
    for (const SpeedStats& h : s.hos) {
      if (h.fitted() && !(h.mu > 0.0 && h.sigma >= 0.0)) {
        throw ValidationError("fitted speed histogram with non-positive mean");
      }
    }
  }
}

namespace {

struct PatchAccumulator {
  std::int64_t visits = 0;
  std::array<std::int64_t, kHodSize> direction_counts{};
  std::array<std::vector<double>, kNumDirections> speeds;
  double curvature_sum = 0.0;
  std::int64_t curvature_n = 0;
};

}  // namespace

NavigationMap build_map(const std::vector<Trajectory>& trajectories, const PatchGrid& grid,
                        const std::string& class_id, const BuilderConfig& config) {
  if (trajectories.empty()) throw ValidationError("build_map: empty trajectory set");
  for (const Trajectory& t : trajectories) {
    t.validate();
    if (t.class_id != class_id) {
      throw ValidationError("build_map: trajectory '" + t.agent_id + "' has class '" + t.class_id +
                            "', expected '" + class_id + "'");
    }
  }

  std::vector<PatchAccumulator> acc(grid.count());
  std::int64_t dropped = 0;

  for (const Trajectory& traj : trajectories) {
    const std::size_t n = traj.samples.size();

    // Visits: one per (trajectory, patch-entry) event. Leaving the scene
    // resets the run, so a re-entry counts again.
    std::optional<int> current;
    std::vector<std::optional<int>> patch_of(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = grid.world_to_patch(traj.position(i));
      if (!p) {
        ++dropped;
        current.reset();
        continue;
      }
      const int flat = grid.flat(*p);
      patch_of[i] = flat;
      if (!current || *current != flat) {
        ++acc[flat].visits;
        current = flat;
      }
    }

    // Leaving velocities: the segment's start point determines the patch.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!patch_of[i]) continue;
      const double dt = static_cast<double>(traj.samples[i + 1].frame - traj.samples[i].frame);
      const Vec2 d = (traj.position(i + 1) - traj.position(i)) / dt;
      const double speed = d.norm();
      const int dir = quantize_direction(std::atan2(d.y(), d.x()), speed, config.stop_threshold);
      PatchAccumulator& a = acc[*patch_of[i]];
      ++a.direction_counts[dir];
      if (dir > 0) a.speeds[dir - 1].push_back(speed);
    }

    // Curvature samples at every in-bounds sample with meaningful speed.
    // Sub-stop motion is position noise; its curvature would be noise cubed.
    if (n >= 3) {
      const double speed_floor = std::max(config.min_curvature_speed, config.stop_threshold);
      std::vector<Vec2> pos(n);
      for (std::size_t i = 0; i < n; ++i) pos[i] = traj.position(i);
      const auto derivs = finite_diff_derivatives(pos);
      for (std::size_t i = 0; i < n; ++i) {
        if (!patch_of[i]) continue;
        if (const auto k = curvature(derivs[i], speed_floor)) {
          acc[*patch_of[i]].curvature_sum += *k;
          ++acc[*patch_of[i]].curvature_n;
        }
      }
    }
  }

  std::int64_t max_visits = 0;
  for (const auto& a : acc) max_visits = std::max(max_visits, a.visits);
  if (max_visits == 0) throw ValidationError("build_map: no trajectory sample falls inside the grid");

  std::vector<PatchStats> stats(grid.count());
  for (int i = 0; i < grid.count(); ++i) {
    const PatchAccumulator& a = acc[i];
    PatchStats& s = stats[i];
    s.visit_count = a.visits;
    if (a.visits == 0) continue;  // unobserved: no fitted stats

    s.rho = static_cast<double>(a.visits) / static_cast<double>(max_visits);

    if (a.curvature_n > 0) {
      const double mean_k = a.curvature_sum / static_cast<double>(a.curvature_n);
      s.xi = mean_k / (mean_k + config.kappa0);
    }

    std::int64_t total = 0;
    for (const auto c : a.direction_counts) total += c;
    if (total > 0) {
      for (int d = 0; d < kHodSize; ++d) {
        s.hod[d] = static_cast<double>(a.direction_counts[d]) / static_cast<double>(total);
      }
    }
    for (int d = 0; d < kNumDirections; ++d) {
      s.hos[d] = fit_speed_histogram(a.speeds[d], config.sigma_floor);
    }
  }

  NavigationMap map(class_id, grid, config, std::move(stats), dropped);
  map.validate();
  return map;
}

}  // namespace pathcast
