#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "pathcast/navmap.hpp"
#include "pathcast/predictor.hpp"

namespace pathcast::testing {

/// Map whose every patch carries the same hand-authored statistics.
inline NavigationMap uniform_map(int width, int height, int patch_size,
                                 std::initializer_list<std::pair<int, double>> hod_mass,
                                 double mu, double sigma, double xi = 0.0, double rho = 1.0) {
  const PatchGrid grid(width, height, 1.0, patch_size);
  PatchStats stats;
  stats.visit_count = 1;
  stats.rho = rho;
  stats.xi = xi;
  for (const auto& [slot, mass] : hod_mass) {
    stats.hod[slot] = mass;
    if (slot > 0) stats.hos[slot - 1] = SpeedStats{mu, sigma, 100};
  }
  stats.hod /= stats.hod.sum();
  return NavigationMap("test", grid, BuilderConfig{}, std::vector<PatchStats>(grid.count(), stats));
}

/// Straight trajectory with unit frame spacing.
inline Trajectory line_trajectory(const std::string& agent, const std::string& cls, Vec2 from,
                                  Vec2 step, int count) {
  Trajectory t;
  t.agent_id = agent;
  t.class_id = cls;
  for (int i = 0; i < count; ++i) {
    const Vec2 p = from + static_cast<double>(i) * step;
    t.samples.push_back({i, p.x(), p.y()});
  }
  return t;
}

}  // namespace pathcast::testing
