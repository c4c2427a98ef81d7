#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathcast/grid.hpp"
#include "pathcast/navmap.hpp"

namespace pathcast {

enum class Layout { kStraightCorridor, kLCorridor, kCrossroads, kRoundabout };

std::string to_string(Layout layout);
Layout layout_from_string(const std::string& name);

/// Recipe for a synthetic scene: a labeled layout plus the hand-authored
/// navigation statistics that drive the sampled trajectories.
struct SynthSpec {
  Layout layout = Layout::kStraightCorridor;
  int width = 96;
  int height = 96;
  double cell_size = 1.0;
  int patch_size = 8;
  int trajectory_count = 200;
  std::uint64_t seed = 0;
  std::string class_id = "pedestrian";

  double speed_mean = 2.0;        // cells per frame along the corridors
  double speed_std = 0.2;
  double stop_prob = 0.0;         // straight corridor: hod mass on the stop slot
  double process_noise = 0.0;     // generator position noise
  double heading_smoothing = 1.0; // generator lambda
  double turn_prob = 0.5;         // crossroads center: hod mass on the turning exit
  double west_entry_fraction = 0.8;  // crossroads: share of entries from the west
  double center_x_frac = 0.5;     // crossroads center position, fraction of the grid
  double center_y_frac = 0.5;
  int max_steps = 400;

  void validate() const;
};

struct SynthScene {
  SemanticGrid grid;
  NavigationMap generator;  // the map the trajectories were sampled from
  std::vector<Trajectory> trajectories;
};

/// Samples trajectories by running the prediction model on the hand-authored
/// generator map. Deterministic under the spec's seed.
SynthScene generate_scene(const SynthSpec& spec);

}  // namespace pathcast
