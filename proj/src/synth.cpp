#include "pathcast/synth.hpp"

#include <cmath>

#include "pathcast/predictor.hpp"
#include "pathcast/random.hpp"

namespace pathcast {

std::string to_string(Layout layout) {
  switch (layout) {
    case Layout::kStraightCorridor: return "straight-corridor";
    case Layout::kLCorridor: return "l-corridor";
    case Layout::kCrossroads: return "crossroads";
    case Layout::kRoundabout: return "roundabout";
  }
  return "?";
}

Layout layout_from_string(const std::string& name) {
  if (name == "straight-corridor") return Layout::kStraightCorridor;
  if (name == "l-corridor") return Layout::kLCorridor;
  if (name == "crossroads") return Layout::kCrossroads;
  if (name == "roundabout") return Layout::kRoundabout;
  throw ValidationError("unknown layout '" + name + "'");
}

void SynthSpec::validate() const {
  if (width <= 0 || height <= 0) throw ValidationError("synth: grid dimensions must be positive");
  if (cell_size <= 0.0) throw ValidationError("synth: cell_size must be positive");
  if (patch_size <= 0) throw ValidationError("synth: patch_size must be positive");
  if (trajectory_count < 1) throw ValidationError("synth: trajectory_count must be >= 1");
  if (!(speed_mean > 0.0)) throw ValidationError("synth: speed_mean must be positive");
  if (speed_std < 0.0) throw ValidationError("synth: speed_std must be >= 0");
  if (stop_prob < 0.0 || stop_prob >= 1.0) throw ValidationError("synth: stop_prob must be in [0, 1)");
  if (turn_prob < 0.0 || turn_prob >= 1.0) throw ValidationError("synth: turn_prob must be in [0, 1)");
  if (west_entry_fraction < 0.0 || west_entry_fraction > 1.0) {
    throw ValidationError("synth: west_entry_fraction must be in [0, 1]");
  }
  if (center_x_frac <= 0.0 || center_x_frac >= 1.0 || center_y_frac <= 0.0 || center_y_frac >= 1.0) {
    throw ValidationError("synth: center fractions must be in (0, 1)");
  }
  if (max_steps < 1) throw ValidationError("synth: max_steps must be >= 1");
  if (process_noise < 0.0) throw ValidationError("synth: process_noise must be >= 0");
}

namespace {

// Direction slots (see navmap.hpp): 1 = E, 2 = NE, 3 = N, 4 = NW, 5 = W,
// 6 = SW, 7 = S, 8 = SE; 0 = stop.
constexpr int kStop = 0, kEast = 1, kNorth = 3;

struct LayoutCanvas {
  int width, height, patch_size;
  double cell_size;
  std::vector<std::uint8_t> labels;
  PatchGrid patches;
  std::vector<PatchStats> stats;

  explicit LayoutCanvas(const SynthSpec& spec)
      : width(spec.width),
        height(spec.height),
        patch_size(spec.patch_size),
        cell_size(spec.cell_size),
        labels(std::size_t(width) * height, 0),
        patches(width, height, spec.cell_size, spec.patch_size),
        stats(patches.count()) {}

  void paint_cells(int x0, int y0, int x1, int y1, std::uint8_t label) {
    x0 = std::max(x0, 0); y0 = std::max(y0, 0);
    x1 = std::min(x1, width); y1 = std::min(y1, height);
    for (int iy = y0; iy < y1; ++iy) {
      for (int ix = x0; ix < x1; ++ix) labels[std::size_t(iy) * width + ix] = label;
    }
  }

  void paint_patches(int px0, int py0, int px1, int py1, std::uint8_t label) {
    paint_cells(px0 * patch_size, py0 * patch_size, px1 * patch_size, py1 * patch_size, label);
  }

  bool in_patch_bounds(int px, int py) const {
    return px >= 0 && py >= 0 && px < patches.cols() && py < patches.rows();
  }

  // Hand-authored patch statistics: hod mass per slot, with speed fits for
  // every moving slot. The nominal sample count feeds transfer pooling.
  void author(int px, int py, std::initializer_list<std::pair<int, double>> hod_mass, double xi,
              double mu, double sigma) {
    if (!in_patch_bounds(px, py)) return;
    PatchStats& s = stats[patches.flat({px, py})];
    s = PatchStats{};
    s.visit_count = 1;
    s.rho = 1.0;
    s.xi = xi;
    for (const auto& [slot, mass] : hod_mass) {
      s.hod[slot] = mass;
      if (slot > 0) s.hos[slot - 1] = SpeedStats{mu, std::max(sigma, 1e-3), 1000};
    }
    const double sum = s.hod.sum();
    if (!(sum > 0.0)) throw ValidationError("synth: authored patch without probability mass");
    s.hod /= sum;
  }
};

struct EntryPoint {
  Vec2 position;
  double heading;
};

// Tangent slot of counterclockwise circulation at scene angle phi.
int ccw_tangent_slot(double phi) {
  return quantize_direction(phi + kPi / 2.0, 1.0, 0.0);
}

void build_straight(const SynthSpec& spec, LayoutCanvas& canvas, std::vector<EntryPoint>& entries) {
  const int row = canvas.patches.rows() / 2;
  canvas.paint_patches(0, row, canvas.patches.cols(), row + 1, 1);
  for (int px = 0; px < canvas.patches.cols(); ++px) {
    if (spec.stop_prob > 0.0) {
      canvas.author(px, row, {{kEast, 1.0 - spec.stop_prob}, {kStop, spec.stop_prob}}, 0.0,
                    spec.speed_mean, spec.speed_std);
    } else {
      canvas.author(px, row, {{kEast, 1.0}}, 0.0, spec.speed_mean, spec.speed_std);
    }
  }
  const double y = (row * spec.patch_size + spec.patch_size / 2.0) * spec.cell_size;
  entries.push_back({Vec2(spec.cell_size, y), 0.0});
}

void build_l_corridor(const SynthSpec& spec, LayoutCanvas& canvas,
                      std::vector<EntryPoint>& entries) {
  const int c = std::max(1, canvas.patches.cols() / 2 - 1);
  canvas.paint_patches(0, c, c + 1, c + 1, 1);                       // west arm incl. corner
  canvas.paint_patches(c, c + 1, c + 1, canvas.patches.rows(), 1);   // north arm
  // Asymmetric landmark blocks; they make every corridor patch descriptor
  // unique (the shell histograms alone cannot tell arm orientations apart).
  canvas.paint_patches(c + 3, 2, c + 5, 4, 2);
  canvas.paint_patches(2, c + 3, 3, c + 4, 3);

  for (int px = 0; px < c; ++px) {
    canvas.author(px, c, {{kEast, 1.0}}, 0.0, spec.speed_mean, spec.speed_std);
  }
  canvas.author(c, c, {{kNorth, 1.0}}, 0.9, spec.speed_mean, spec.speed_std);
  for (int py = c + 1; py < canvas.patches.rows(); ++py) {
    canvas.author(c, py, {{kNorth, 1.0}}, 0.0, spec.speed_mean, spec.speed_std);
  }
  const double y = (c * spec.patch_size + spec.patch_size / 2.0) * spec.cell_size;
  entries.push_back({Vec2(spec.cell_size, y), 0.0});
}

void build_crossroads(const SynthSpec& spec, LayoutCanvas& canvas,
                      std::vector<EntryPoint>& entries) {
  const int cols = canvas.patches.cols();
  const int rows = canvas.patches.rows();
  const int ccx = std::clamp(static_cast<int>(spec.center_x_frac * cols), 3, cols - 4);
  const int ccy = std::clamp(static_cast<int>(spec.center_y_frac * rows), 3, rows - 4);

  canvas.paint_patches(0, ccy - 1, cols, ccy + 2, 1);  // horizontal band, 3 patches tall
  canvas.paint_patches(ccx - 1, 0, ccx + 2, rows, 1);  // vertical band, 3 patches wide
  canvas.paint_patches(ccx + 3, ccy + 3, ccx + 5, ccy + 5, 2);
  canvas.paint_patches(ccx - 6, ccy + 2, ccx - 4, ccy + 4, 3);

  const double mu = spec.speed_mean, sd = spec.speed_std;
  const double stop = spec.stop_prob;
  for (int py = ccy - 1; py <= ccy + 1; ++py) {
    for (int px = 0; px < cols; ++px) {
      if (px >= ccx - 1 && px <= ccx + 1) continue;  // center region
      if (stop > 0.0) {
        canvas.author(px, py, {{kEast, 1.0 - stop}, {kStop, stop}}, 0.1, mu, sd);
      } else {
        canvas.author(px, py, {{kEast, 1.0}}, 0.1, mu, sd);
      }
    }
  }
  for (int px = ccx - 1; px <= ccx + 1; ++px) {
    for (int py = 0; py < rows; ++py) {
      if (py >= ccy - 1 && py <= ccy + 1) continue;
      if (stop > 0.0) {
        canvas.author(px, py, {{kNorth, 1.0 - stop}, {kStop, stop}}, 0.1, mu, sd);
      } else {
        canvas.author(px, py, {{kNorth, 1.0}}, 0.1, mu, sd);
      }
    }
  }
  // Routing region: a 3x3 window where eastbound traffic may head north and
  // northbound traffic may head east.
  const double turn = spec.turn_prob;
  for (int px = ccx - 1; px <= ccx + 1; ++px) {
    for (int py = ccy - 1; py <= ccy + 1; ++py) {
      canvas.author(px, py, {{kEast, (1.0 - turn) * 0.8}, {kNorth, turn * 0.8}, {kStop, 0.2}}, 0.6,
                    mu, sd);
    }
  }

  const double wy = (ccy * spec.patch_size + spec.patch_size / 2.0) * spec.cell_size;
  const double sx = (ccx * spec.patch_size + spec.patch_size / 2.0) * spec.cell_size;
  entries.push_back({Vec2(spec.cell_size, wy), 0.0});          // west entry, eastbound
  entries.push_back({Vec2(sx, spec.cell_size), kPi / 2.0});    // south entry, northbound
}

void build_roundabout(const SynthSpec& spec, LayoutCanvas& canvas,
                      std::vector<EntryPoint>& entries) {
  const double cx = 0.5 * spec.width, cy = 0.5 * spec.height;
  const double r_out = 0.33 * std::min(spec.width, spec.height);
  const double r_in = 0.5 * r_out;
  for (int iy = 0; iy < spec.height; ++iy) {
    for (int ix = 0; ix < spec.width; ++ix) {
      const double d = std::hypot(ix + 0.5 - cx, iy + 0.5 - cy);
      if (d >= r_in && d < r_out) canvas.labels[std::size_t(iy) * spec.width + ix] = 1;
      if (d < 0.6 * r_in) canvas.labels[std::size_t(iy) * spec.width + ix] = 2;
    }
  }
  const int arm_row = static_cast<int>(cy - spec.patch_size / 2.0) / spec.patch_size;
  const int arm_col = static_cast<int>(cx - spec.patch_size / 2.0) / spec.patch_size;
  const int arm_len = std::max(1, static_cast<int>((cx - r_out) / spec.patch_size));
  canvas.paint_patches(0, arm_row, arm_len, arm_row + 1, 1);  // west entry arm
  canvas.paint_patches(canvas.patches.cols() - arm_len, arm_row, canvas.patches.cols(),
                       arm_row + 1, 1);                       // east exit arm
  canvas.paint_patches(arm_col, canvas.patches.rows() - arm_len, arm_col + 1,
                       canvas.patches.rows(), 1);             // north exit arm
  canvas.paint_cells(static_cast<int>(0.75 * spec.width), static_cast<int>(0.08 * spec.height),
                     static_cast<int>(0.92 * spec.width), static_cast<int>(0.22 * spec.height), 3);

  const double mu = spec.speed_mean, sd = spec.speed_std;
  for (int flat = 0; flat < canvas.patches.count(); ++flat) {
    const PatchIndex p = canvas.patches.unflat(flat);
    const Vec2 centroid = canvas.patches.patch_centroid(p);
    const double d = std::hypot(centroid.x() - cx, centroid.y() - cy);
    if (d < r_in || d >= r_out) continue;
    const double phi = std::atan2(centroid.y() - cy, centroid.x() - cx);
    const int tangent = ccw_tangent_slot(phi);
    if (angular_distance(phi, 0.0) < kPi / 8.0) {
      canvas.author(p.x, p.y, {{tangent, 0.65}, {kEast, 0.35}}, 0.4, mu, sd);
    } else if (angular_distance(phi, kPi / 2.0) < kPi / 8.0) {
      canvas.author(p.x, p.y, {{tangent, 0.65}, {kNorth, 0.35}}, 0.4, mu, sd);
    } else {
      canvas.author(p.x, p.y, {{tangent, 1.0}}, 0.4, mu, sd);
    }
  }
  for (int px = 0; px < arm_len; ++px) {
    canvas.author(px, arm_row, {{kEast, 1.0}}, 0.0, mu, sd);
    canvas.author(canvas.patches.cols() - 1 - px, arm_row, {{kEast, 1.0}}, 0.0, mu, sd);
    canvas.author(arm_col, canvas.patches.rows() - 1 - px, {{kNorth, 1.0}}, 0.0, mu, sd);
  }
  const double y = (arm_row * spec.patch_size + spec.patch_size / 2.0) * spec.cell_size;
  entries.push_back({Vec2(spec.cell_size, y), 0.0});
}

}  // namespace

SynthScene generate_scene(const SynthSpec& spec) {
  spec.validate();

  LayoutCanvas canvas(spec);
  std::vector<EntryPoint> entries;
  int class_count = 2;
  switch (spec.layout) {
    case Layout::kStraightCorridor:
      build_straight(spec, canvas, entries);
      class_count = 2;
      break;
    case Layout::kLCorridor:
      build_l_corridor(spec, canvas, entries);
      class_count = 4;
      break;
    case Layout::kCrossroads:
      build_crossroads(spec, canvas, entries);
      class_count = 4;
      break;
    case Layout::kRoundabout:
      build_roundabout(spec, canvas, entries);
      class_count = 4;
      break;
  }

  SemanticGrid grid(spec.width, spec.height, class_count, spec.cell_size, canvas.labels);
  BuilderConfig builder;
  NavigationMap generator(spec.class_id, canvas.patches, builder, std::move(canvas.stats));
  generator.validate();

  PredictorConfig cfg;
  cfg.process_noise = spec.process_noise;
  cfg.heading_smoothing = spec.heading_smoothing;
  cfg.max_steps = spec.max_steps;
  cfg.unobserved = UnobservedPolicy::kContinue;

  std::vector<Trajectory> trajectories;
  trajectories.reserve(spec.trajectory_count);
  for (int i = 0; i < spec.trajectory_count; ++i) {
    auto rng = make_stream(spec.seed, "synth-path", static_cast<std::uint64_t>(i));
    EntryPoint entry = entries.front();
    if (entries.size() > 1) {
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      entry = uniform(rng) < spec.west_entry_fraction ? entries[0] : entries[1];
    }

    TargetState start;
    start.position = entry.position;
    start.heading = entry.heading;
    start.speed = spec.speed_mean;
    const PredictedPath path = sample_path(start, std::nullopt, generator, cfg, rng);
    if (path.states.empty()) {
      throw ValidationError("synth: a sampled trajectory left the scene immediately");
    }

    Trajectory t;
    t.agent_id = "synth-" + std::to_string(i);
    t.class_id = spec.class_id;
    t.samples.reserve(path.states.size() + 1);
    t.samples.push_back({0, start.position.x(), start.position.y()});
    for (std::size_t k = 0; k < path.states.size(); ++k) {
      t.samples.push_back({static_cast<std::int64_t>(k + 1), path.states[k].position.x(),
                           path.states[k].position.y()});
    }
    trajectories.push_back(std::move(t));
  }

  return SynthScene{std::move(grid), std::move(generator), std::move(trajectories)};
}

}  // namespace pathcast
