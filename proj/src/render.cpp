#include "pathcast/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "pathcast/io.hpp"

namespace pathcast {

HeatmapField heatmap_field_from_string(const std::string& name) {
  if (name == "rho") return HeatmapField::kPopularity;
  if (name == "xi") return HeatmapField::kRouting;
  throw ValidationError("unknown heatmap field '" + name + "' (expected rho or xi)");
}

std::string heatmap_to_pgm(const NavigationMap& map, HeatmapField field) {
  const PatchGrid& g = map.grid();
  const auto value = [&](const PatchStats& s) {
    return field == HeatmapField::kPopularity ? s.rho : s.xi;
  };
  double peak = 0.0;
  for (const PatchStats& s : map.stats()) {
    if (s.observed()) peak = std::max(peak, value(s));
  }

  std::string out = "P5\n" + std::to_string(g.grid_width()) + " " +
                    std::to_string(g.grid_height()) + "\n255\n";
  out.reserve(out.size() + std::size_t(g.grid_width()) * g.grid_height());
  for (int iy = 0; iy < g.grid_height(); ++iy) {
    for (int ix = 0; ix < g.grid_width(); ++ix) {
      const PatchStats& s = map.stats()[(iy / g.patch_size()) * g.cols() + (ix / g.patch_size())];
      double v = 0.0;
      if (s.observed() && peak > 0.0) v = value(s) / peak;
      out.push_back(static_cast<char>(std::lround(255.0 * v)));
    }
  }
  return out;
}

void save_heatmap_pgm(const NavigationMap& map, HeatmapField field,
                      const std::filesystem::path& path) {
  atomic_write_file(path, heatmap_to_pgm(map, field));
}

namespace {

struct Rgb {
  unsigned char r, g, b;
};

// Muted palette for class labels; cycles past 12 classes.
constexpr std::array<Rgb, 12> kPalette = {{{64, 64, 64},
                                           {176, 176, 176},
                                           {96, 128, 72},
                                           {72, 96, 144},
                                           {144, 120, 72},
                                           {120, 72, 120},
                                           {72, 128, 128},
                                           {160, 96, 64},
                                           {96, 96, 160},
                                           {128, 144, 96},
                                           {160, 128, 128},
                                           {88, 112, 88}}};

class Canvas {
 public:
  Canvas(const SemanticGrid& grid) : grid_(grid), pixels_(std::size_t(grid.width()) * grid.height()) {
    for (int iy = 0; iy < grid.height(); ++iy) {
      for (int ix = 0; ix < grid.width(); ++ix) {
        pixels_[std::size_t(iy) * grid.width() + ix] = kPalette[grid.label(ix, iy) % kPalette.size()];
      }
    }
  }

  void plot_world(const Vec2& p, Rgb color) {
    const int ix = static_cast<int>(p.x() / grid_.cell_size());
    const int iy = static_cast<int>(p.y() / grid_.cell_size());
    if (ix < 0 || iy < 0 || ix >= grid_.width() || iy >= grid_.height()) return;
    pixels_[std::size_t(iy) * grid_.width() + ix] = color;
  }

  // Bresenham between the cells of two world points.
  void line_world(const Vec2& a, const Vec2& b, Rgb color) {
    int x0 = static_cast<int>(a.x() / grid_.cell_size());
    int y0 = static_cast<int>(a.y() / grid_.cell_size());
    const int x1 = static_cast<int>(b.x() / grid_.cell_size());
    const int y1 = static_cast<int>(b.y() / grid_.cell_size());
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
      if (x0 >= 0 && y0 >= 0 && x0 < grid_.width() && y0 < grid_.height()) {
        pixels_[std::size_t(y0) * grid_.width() + x0] = color;
      }
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }

  void draw_path(const TargetState& start, const PredictedPath& path, Rgb color) {
    Vec2 prev = start.position;
    plot_world(prev, color);
    for (const TargetState& s : path.states) {
      line_world(prev, s.position, color);
      prev = s.position;
    }
  }

  std::string to_ppm() const {
    std::string out = "P6\n" + std::to_string(grid_.width()) + " " +
                      std::to_string(grid_.height()) + "\n255\n";
    out.reserve(out.size() + pixels_.size() * 3);
    for (const Rgb& p : pixels_) {
      out.push_back(static_cast<char>(p.r));
      out.push_back(static_cast<char>(p.g));
      out.push_back(static_cast<char>(p.b));
    }
    return out;
  }

 private:
  const SemanticGrid& grid_;
  std::vector<Rgb> pixels_;
};

}  // namespace

std::string overlay_to_ppm(const SemanticGrid& grid, const TargetState& start,
                           const Prediction& prediction) {
  Canvas canvas(grid);
  for (const PredictedPath& path : prediction.samples) {
    canvas.draw_path(start, path, Rgb{120, 40, 40});
  }
  canvas.draw_path(start, prediction.selected, Rgb{255, 48, 48});
  return canvas.to_ppm();
}

void save_overlay_ppm(const SemanticGrid& grid, const TargetState& start,
                      const Prediction& prediction, const std::filesystem::path& path) {
  atomic_write_file(path, overlay_to_ppm(grid, start, prediction));
}

}  // namespace pathcast
