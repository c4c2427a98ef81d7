#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pathcast/common.hpp"

namespace pathcast {

struct PatchIndex {
  int x = 0;
  int y = 0;
  friend bool operator==(const PatchIndex&, const PatchIndex&) = default;
};

/// Per-cell class labels of a scene. Cell (ix, iy) covers the half-open
/// world rectangle [ix*cell_size, (ix+1)*cell_size) x [iy*cell_size,
/// (iy+1)*cell_size); labels are row-major, index iy*width + ix.
class SemanticGrid {
 public:
  SemanticGrid(int width, int height, int class_count, double cell_size,
               std::vector<std::uint8_t> labels)
      : width_(width),
        height_(height),
        class_count_(class_count),
        cell_size_(cell_size),
        labels_(std::move(labels)) {
    if (width_ <= 0 || height_ <= 0) throw ValidationError("grid dimensions must be positive");
    if (cell_size_ <= 0.0) throw ValidationError("cell_size must be positive");
    if (class_count_ <= 0 || class_count_ > 256) {
      throw ValidationError("class_count must be in [1, 256]");
    }
    if (labels_.size() != static_cast<std::size_t>(width_) * height_) {
      throw ValidationError("label array does not match grid dimensions");
    }
    for (const auto v : labels_) {
      if (v >= class_count_) {
        throw ValidationError("label " + std::to_string(int(v)) + " out of range [0, " +
                              std::to_string(class_count_) + ")");
      }
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int class_count() const { return class_count_; }
  double cell_size() const { return cell_size_; }
  double world_width() const { return width_ * cell_size_; }
  double world_height() const { return height_ * cell_size_; }

  std::uint8_t label(int ix, int iy) const { return labels_[std::size_t(iy) * width_ + ix]; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }

  bool contains(const Vec2& p) const {
    return p.x() >= 0.0 && p.y() >= 0.0 && p.x() < world_width() && p.y() < world_height();
  }

 private:
  int width_;
  int height_;
  int class_count_;
  double cell_size_;
  std::vector<std::uint8_t> labels_;
};

/// Uniform square partition of a cell grid into patches of patch_size cells
/// per side. Edge patches are clipped to the grid; cells and patches tile the
/// world with half-open extents, so every in-bounds point lies in exactly one
/// patch and boundary points resolve by floor.
class PatchGrid {
 public:
  PatchGrid(int grid_width, int grid_height, double cell_size, int patch_size)
      : grid_width_(grid_width),
        grid_height_(grid_height),
        cell_size_(cell_size),
        patch_size_(patch_size) {
    if (grid_width_ <= 0 || grid_height_ <= 0) throw ValidationError("grid dimensions must be positive");
    if (cell_size_ <= 0.0) throw ValidationError("cell_size must be positive");
    if (patch_size_ <= 0) throw ValidationError("patch_size must be positive");
    cols_ = (grid_width_ + patch_size_ - 1) / patch_size_;
    rows_ = (grid_height_ + patch_size_ - 1) / patch_size_;
  }

  static PatchGrid over(const SemanticGrid& grid, int patch_size) {
    return PatchGrid(grid.width(), grid.height(), grid.cell_size(), patch_size);
  }

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  int count() const { return cols_ * rows_; }
  int patch_size() const { return patch_size_; }
  double cell_size() const { return cell_size_; }
  int grid_width() const { return grid_width_; }
  int grid_height() const { return grid_height_; }
  double world_width() const { return grid_width_ * cell_size_; }
  double world_height() const { return grid_height_ * cell_size_; }
  /// World-unit length of a full patch side.
  double patch_world() const { return patch_size_ * cell_size_; }

  /// The unique patch containing an in-bounds point; nullopt marks
  /// out-of-scene (used as a path-termination signal downstream).
  std::optional<PatchIndex> world_to_patch(const Vec2& p) const {
    if (!(p.x() >= 0.0 && p.y() >= 0.0)) return std::nullopt;
    const int cx = static_cast<int>(p.x() / cell_size_);
    const int cy = static_cast<int>(p.y() / cell_size_);
    if (cx >= grid_width_ || cy >= grid_height_) return std::nullopt;
    return PatchIndex{cx / patch_size_, cy / patch_size_};
  }

  int flat(PatchIndex p) const { return p.y * cols_ + p.x; }
  PatchIndex unflat(int i) const { return PatchIndex{i % cols_, i / cols_}; }

  /// Covered cell ranges [x0,x1) x [y0,y1); edge patches are smaller.
  void cell_span(PatchIndex p, int& x0, int& x1, int& y0, int& y1) const {
    x0 = p.x * patch_size_;
    x1 = std::min(grid_width_, x0 + patch_size_);
    y0 = p.y * patch_size_;
    y1 = std::min(grid_height_, y0 + patch_size_);
  }

  /// World center of the patch's covered cell region.
  Vec2 patch_centroid(PatchIndex p) const {
    int x0, x1, y0, y1;
    cell_span(p, x0, x1, y0, y1);
    return Vec2(0.5 * (x0 + x1) * cell_size_, 0.5 * (y0 + y1) * cell_size_);
  }

  friend bool operator==(const PatchGrid& a, const PatchGrid& b) {
    return a.grid_width_ == b.grid_width_ && a.grid_height_ == b.grid_height_ &&
           a.cell_size_ == b.cell_size_ && a.patch_size_ == b.patch_size_;
  }

 private:
  int grid_width_;
  int grid_height_;
  double cell_size_;
  int patch_size_;
  int cols_ = 0;
  int rows_ = 0;
};

struct TrajectorySample {
  std::int64_t frame = 0;
  double x = 0.0;
  double y = 0.0;
};

/// Timestamped positions of one agent, tagged with its class.
struct Trajectory {
  std::string agent_id;
  std::string class_id;
  std::vector<TrajectorySample> samples;

  Vec2 position(std::size_t i) const { return Vec2(samples[i].x, samples[i].y); }

  /// Frames strictly increasing; at least two samples for training use.
  void validate() const {
    if (samples.size() < 2) {
      throw ValidationError("trajectory '" + agent_id + "' has fewer than 2 samples");
    }
    for (std::size_t i = 1; i < samples.size(); ++i) {
      if (samples[i].frame <= samples[i - 1].frame) {
        throw ValidationError("trajectory '" + agent_id + "': frames not strictly increasing at sample " +
                              std::to_string(i));
      }
    }
  }
};

}  // namespace pathcast
