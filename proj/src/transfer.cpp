#include "pathcast/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pathcast {

namespace {

constexpr double kFar = 1e12;  // larger than any squared cell distance in range

// Felzenszwalb-Huttenlocher 1-D squared distance transform.
void dt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
           std::vector<double>& z, int n) {
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
    while (s <= z[k]) {
      --k;
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    d[q] = double(q - v[k]) * (q - v[k]) + f[v[k]];
  }
}

}  // namespace

std::vector<double> label_distance_field(const SemanticGrid& grid, int label) {
  const int w = grid.width();
  const int h = grid.height();
  const double diagonal = std::hypot(grid.world_width(), grid.world_height());
  std::vector<double> field(std::size_t(w) * h, diagonal);

  bool present = false;
  std::vector<double> sq(std::size_t(w) * h);
  for (int iy = 0; iy < h; ++iy) {
    for (int ix = 0; ix < w; ++ix) {
      const bool on = grid.label(ix, iy) == label;
      present |= on;
      sq[std::size_t(iy) * w + ix] = on ? 0.0 : kFar;
    }
  }
  if (!present) return field;

  const int n = std::max(w, h);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);

  for (int iy = 0; iy < h; ++iy) {
    for (int ix = 0; ix < w; ++ix) f[ix] = sq[std::size_t(iy) * w + ix];
    dt_1d(f, d, v, z, w);
    for (int ix = 0; ix < w; ++ix) sq[std::size_t(iy) * w + ix] = d[ix];
  }
  for (int ix = 0; ix < w; ++ix) {
    for (int iy = 0; iy < h; ++iy) f[iy] = sq[std::size_t(iy) * w + ix];
    dt_1d(f, d, v, z, h);
    for (int iy = 0; iy < h; ++iy) sq[std::size_t(iy) * w + ix] = d[iy];
  }

  for (std::size_t i = 0; i < field.size(); ++i) field[i] = std::sqrt(sq[i]) * grid.cell_size();
  return field;
}

namespace {

// Scene-wide precomputation shared by every patch descriptor: per-class
// distance fields and per-patch label histograms.
class DescriptorExtractor {
 public:
  DescriptorExtractor(const SemanticGrid& grid, int patch_size, double w)
      : grid_(grid), patches_(PatchGrid::over(grid, patch_size)), w_(w) {
    const int c = grid.class_count();
    fields_.reserve(c);
    for (int label = 0; label < c; ++label) fields_.push_back(label_distance_field(grid, label));
    patch_counts_.assign(std::size_t(patches_.count()) * c, 0);
    for (int iy = 0; iy < grid.height(); ++iy) {
      for (int ix = 0; ix < grid.width(); ++ix) {
        const int flat = (iy / patch_size) * patches_.cols() + (ix / patch_size);
        ++patch_counts_[std::size_t(flat) * c + grid.label(ix, iy)];
      }
    }
  }

  const PatchGrid& patches() const { return patches_; }

  Eigen::VectorXd global(PatchIndex p) const {
    const int c = grid_.class_count();
    const Vec2 centroid = patches_.patch_centroid(p);
    int cx = static_cast<int>(centroid.x() / grid_.cell_size());
    int cy = static_cast<int>(centroid.y() / grid_.cell_size());
    cx = std::clamp(cx, 0, grid_.width() - 1);
    cy = std::clamp(cy, 0, grid_.height() - 1);
    Eigen::VectorXd g(c);
    for (int label = 0; label < c; ++label) {
      g[label] = fields_[label][std::size_t(cy) * grid_.width() + cx];
    }
    return g;
  }

  Eigen::VectorXd local(PatchIndex p) const {
    const int c = grid_.class_count();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(c);
    int shells_used = 0;
    for (int shell = 0; shell <= 2; ++shell) {
      Eigen::VectorXd hist = Eigen::VectorXd::Zero(c);
      bool any = false;
      for (int qy = p.y - shell; qy <= p.y + shell; ++qy) {
        for (int qx = p.x - shell; qx <= p.x + shell; ++qx) {
          if (std::max(std::abs(qx - p.x), std::abs(qy - p.y)) != shell) continue;
          if (qx < 0 || qy < 0 || qx >= patches_.cols() || qy >= patches_.rows()) continue;
          const int flat = qy * patches_.cols() + qx;
          for (int label = 0; label < c; ++label) {
            hist[label] += patch_counts_[std::size_t(flat) * c + label];
          }
          any = true;
        }
      }
      if (!any) continue;
      acc += hist / hist.sum();  // every in-bounds patch has at least one cell
      ++shells_used;
    }
    return acc / static_cast<double>(shells_used);
  }

  ContextDescriptor at(PatchIndex p) const {
    ContextDescriptor d;
    d.global = global(p);
    d.local = local(p);
    Eigen::VectorXd gn = d.global;
    if (const double s = gn.lpNorm<1>(); s > 0.0) gn /= s;
    Eigen::VectorXd ln = d.local;
    if (const double s = ln.lpNorm<1>(); s > 0.0) ln /= s;
    d.combined = w_ * gn + (1.0 - w_) * ln;
    return d;
  }

 private:
  const SemanticGrid& grid_;
  PatchGrid patches_;
  double w_;
  std::vector<std::vector<double>> fields_;
  std::vector<std::int64_t> patch_counts_;
};

PatchLabels cut_patch_labels(const SemanticGrid& grid, const PatchGrid& patches, PatchIndex p) {
  int x0, x1, y0, y1;
  patches.cell_span(p, x0, x1, y0, y1);
  PatchLabels out;
  out.width = x1 - x0;
  out.height = y1 - y0;
  out.data.reserve(std::size_t(out.width) * out.height);
  for (int iy = y0; iy < y1; ++iy) {
    for (int ix = x0; ix < x1; ++ix) out.data.push_back(grid.label(ix, iy));
  }
  return out;
}

}  // namespace

Eigen::VectorXd global_context(const SemanticGrid& grid, const PatchGrid& patches, PatchIndex p) {
  return DescriptorExtractor(grid, patches.patch_size(), 0.5).global(p);
}

Eigen::VectorXd local_context(const SemanticGrid& grid, const PatchGrid& patches, PatchIndex p) {
  return DescriptorExtractor(grid, patches.patch_size(), 0.5).local(p);
}

ContextDescriptor context_descriptor(const SemanticGrid& grid, const PatchGrid& patches,
                                     PatchIndex p, double w) {
  return DescriptorExtractor(grid, patches.patch_size(), w).at(p);
}

DescriptorIndex::DescriptorIndex(std::string class_id, int class_count, double w, int patch_size,
                                 BuilderConfig config, std::vector<IndexEntry> entries)
    : class_id_(std::move(class_id)),
      class_count_(class_count),
      w_(w),
      patch_size_(patch_size),
      config_(config),
      entries_(std::move(entries)) {
  if (class_count_ <= 0) throw ValidationError("index: class_count must be positive");
  if (patch_size_ <= 0) throw ValidationError("index: patch_size must be positive");
  if (w_ < 0.0 || w_ > 1.0) throw ValidationError("index: w must be in [0, 1]");
  for (const IndexEntry& e : entries_) {
    if (e.descriptor.combined.size() != class_count_) {
      throw ValidationError("index entry descriptor length does not match class_count");
    }
  }
  // Distance ties resolve by this order.
  std::stable_sort(entries_.begin(), entries_.end(), [](const IndexEntry& a, const IndexEntry& b) {
    if (a.scene_id != b.scene_id) return a.scene_id < b.scene_id;
    if (a.patch.y != b.patch.y) return a.patch.y < b.patch.y;
    return a.patch.x < b.patch.x;
  });
}

DescriptorIndex build_index(const std::vector<SceneRef>& scenes, double w) {
  if (scenes.empty()) throw ValidationError("build_index: no scenes");
  const std::string& class_id = scenes.front().map->class_id();
  const int class_count = scenes.front().grid->class_count();
  const int patch_size = scenes.front().map->grid().patch_size();
  const BuilderConfig config = scenes.front().map->config();

  std::vector<IndexEntry> entries;
  for (const SceneRef& scene : scenes) {
    if (!scene.grid || !scene.map) throw ValidationError("build_index: null scene reference");
    if (scene.map->class_id() != class_id) {
      throw ValidationError("build_index: scene '" + scene.id + "' maps a different class");
    }
    if (scene.grid->class_count() != class_count) {
      throw ValidationError("build_index: scene '" + scene.id + "' has a different class count");
    }
    if (scene.map->grid().patch_size() != patch_size) {
      throw ValidationError("build_index: scene '" + scene.id + "' uses a different patch size");
    }
    if (!(scene.map->grid() == PatchGrid::over(*scene.grid, patch_size))) {
      throw ValidationError("build_index: scene '" + scene.id + "' grid does not match its map");
    }

    const DescriptorExtractor extractor(*scene.grid, patch_size, w);
    const PatchGrid& patches = scene.map->grid();
    for (int flat = 0; flat < patches.count(); ++flat) {
      const PatchStats& stats = scene.map->stats()[flat];
      if (!stats.observed()) continue;
      IndexEntry e;
      e.scene_id = scene.id;
      e.patch = patches.unflat(flat);
      e.descriptor = extractor.at(e.patch);
      e.stats = stats;
      e.labels = cut_patch_labels(*scene.grid, patches, e.patch);
      entries.push_back(std::move(e));
    }
  }
  return DescriptorIndex(class_id, class_count, w, patch_size, config, std::move(entries));
}

DescriptorIndex with_blend(const DescriptorIndex& index, double w) {
  std::vector<IndexEntry> entries = index.entries();
  for (IndexEntry& e : entries) {
    Eigen::VectorXd gn = e.descriptor.global;
    if (const double s = gn.lpNorm<1>(); s > 0.0) gn /= s;
    Eigen::VectorXd ln = e.descriptor.local;
    if (const double s = ln.lpNorm<1>(); s > 0.0) ln /= s;
    e.descriptor.combined = w * gn + (1.0 - w) * ln;
  }
  return DescriptorIndex(index.class_id(), index.class_count(), w, index.patch_size(),
                         index.config(), std::move(entries));
}

namespace {

// Indices of the k nearest entries by combined-descriptor distance, ties by
// entry order; k is clamped to the index size.
std::vector<int> nearest_entries(const Eigen::MatrixXd& descriptors, const Eigen::VectorXd& query,
                                 int k) {
  const int m = static_cast<int>(descriptors.cols());
  const Eigen::RowVectorXd d2 = (descriptors.colwise() - query).colwise().squaredNorm();
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  const auto closer = [&](int a, int b) {
    if (d2[a] != d2[b]) return d2[a] < d2[b];
    return a < b;
  };
  const int kk = std::min(k, m);
  std::nth_element(order.begin(), order.begin() + (kk - 1), order.end(), closer);
  std::sort(order.begin(), order.begin() + kk, closer);
  order.resize(kk);
  return order;
}

Eigen::MatrixXd descriptor_matrix(const DescriptorIndex& index) {
  Eigen::MatrixXd m(index.class_count(), index.entries().size());
  for (std::size_t i = 0; i < index.entries().size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) = index.entries()[i].descriptor.combined;
  }
  return m;
}

PatchStats average_stats(const std::vector<int>& chosen, const DescriptorIndex& index) {
  // A single neighbor transfers verbatim, which keeps the identity case exact.
  if (chosen.size() == 1) return index.entries()[chosen[0]].stats;

  PatchStats out;
  const double n = static_cast<double>(chosen.size());
  Hod hod_sum = Hod::Zero();
  double visits = 0.0;
  for (const int i : chosen) {
    const PatchStats& s = index.entries()[i].stats;
    out.rho += s.rho / n;
    out.xi += s.xi / n;
    hod_sum += s.hod;
    visits += static_cast<double>(s.visit_count);
  }
  if (const double sum = hod_sum.sum(); sum > 0.0) out.hod = hod_sum / sum;
  out.visit_count = std::max<std::int64_t>(1, std::llround(visits / n));

  for (int d = 0; d < kNumDirections; ++d) {
    double n_total = 0.0, mean_acc = 0.0, m2_acc = 0.0;
    for (const int i : chosen) {
      const SpeedStats& h = index.entries()[i].stats.hos[d];
      if (!h.fitted()) continue;
      const double hn = static_cast<double>(h.n);
      n_total += hn;
      mean_acc += hn * h.mu;
      m2_acc += hn * (h.sigma * h.sigma + h.mu * h.mu);
    }
    if (n_total > 0.0) {
      SpeedStats& pooled = out.hos[d];
      pooled.n = std::llround(n_total);
      pooled.mu = mean_acc / n_total;
      const double var = std::max(0.0, m2_acc / n_total - pooled.mu * pooled.mu);
      pooled.sigma = std::max(std::sqrt(var), index.config().sigma_floor);
    }
  }
  return out;
}

}  // namespace

TransferResult transfer_map(const SemanticGrid& query, const DescriptorIndex& index, int k) {
  if (k < 1) throw ValidationError("transfer_map: k must be >= 1");
  if (index.entries().empty()) throw ValidationError("transfer_map: empty index");
  if (query.class_count() != index.class_count()) {
    throw ValidationError("transfer_map: query class count " + std::to_string(query.class_count()) +
                          " does not match index class count " +
                          std::to_string(index.class_count()));
  }

  const DescriptorExtractor extractor(query, index.patch_size(), index.w());
  const PatchGrid& patches = extractor.patches();
  const Eigen::MatrixXd descriptors = descriptor_matrix(index);

  std::vector<PatchStats> stats(patches.count());
  std::vector<NeighborRecord> report;
  for (int flat = 0; flat < patches.count(); ++flat) {
    const PatchIndex p = patches.unflat(flat);
    const ContextDescriptor d = extractor.at(p);
    const std::vector<int> chosen = nearest_entries(descriptors, d.combined, k);
    stats[flat] = average_stats(chosen, index);
    for (std::size_t rank = 0; rank < chosen.size(); ++rank) {
      const IndexEntry& e = index.entries()[chosen[rank]];
      report.push_back({p, static_cast<int>(rank), e.scene_id, e.patch,
                        (e.descriptor.combined - d.combined).norm()});
    }
  }

  NavigationMap map(index.class_id(), patches, index.config(), std::move(stats));
  map.validate();
  return TransferResult{std::move(map), std::move(report)};
}

SemanticGrid hallucinate(const SemanticGrid& query, const DescriptorIndex& index, int k) {
  if (k < 1) throw ValidationError("hallucinate: k must be >= 1");
  if (index.entries().empty()) throw ValidationError("hallucinate: empty index");
  if (query.class_count() != index.class_count()) {
    throw ValidationError("hallucinate: class counts differ");
  }

  const DescriptorExtractor extractor(query, index.patch_size(), index.w());
  const PatchGrid& patches = extractor.patches();
  const Eigen::MatrixXd descriptors = descriptor_matrix(index);

  std::vector<std::uint8_t> labels = query.labels();
  std::vector<int> votes(query.class_count());
  for (int flat = 0; flat < patches.count(); ++flat) {
    const PatchIndex p = patches.unflat(flat);
    const std::vector<int> chosen = nearest_entries(descriptors, extractor.at(p).combined, k);
    int x0, x1, y0, y1;
    patches.cell_span(p, x0, x1, y0, y1);
    for (int iy = y0; iy < y1; ++iy) {
      for (int ix = x0; ix < x1; ++ix) {
        std::fill(votes.begin(), votes.end(), 0);
        int voters = 0;
        for (const int c : chosen) {
          const PatchLabels& nb = index.entries()[c].labels;
          const int lx = ix - x0, ly = iy - y0;
          if (lx >= nb.width || ly >= nb.height) continue;  // clipped source patch
          ++votes[nb.data[std::size_t(ly) * nb.width + lx]];
          ++voters;
        }
        if (voters == 0) continue;  // keep the query's own label
        const int mode = static_cast<int>(
            std::max_element(votes.begin(), votes.end()) - votes.begin());
        labels[std::size_t(iy) * query.width() + ix] = static_cast<std::uint8_t>(mode);
      }
    }
  }
  return SemanticGrid(query.width(), query.height(), query.class_count(), query.cell_size(),
                      std::move(labels));
}

}  // namespace pathcast
