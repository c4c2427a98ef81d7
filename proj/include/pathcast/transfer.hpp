#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "pathcast/common.hpp"
#include "pathcast/grid.hpp"
#include "pathcast/navmap.hpp"

namespace pathcast {

/// Semantic context of one patch: per-class clearance distances (global),
/// averaged concentric-shell label histograms (local), and their blend.
struct ContextDescriptor {
  Eigen::VectorXd global;    // g: world-unit distances, one per class
  Eigen::VectorXd local;     // l: averaged shell histograms, sums to 1
  Eigen::VectorXd combined;  // p = w*normalize(g) + (1-w)*normalize(l)
};

/// Exact per-cell Euclidean distance (world units, cell centers) to the
/// nearest cell carrying the given label. Row-major, iy*width + ix layout.
/// Absent label: every entry is the grid diagonal.
std::vector<double> label_distance_field(const SemanticGrid& grid, int label);

/// Global context: entry c is the distance from the cell containing the
/// patch centroid to the nearest cell labeled c; the grid diagonal when the
/// class is absent.
Eigen::VectorXd global_context(const SemanticGrid& grid, const PatchGrid& patches, PatchIndex p);

/// Local context: per-class cell-count histograms over the Chebyshev shells
/// at patch distances 0, 1 and 2 (in-bounds members only), each L1
/// normalized, then averaged.
Eigen::VectorXd local_context(const SemanticGrid& grid, const PatchGrid& patches, PatchIndex p);

ContextDescriptor context_descriptor(const SemanticGrid& grid, const PatchGrid& patches,
                                     PatchIndex p, double w);

/// Label content of a source patch, kept for scene hallucination.
struct PatchLabels {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // row-major
};

struct IndexEntry {
  std::string scene_id;
  PatchIndex patch;
  ContextDescriptor descriptor;
  PatchStats stats;
  PatchLabels labels;
};

struct SceneRef {
  std::string id;
  const SemanticGrid* grid = nullptr;
  const NavigationMap* map = nullptr;
};

/// Descriptor store over the observed patches of a training corpus. Entries
/// are kept sorted by (scene id, patch index); that order breaks distance
/// ties. Immutable after construction.
class DescriptorIndex {
 public:
  DescriptorIndex(std::string class_id, int class_count, double w, int patch_size,
                  BuilderConfig config, std::vector<IndexEntry> entries);

  const std::string& class_id() const { return class_id_; }
  int class_count() const { return class_count_; }
  double w() const { return w_; }
  int patch_size() const { return patch_size_; }
  const BuilderConfig& config() const { return config_; }
  const std::vector<IndexEntry>& entries() const { return entries_; }

 private:
  std::string class_id_;
  int class_count_;
  double w_;
  int patch_size_;
  BuilderConfig config_;
  std::vector<IndexEntry> entries_;
};

/// One entry per observed patch per training scene.
DescriptorIndex build_index(const std::vector<SceneRef>& scenes, double w);

/// The same index under a different blend weight: combined descriptors are
/// recomputed from the stored g and l vectors.
DescriptorIndex with_blend(const DescriptorIndex& index, double w);

struct NeighborRecord {
  PatchIndex query;
  int rank = 0;
  std::string scene_id;
  PatchIndex neighbor;
  double distance = 0.0;
};

struct TransferResult {
  NavigationMap map;
  std::vector<NeighborRecord> report;  // per query patch, ranks 0..k-1
};

/// Builds a navigation map for an unseen scene: every query patch gets the
/// mean statistics of its k nearest index entries by Euclidean distance on
/// the combined descriptor (exact linear scan). k larger than the index uses
/// all entries.
TransferResult transfer_map(const SemanticGrid& query, const DescriptorIndex& index, int k);

/// Diagnostic reconstruction: each query patch replaced by its nearest
/// neighbor's labels (k = 1) or the per-cell mode over k neighbors.
SemanticGrid hallucinate(const SemanticGrid& query, const DescriptorIndex& index, int k);

}  // namespace pathcast
