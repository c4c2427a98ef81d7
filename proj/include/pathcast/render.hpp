#pragma once

#include <filesystem>
#include <string>

#include "pathcast/grid.hpp"
#include "pathcast/navmap.hpp"
#include "pathcast/predictor.hpp"

namespace pathcast {

enum class HeatmapField { kPopularity, kRouting };

HeatmapField heatmap_field_from_string(const std::string& name);

/// Cell-resolution PGM of a per-patch field, scaled so the maximum maps to
/// 255; unobserved patches render black.
std::string heatmap_to_pgm(const NavigationMap& map, HeatmapField field);
void save_heatmap_pgm(const NavigationMap& map, HeatmapField field,
                      const std::filesystem::path& path);

/// PPM of the labeled scene with the sampled paths drawn over it; the
/// selected path on top.
std::string overlay_to_ppm(const SemanticGrid& grid, const TargetState& start,
                           const Prediction& prediction);
void save_overlay_ppm(const SemanticGrid& grid, const TargetState& start,
                      const Prediction& prediction, const std::filesystem::path& path);

}  // namespace pathcast
