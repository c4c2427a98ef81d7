#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pathcast/evaluation.hpp"
#include "pathcast/grid.hpp"
#include "pathcast/navmap.hpp"
#include "pathcast/predictor.hpp"
#include "pathcast/synth.hpp"
#include "pathcast/transfer.hpp"

namespace pathcast {

/// Shortest decimal that round-trips the exact double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
/// Writes via a temp file in the same directory, then renames.
void atomic_write_file(const std::filesystem::path& path, std::string_view contents);

nlohmann::json load_json_file(const std::filesystem::path& path);
void save_json_file(const std::filesystem::path& path, const nlohmann::json& j);

// --- label grids ------------------------------------------------------
// PGM (P2/P5): pixel value = class id, class count = maxval + 1; the cell
// size is not stored, callers may override it (default 1). The plain-text
// format carries the full header: "W H C cell_size" then H rows of labels.

SemanticGrid load_semantic_grid(const std::filesystem::path& path, double cell_size = 0.0);
std::string grid_to_pgm(const SemanticGrid& grid);
std::string grid_to_text(const SemanticGrid& grid);
void save_grid_pgm(const SemanticGrid& grid, const std::filesystem::path& path);
void save_grid_text(const SemanticGrid& grid, const std::filesystem::path& path);

// --- trajectories ------------------------------------------------------
// CSV with header agent_id,class,frame,x,y, sorted by (agent_id, frame).

std::vector<Trajectory> parse_trajectories_csv(std::string_view text, const std::string& origin);
std::vector<Trajectory> load_trajectories_csv(const std::filesystem::path& path);
std::string trajectories_to_csv(const std::vector<Trajectory>& trajectories);
void save_trajectories_csv(const std::vector<Trajectory>& trajectories,
                           const std::filesystem::path& path);

// --- navigation maps ---------------------------------------------------

nlohmann::json navmap_to_json(const NavigationMap& map);
NavigationMap navmap_from_json(const nlohmann::json& j);
void save_navmap(const NavigationMap& map, const std::filesystem::path& path);
NavigationMap load_navmap(const std::filesystem::path& path);

// --- descriptor indexes -------------------------------------------------

nlohmann::json index_to_json(const DescriptorIndex& index);
DescriptorIndex index_from_json(const nlohmann::json& j);
void save_index(const DescriptorIndex& index, const std::filesystem::path& path);
DescriptorIndex load_index(const std::filesystem::path& path);

// --- predictions ---------------------------------------------------------
// CSV sample_id,step,x,y,omega,theta,score,termination; the selected path is
// written first with sample_id -1, step 0 is the start state.

std::string prediction_to_csv(const TargetState& start, const Prediction& prediction);
void save_prediction_csv(const TargetState& start, const Prediction& prediction,
                         const std::filesystem::path& path);

// --- transfer diagnostics -------------------------------------------------

std::string transfer_report_to_csv(const std::vector<NeighborRecord>& report);

// --- evaluation reports ----------------------------------------------------

nlohmann::json eval_report_to_json(const EvalReport& report);
std::string eval_report_to_csv(const EvalReport& report);

// --- synth specs ------------------------------------------------------------

SynthSpec synth_spec_from_json(const nlohmann::json& j);
nlohmann::json synth_spec_to_json(const SynthSpec& spec);
SynthSpec load_synth_spec(const std::filesystem::path& path);

// --- scene lists -------------------------------------------------------------
// One scene per line: "<scene_id> <labels_path> <map_path>"; '#' comments.

struct SceneListEntry {
  std::string id;
  std::filesystem::path labels;
  std::filesystem::path map;
};
std::vector<SceneListEntry> load_scene_list(const std::filesystem::path& path);

}  // namespace pathcast
