#include "pathcast/io.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace pathcast {

namespace {

using nlohmann::json;

[[noreturn]] void fail_parse(const std::string& origin, std::size_t line, const std::string& what) {
  throw ValidationError(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_double_field(std::string_view text, const std::string& origin, std::size_t line,
                          int field, const char* name) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail_parse(origin, line, "field " + std::to_string(field) + " ('" + name + "'): '" +
                                 std::string(text) + "' is not a number");
  }
  return value;
}

std::int64_t parse_int_field(std::string_view text, const std::string& origin, std::size_t line,
                             int field, const char* name) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail_parse(origin, line, "field " + std::to_string(field) + " ('" + name + "'): '" +
                                 std::string(text) + "' is not an integer");
  }
  return value;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return buffer.str();
}

void atomic_write_file(const std::filesystem::path& path, std::string_view contents) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failure on '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " +
                        ec.message());
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void save_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  atomic_write_file(path, j.dump(2) + "\n");
}

// --- label grids -----------------------------------------------------------

namespace {

// Whitespace/comment-aware PGM token reader.
struct PgmReader {
  std::string_view data;
  std::size_t pos = 0;
  std::string origin;

  void skip_space() {
    while (pos < data.size()) {
      if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  std::string_view token() {
    skip_space();
    const std::size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])) &&
           data[pos] != '#') {
      ++pos;
    }
    if (start == pos) throw ValidationError(origin + ": truncated PGM header");
    return data.substr(start, pos - start);
  }

  int int_token(const char* name) {
    const std::string_view t = token();
    int value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
      throw ValidationError(origin + ": PGM " + name + " '" + std::string(t) +
                            "' is not an integer");
    }
    return value;
  }
};

SemanticGrid parse_pgm(std::string_view text, const std::string& origin, double cell_size) {
  PgmReader r{text, 0, origin};
  const std::string_view magic = r.token();
  const bool binary = magic == "P5";
  if (!binary && magic != "P2") throw ValidationError(origin + ": not a P2/P5 PGM file");
  const int width = r.int_token("width");
  const int height = r.int_token("height");
  const int maxval = r.int_token("maxval");
  if (maxval < 1 || maxval > 255) {
    throw ValidationError(origin + ": PGM maxval " + std::to_string(maxval) +
                          " unsupported (labels need 1..255)");
  }
  std::vector<std::uint8_t> labels;
  labels.reserve(std::size_t(width) * height);
  if (binary) {
    ++r.pos;  // single whitespace after maxval
    if (r.data.size() - r.pos < std::size_t(width) * height) {
      throw ValidationError(origin + ": P5 payload truncated");
    }
    for (std::size_t i = 0; i < std::size_t(width) * height; ++i) {
      labels.push_back(static_cast<std::uint8_t>(r.data[r.pos + i]));
    }
  } else {
    for (std::size_t i = 0; i < std::size_t(width) * height; ++i) {
      const int v = r.int_token("pixel");
      if (v < 0 || v > maxval) {
        throw ValidationError(origin + ": pixel value " + std::to_string(v) + " out of [0, " +
                              std::to_string(maxval) + "]");
      }
      labels.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return SemanticGrid(width, height, maxval + 1, cell_size > 0.0 ? cell_size : 1.0,
                      std::move(labels));
}

SemanticGrid parse_text_grid(std::string_view text, const std::string& origin,
                             double cell_size_override) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) fail_parse(origin, 1, "empty grid file");
  ++lineno;
  std::istringstream header(line);
  int width = 0, height = 0, classes = 0;
  double cell_size = 0.0;
  if (!(header >> width >> height >> classes >> cell_size)) {
    fail_parse(origin, lineno, "expected header 'W H C cell_size'");
  }
  if (cell_size_override > 0.0) cell_size = cell_size_override;

  std::vector<std::uint8_t> labels;
  labels.reserve(std::size_t(std::max(width, 0)) * std::max(height, 0));
  for (int row = 0; row < height; ++row) {
    if (!std::getline(in, line)) fail_parse(origin, lineno + 1, "missing grid row");
    ++lineno;
    std::istringstream cells(line);
    for (int col = 0; col < width; ++col) {
      int v = 0;
      if (!(cells >> v)) {
        fail_parse(origin, lineno, "row has fewer than " + std::to_string(width) + " labels");
      }
      if (v < 0 || v > 255) fail_parse(origin, lineno, "label out of byte range");
      labels.push_back(static_cast<std::uint8_t>(v));
    }
    int extra;
    if (cells >> extra) fail_parse(origin, lineno, "row has more than " + std::to_string(width) +
                                                       " labels");
  }
  try {
    return SemanticGrid(width, height, classes, cell_size, std::move(labels));
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
}

}  // namespace

SemanticGrid load_semantic_grid(const std::filesystem::path& path, double cell_size) {
  const std::string text = read_file(path);
  if (text.rfind("P2", 0) == 0 || text.rfind("P5", 0) == 0) {
    return parse_pgm(text, path.string(), cell_size);
  }
  return parse_text_grid(text, path.string(), cell_size);
}

std::string grid_to_pgm(const SemanticGrid& grid) {
  std::string out = "P5\n" + std::to_string(grid.width()) + " " + std::to_string(grid.height()) +
                    "\n" + std::to_string(std::max(grid.class_count() - 1, 1)) + "\n";
  out.append(reinterpret_cast<const char*>(grid.labels().data()), grid.labels().size());
  return out;
}

std::string grid_to_text(const SemanticGrid& grid) {
  std::string out = std::to_string(grid.width()) + " " + std::to_string(grid.height()) + " " +
                    std::to_string(grid.class_count()) + " " + format_double(grid.cell_size()) +
                    "\n";
  for (int iy = 0; iy < grid.height(); ++iy) {
    for (int ix = 0; ix < grid.width(); ++ix) {
      if (ix) out += ' ';
      out += std::to_string(int(grid.label(ix, iy)));
    }
    out += '\n';
  }
  return out;
}

void save_grid_pgm(const SemanticGrid& grid, const std::filesystem::path& path) {
  atomic_write_file(path, grid_to_pgm(grid));
}

void save_grid_text(const SemanticGrid& grid, const std::filesystem::path& path) {
  atomic_write_file(path, grid_to_text(grid));
}

// --- trajectories ------------------------------------------------------------

std::vector<Trajectory> parse_trajectories_csv(std::string_view text, const std::string& origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) fail_parse(origin, 1, "empty trajectory file");
  ++lineno;
  if (strip_cr(line) != "agent_id,class,frame,x,y") {
    fail_parse(origin, lineno, "expected header 'agent_id,class,frame,x,y'");
  }

  std::vector<Trajectory> out;
  std::map<std::string, std::size_t> seen;  // agent -> index, to enforce contiguous groups
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = strip_cr(line);
    if (body.empty()) continue;
    const auto fields = split_csv_line(body);
    if (fields.size() != 5) {
      fail_parse(origin, lineno, "expected 5 fields, got " + std::to_string(fields.size()));
    }
    const std::string agent(fields[0]);
    const std::string cls(fields[1]);
    if (agent.empty()) fail_parse(origin, lineno, "field 1 ('agent_id'): empty");
    if (cls.empty()) fail_parse(origin, lineno, "field 2 ('class'): empty");
    TrajectorySample sample;
    sample.frame = parse_int_field(fields[2], origin, lineno, 3, "frame");
    sample.x = parse_double_field(fields[3], origin, lineno, 4, "x");
    sample.y = parse_double_field(fields[4], origin, lineno, 5, "y");

    if (out.empty() || out.back().agent_id != agent) {
      const auto it = seen.find(agent);
      if (it != seen.end()) {
        fail_parse(origin, lineno, "agent '" + agent + "' rows are not contiguous (file must be "
                                       "sorted by agent_id, frame)");
      }
      seen.emplace(agent, out.size());
      out.push_back(Trajectory{agent, cls, {}});
    }
    Trajectory& t = out.back();
    if (t.class_id != cls) {
      fail_parse(origin, lineno, "agent '" + agent + "' changes class from '" + t.class_id +
                                     "' to '" + cls + "'");
    }
    if (!t.samples.empty() && sample.frame <= t.samples.back().frame) {
      fail_parse(origin, lineno, "agent '" + agent + "': frames not strictly increasing");
    }
    t.samples.push_back(sample);
  }
  return out;
}

std::vector<Trajectory> load_trajectories_csv(const std::filesystem::path& path) {
  return parse_trajectories_csv(read_file(path), path.string());
}

std::string trajectories_to_csv(const std::vector<Trajectory>& trajectories) {
  std::string out = "agent_id,class,frame,x,y\n";
  for (const Trajectory& t : trajectories) {
    for (const TrajectorySample& s : t.samples) {
      out += t.agent_id;
      out += ',';
      out += t.class_id;
      out += ',';
      out += std::to_string(s.frame);
      out += ',';
      out += format_double(s.x);
      out += ',';
      out += format_double(s.y);
      out += '\n';
    }
  }
  return out;
}

void save_trajectories_csv(const std::vector<Trajectory>& trajectories,
                           const std::filesystem::path& path) {
  atomic_write_file(path, trajectories_to_csv(trajectories));
}

// --- navigation maps -----------------------------------------------------------

namespace {

json config_to_json(const BuilderConfig& c) {
  return json{{"stop_threshold", c.stop_threshold},
              {"kappa0", c.kappa0},
              {"sigma_floor", c.sigma_floor},
              {"min_curvature_speed", c.min_curvature_speed}};
}

BuilderConfig config_from_json(const json& j) {
  BuilderConfig c;
  c.stop_threshold = j.at("stop_threshold").get<double>();
  c.kappa0 = j.at("kappa0").get<double>();
  c.sigma_floor = j.at("sigma_floor").get<double>();
  c.min_curvature_speed = j.at("min_curvature_speed").get<double>();
  return c;
}

json stats_to_json(const PatchStats& s) {
  json hod = json::array();
  for (int d = 0; d < kHodSize; ++d) hod.push_back(s.hod[d]);
  json hos = json::array();
  for (const SpeedStats& h : s.hos) {
    hos.push_back(json{{"mu", h.mu}, {"sigma", h.sigma}, {"n", h.n}});
  }
  return json{{"visit_count", s.visit_count}, {"rho", s.rho},    {"xi", s.xi},
              {"hod", std::move(hod)},        {"hos", std::move(hos)}};
}

PatchStats stats_from_json(const json& j) {
  PatchStats s;
  s.visit_count = j.at("visit_count").get<std::int64_t>();
  s.rho = j.at("rho").get<double>();
  s.xi = j.at("xi").get<double>();
  const json& hod = j.at("hod");
  if (!hod.is_array() || hod.size() != kHodSize) {
    throw ValidationError("patch record: hod must have " + std::to_string(kHodSize) + " entries");
  }
  for (int d = 0; d < kHodSize; ++d) s.hod[d] = hod[d].get<double>();
  const json& hos = j.at("hos");
  if (!hos.is_array() || hos.size() != kNumDirections) {
    throw ValidationError("patch record: hos must have " + std::to_string(kNumDirections) +
                          " entries");
  }
  for (int d = 0; d < kNumDirections; ++d) {
    s.hos[d].mu = hos[d].at("mu").get<double>();
    s.hos[d].sigma = hos[d].at("sigma").get<double>();
    s.hos[d].n = hos[d].at("n").get<std::int64_t>();
  }
  return s;
}

}  // namespace

nlohmann::json navmap_to_json(const NavigationMap& map) {
  const PatchGrid& g = map.grid();
  json patches = json::array();
  for (int flat = 0; flat < g.count(); ++flat) {
    const PatchStats& s = map.stats()[flat];
    if (!s.observed()) continue;
    const PatchIndex p = g.unflat(flat);
    json rec = stats_to_json(s);
    rec["patch"] = json::array({p.x, p.y});
    patches.push_back(std::move(rec));
  }
  return json{{"format", "navmap-v1"},
              {"class", map.class_id()},
              {"directions", kNumDirections},
              {"grid", json{{"width", g.grid_width()},
                            {"height", g.grid_height()},
                            {"cell_size", g.cell_size()},
                            {"patch_size", g.patch_size()}}},
              {"config", config_to_json(map.config())},
              {"patches", std::move(patches)}};
}

NavigationMap navmap_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "navmap-v1") {
      throw ValidationError("not a navmap-v1 document");
    }
    if (j.at("directions").get<int>() != kNumDirections) {
      throw ValidationError("unsupported direction count");
    }
    const json& g = j.at("grid");
    const PatchGrid grid(g.at("width").get<int>(), g.at("height").get<int>(),
                         g.at("cell_size").get<double>(), g.at("patch_size").get<int>());
    std::vector<PatchStats> stats(grid.count());
    for (const json& rec : j.at("patches")) {
      const json& p = rec.at("patch");
      const int px = p.at(0).get<int>();
      const int py = p.at(1).get<int>();
      if (px < 0 || py < 0 || px >= grid.cols() || py >= grid.rows()) {
        throw ValidationError("patch index [" + std::to_string(px) + ", " + std::to_string(py) +
                              "] outside the grid");
      }
      stats[grid.flat({px, py})] = stats_from_json(rec);
    }
    NavigationMap map(j.at("class").get<std::string>(), grid, config_from_json(j.at("config")),
                      std::move(stats));
    map.validate();
    return map;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("navmap document: ") + e.what());
  }
}

void save_navmap(const NavigationMap& map, const std::filesystem::path& path) {
  save_json_file(path, navmap_to_json(map));
}

NavigationMap load_navmap(const std::filesystem::path& path) {
  try {
    return navmap_from_json(load_json_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

// --- descriptor indexes ------------------------------------------------------

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j, int expected, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != expected) {
    throw ValidationError(std::string("index entry: '") + name + "' must have " +
                          std::to_string(expected) + " entries");
  }
  Eigen::VectorXd v(expected);
  for (int i = 0; i < expected; ++i) v[i] = j[i].get<double>();
  return v;
}

}  // namespace

nlohmann::json index_to_json(const DescriptorIndex& index) {
  json entries = json::array();
  for (const IndexEntry& e : index.entries()) {
    json labels = json::array();
    for (const auto v : e.labels.data) labels.push_back(int(v));
    entries.push_back(json{{"scene", e.scene_id},
                           {"patch", json::array({e.patch.x, e.patch.y})},
                           {"g", vector_to_json(e.descriptor.global)},
                           {"l", vector_to_json(e.descriptor.local)},
                           {"p", vector_to_json(e.descriptor.combined)},
                           {"stats", stats_to_json(e.stats)},
                           {"labels", json{{"width", e.labels.width},
                                           {"height", e.labels.height},
                                           {"data", std::move(labels)}}}});
  }
  return json{{"format", "navmap-index-v1"},
              {"class", index.class_id()},
              {"class_count", index.class_count()},
              {"directions", kNumDirections},
              {"w", index.w()},
              {"patch_size", index.patch_size()},
              {"config", config_to_json(index.config())},
              {"entries", std::move(entries)}};
}

DescriptorIndex index_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "navmap-index-v1") {
      throw ValidationError("not a navmap-index-v1 document");
    }
    if (j.at("directions").get<int>() != kNumDirections) {
      throw ValidationError("unsupported direction count");
    }
    const int class_count = j.at("class_count").get<int>();
    std::vector<IndexEntry> entries;
    for (const json& rec : j.at("entries")) {
      IndexEntry e;
      e.scene_id = rec.at("scene").get<std::string>();
      e.patch = PatchIndex{rec.at("patch").at(0).get<int>(), rec.at("patch").at(1).get<int>()};
      e.descriptor.global = vector_from_json(rec.at("g"), class_count, "g");
      e.descriptor.local = vector_from_json(rec.at("l"), class_count, "l");
      e.descriptor.combined = vector_from_json(rec.at("p"), class_count, "p");
      e.stats = stats_from_json(rec.at("stats"));
      const json& labels = rec.at("labels");
      e.labels.width = labels.at("width").get<int>();
      e.labels.height = labels.at("height").get<int>();
      for (const json& v : labels.at("data")) {
        e.labels.data.push_back(static_cast<std::uint8_t>(v.get<int>()));
      }
      if (e.labels.data.size() != std::size_t(e.labels.width) * e.labels.height) {
        throw ValidationError("index entry: label block size mismatch");
      }
      entries.push_back(std::move(e));
    }
    return DescriptorIndex(j.at("class").get<std::string>(), class_count, j.at("w").get<double>(),
                           j.at("patch_size").get<int>(), config_from_json(j.at("config")),
                           std::move(entries));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("index document: ") + e.what());
  }
}

void save_index(const DescriptorIndex& index, const std::filesystem::path& path) {
  save_json_file(path, index_to_json(index));
}

DescriptorIndex load_index(const std::filesystem::path& path) {
  try {
    return index_from_json(load_json_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

// --- predictions ----------------------------------------------------------------

namespace {

void append_path_rows(std::string& out, int sample_id, const TargetState& start,
                      const PredictedPath& path) {
  const auto row = [&](int step, const TargetState& s) {
    out += std::to_string(sample_id);
    out += ',';
    out += std::to_string(step);
    out += ',';
    out += format_double(s.position.x());
    out += ',';
    out += format_double(s.position.y());
    out += ',';
    out += format_double(s.speed);
    out += ',';
    out += format_double(s.heading);
    out += ',';
    out += format_double(path.score);
    out += ',';
    out += to_string(path.termination);
    out += '\n';
  };
  row(0, start);
  for (std::size_t i = 0; i < path.states.size(); ++i) row(static_cast<int>(i + 1), path.states[i]);
}

}  // namespace

std::string prediction_to_csv(const TargetState& start, const Prediction& prediction) {
  std::string out = "sample_id,step,x,y,omega,theta,score,termination\n";
  append_path_rows(out, -1, start, prediction.selected);
  for (std::size_t i = 0; i < prediction.samples.size(); ++i) {
    append_path_rows(out, static_cast<int>(i), start, prediction.samples[i]);
  }
  return out;
}

void save_prediction_csv(const TargetState& start, const Prediction& prediction,
                         const std::filesystem::path& path) {
  atomic_write_file(path, prediction_to_csv(start, prediction));
}

// --- transfer diagnostics ---------------------------------------------------------

std::string transfer_report_to_csv(const std::vector<NeighborRecord>& report) {
  std::string out = "patch_x,patch_y,rank,scene,neighbor_x,neighbor_y,distance\n";
  for (const NeighborRecord& r : report) {
    out += std::to_string(r.query.x);
    out += ',';
    out += std::to_string(r.query.y);
    out += ',';
    out += std::to_string(r.rank);
    out += ',';
    out += r.scene_id;
    out += ',';
    out += std::to_string(r.neighbor.x);
    out += ',';
    out += std::to_string(r.neighbor.y);
    out += ',';
    out += format_double(r.distance);
    out += '\n';
  }
  return out;
}

// --- evaluation reports ----------------------------------------------------------

nlohmann::json eval_report_to_json(const EvalReport& report) {
  json classes = json::object();
  for (const auto& [class_id, per_predictor] : report.summary) {
    json preds = json::object();
    for (const auto& [name, s] : per_predictor) {
      preds[name] = json{{"mean", s.mean},
                         {"stddev", s.stddev},
                         {"fold_means", s.fold_means},
                         {"trajectories", s.trajectory_count}};
    }
    classes[class_id] = std::move(preds);
  }
  return json{{"format", "eval-report-v1"},
              {"folds", report.folds},
              {"classes", std::move(classes)},
              {"fold_assignment", report.fold_of_agent},
              {"notes", report.notes}};
}

std::string eval_report_to_csv(const EvalReport& report) {
  std::string out = "fold,class,agent_id,predictor,mhd,steps,termination\n";
  for (const TrajectoryResult& r : report.rows) {
    out += std::to_string(r.fold);
    out += ',';
    out += r.class_id;
    out += ',';
    out += r.agent_id;
    out += ',';
    out += r.predictor;
    out += ',';
    out += format_double(r.mhd);
    out += ',';
    out += std::to_string(r.predicted_steps);
    out += ',';
    out += to_string(r.termination);
    out += '\n';
  }
  return out;
}

// --- synth specs --------------------------------------------------------------------

SynthSpec synth_spec_from_json(const nlohmann::json& j) {
  SynthSpec spec;
  if (!j.is_object()) throw ValidationError("synth spec: expected a JSON object");
  if (!j.contains("layout")) throw ValidationError("synth spec: missing 'layout'");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "layout") {
        spec.layout = layout_from_string(value.get<std::string>());
      } else if (key == "width") {
        spec.width = value.get<int>();
      } else if (key == "height") {
        spec.height = value.get<int>();
      } else if (key == "cell_size") {
        spec.cell_size = value.get<double>();
      } else if (key == "patch_size") {
        spec.patch_size = value.get<int>();
      } else if (key == "count") {
        spec.trajectory_count = value.get<int>();
      } else if (key == "seed") {
        spec.seed = value.get<std::uint64_t>();
      } else if (key == "class") {
        spec.class_id = value.get<std::string>();
      } else if (key == "speed_mean") {
        spec.speed_mean = value.get<double>();
      } else if (key == "speed_std") {
        spec.speed_std = value.get<double>();
      } else if (key == "stop_prob") {
        spec.stop_prob = value.get<double>();
      } else if (key == "process_noise") {
        spec.process_noise = value.get<double>();
      } else if (key == "heading_smoothing") {
        spec.heading_smoothing = value.get<double>();
      } else if (key == "turn_prob") {
        spec.turn_prob = value.get<double>();
      } else if (key == "west_entry_fraction") {
        spec.west_entry_fraction = value.get<double>();
      } else if (key == "center_x_frac") {
        spec.center_x_frac = value.get<double>();
      } else if (key == "center_y_frac") {
        spec.center_y_frac = value.get<double>();
      } else if (key == "max_steps") {
        spec.max_steps = value.get<int>();
      } else {
        throw ValidationError("synth spec: unknown key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw ValidationError("synth spec: key '" + key + "': " + e.what());
    }
  }
  spec.validate();
  return spec;
}

nlohmann::json synth_spec_to_json(const SynthSpec& spec) {
  return json{{"layout", to_string(spec.layout)},
              {"width", spec.width},
              {"height", spec.height},
              {"cell_size", spec.cell_size},
              {"patch_size", spec.patch_size},
              {"count", spec.trajectory_count},
              {"seed", spec.seed},
              {"class", spec.class_id},
              {"speed_mean", spec.speed_mean},
              {"speed_std", spec.speed_std},
              {"stop_prob", spec.stop_prob},
              {"process_noise", spec.process_noise},
              {"heading_smoothing", spec.heading_smoothing},
              {"turn_prob", spec.turn_prob},
              {"west_entry_fraction", spec.west_entry_fraction},
              {"center_x_frac", spec.center_x_frac},
              {"center_y_frac", spec.center_y_frac},
              {"max_steps", spec.max_steps}};
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  try {
    return synth_spec_from_json(load_json_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

// --- scene lists -----------------------------------------------------------------

std::vector<SceneListEntry> load_scene_list(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  const std::filesystem::path base = path.parent_path();

  std::vector<SceneListEntry> out;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = strip_cr(line);
    if (body.empty() || body.front() == '#') continue;
    std::istringstream fields{std::string(body)};
    SceneListEntry e;
    std::string labels, map;
    if (!(fields >> e.id >> labels >> map)) {
      fail_parse(path.string(), lineno, "expected '<scene_id> <labels_path> <map_path>'");
    }
    std::string extra;
    if (fields >> extra) fail_parse(path.string(), lineno, "unexpected trailing field");
    // Relative paths resolve against the list file's directory.
    const std::filesystem::path labels_path(labels), map_path(map);
    e.labels = labels_path.is_absolute() ? labels_path : base / labels_path;
    e.map = map_path.is_absolute() ? map_path : base / map_path;
    out.push_back(std::move(e));
  }
  if (out.empty()) throw ValidationError(path.string() + ": no scenes listed");
  return out;
}

}  // namespace pathcast
