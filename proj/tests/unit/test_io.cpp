#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "helpers.hpp"
#include "pathcast/io.hpp"

using namespace pathcast;
using pathcast::testing::line_trajectory;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("pathcast-test-" + std::to_string(std::rand()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

SemanticGrid sample_grid() {
  std::vector<std::uint8_t> labels;
  for (int i = 0; i < 6 * 4; ++i) labels.push_back(static_cast<std::uint8_t>(i % 3));
  return SemanticGrid(6, 4, 3, 1.0, labels);
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  for (const double v : {0.1, 1.0 / 3.0, -2.5e-17, 123456.789, 0.0, 1e300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("PGM round trip preserves the grid") {
  const SemanticGrid grid = sample_grid();
  TempDir dir;
  save_grid_pgm(grid, dir.path / "labels.pgm");
  const SemanticGrid back = load_semantic_grid(dir.path / "labels.pgm");
  CHECK(back.width() == grid.width());
  CHECK(back.height() == grid.height());
  CHECK(back.class_count() == grid.class_count());
  CHECK(back.labels() == grid.labels());
  // byte-identical re-serialization
  CHECK(grid_to_pgm(back) == grid_to_pgm(grid));
}

TEST_CASE("ASCII PGM with comments parses") {
  TempDir dir;
  atomic_write_file(dir.path / "g.pgm", "P2\n# a comment\n3 2\n2\n0 1 2\n2 1 0\n");
  const SemanticGrid g = load_semantic_grid(dir.path / "g.pgm", 0.5);
  CHECK(g.width() == 3);
  CHECK(g.height() == 2);
  CHECK(g.class_count() == 3);
  CHECK(g.cell_size() == 0.5);
  CHECK(g.label(2, 0) == 2);
  CHECK(g.label(0, 1) == 2);
}

TEST_CASE("text grid round trip carries class count and cell size") {
  std::vector<std::uint8_t> labels(12, 0);
  const SemanticGrid grid(4, 3, 1, 0.25, labels);  // single class: PGM cannot carry C=1
  TempDir dir;
  save_grid_text(grid, dir.path / "g.grid");
  const SemanticGrid back = load_semantic_grid(dir.path / "g.grid");
  CHECK(back.class_count() == 1);
  CHECK(back.cell_size() == 0.25);
  CHECK(back.labels() == grid.labels());
}

TEST_CASE("malformed grids give precise errors") {
  TempDir dir;
  atomic_write_file(dir.path / "bad.grid", "4 3 2 1.0\n0 0 0 0\n0 2 0\n0 0 0 0\n");
  CHECK_THROWS_WITH_AS(load_semantic_grid(dir.path / "bad.grid"),
                       doctest::Contains(":3:"), ValidationError);
  CHECK_THROWS_AS(load_semantic_grid(dir.path / "missing.grid"), IoError);
}

TEST_CASE("trajectory CSV round trip") {
  std::vector<Trajectory> ts;
  ts.push_back(line_trajectory("a1", "pedestrian", Vec2(0.25, 1.5), Vec2(0.7, -0.1), 5));
  ts.push_back(line_trajectory("a2", "cyclist", Vec2(3.0, 3.0), Vec2(0.0, 1.0 / 3.0), 4));
  const std::string csv = trajectories_to_csv(ts);
  const auto back = parse_trajectories_csv(csv, "mem");
  REQUIRE(back.size() == 2);
  CHECK(back[0].agent_id == "a1");
  CHECK(back[1].class_id == "cyclist");
  REQUIRE(back[1].samples.size() == 4);
  CHECK(back[1].samples[3].y == 3.0 + 3.0 / 3.0);
  CHECK(trajectories_to_csv(back) == csv);
}

TEST_CASE("trajectory CSV errors carry line and field positions") {
  const std::string header = "agent_id,class,frame,x,y\n";
  CHECK_THROWS_WITH_AS(parse_trajectories_csv("bogus\n", "t.csv"),
                       doctest::Contains("t.csv:1"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_trajectories_csv(header + "a,p,0,1.0\n", "t.csv"),
                       doctest::Contains("t.csv:2"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_trajectories_csv(header + "a,p,0,1.0,zzz\n", "t.csv"),
                       doctest::Contains("field 5"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_trajectories_csv(header + "a,p,5,1,1\na,p,5,2,2\n", "t.csv"),
                       doctest::Contains("strictly increasing"), ValidationError);
  CHECK_THROWS_WITH_AS(
      parse_trajectories_csv(header + "a,p,0,1,1\nb,p,0,1,1\na,p,1,2,2\n", "t.csv"),
      doctest::Contains("contiguous"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_trajectories_csv(header + "a,p,0,1,1\na,q,1,2,2\n", "t.csv"),
                       doctest::Contains("class"), ValidationError);
}

TEST_CASE("navigation map JSON round trip is byte identical") {
  const PatchGrid grid(32, 24, 0.5, 8);
  const auto t1 = line_trajectory("a", "p", Vec2(0.5, 2.2), Vec2(0.31, 0.07), 30);
  const auto t2 = line_trajectory("b", "p", Vec2(1.0, 9.0), Vec2(0.4, -0.22), 20);
  const NavigationMap map = build_map({t1, t2}, grid, "p");

  const std::string first = navmap_to_json(map).dump(2);
  const NavigationMap loaded = navmap_from_json(nlohmann::json::parse(first));
  CHECK(navmap_to_json(loaded).dump(2) == first);
  CHECK(loaded.class_id() == "p");
  CHECK(loaded.grid().cell_size() == 0.5);
}

TEST_CASE("navigation map JSON validation") {
  nlohmann::json j = {{"format", "navmap-v1"}};
  CHECK_THROWS_AS(navmap_from_json(j), ValidationError);
  j = nlohmann::json{{"format", "something-else"}};
  CHECK_THROWS_AS(navmap_from_json(j), ValidationError);
}

TEST_CASE("descriptor index JSON round trip is byte identical") {
  const PatchGrid grid(16, 16, 1.0, 8);
  const auto t = line_trajectory("a", "p", Vec2(1.0, 4.0), Vec2(1.0, 0.2), 14);
  const NavigationMap map = build_map({t}, grid, "p");
  std::vector<std::uint8_t> labels(16 * 16, 0);
  for (int i = 0; i < 16; ++i) labels[4 * 16 + i] = 1;
  const SemanticGrid scene(16, 16, 2, 1.0, labels);
  const DescriptorIndex index = build_index({{"A", &scene, &map}}, 0.5);

  const std::string first = index_to_json(index).dump(2);
  const DescriptorIndex loaded = index_from_json(nlohmann::json::parse(first));
  CHECK(index_to_json(loaded).dump(2) == first);
  CHECK(loaded.entries().size() == index.entries().size());
}

TEST_CASE("atomic write replaces content") {
  TempDir dir;
  const auto file = dir.path / "out.txt";
  atomic_write_file(file, "first");
  atomic_write_file(file, "second");
  CHECK(read_file(file) == "second");
  CHECK_FALSE(std::filesystem::exists(dir.path / "out.txt.tmp"));
}

TEST_CASE("scene lists resolve relative paths and report bad lines") {
  TempDir dir;
  atomic_write_file(dir.path / "scenes.list",
                    "# corpus\nA labels_a.pgm map_a.json\nB /abs/labels.pgm /abs/map.json\n");
  const auto entries = load_scene_list(dir.path / "scenes.list");
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].labels == dir.path / "labels_a.pgm");
  CHECK(entries[1].map == std::filesystem::path("/abs/map.json"));

  atomic_write_file(dir.path / "bad.list", "onlyone\n");
  CHECK_THROWS_WITH_AS(load_scene_list(dir.path / "bad.list"), doctest::Contains(":1:"),
                       ValidationError);
}

TEST_CASE("synth specs parse with defaults and reject unknown keys") {
  const auto spec = synth_spec_from_json({{"layout", "l-corridor"}, {"count", 12}});
  CHECK(spec.layout == Layout::kLCorridor);
  CHECK(spec.trajectory_count == 12);
  CHECK(spec.width == 96);

  CHECK_THROWS_AS(synth_spec_from_json({{"layout", "nope"}}), ValidationError);
  CHECK_THROWS_AS(synth_spec_from_json({{"layout", "crossroads"}, {"wat", 1}}), ValidationError);
  CHECK_THROWS_AS(synth_spec_from_json({{"count", 5}}), ValidationError);
}

TEST_CASE("prediction CSV lists the selected path first") {
  TargetState s;
  s.position = Vec2(1.0, 2.0);
  s.speed = 1.0;
  Prediction p;
  p.selected.states.push_back(TargetState{Vec2(2.0, 2.0), 1.0, 0.0});
  p.selected.score = 0.75;
  p.selected.termination = Termination::kMaxSteps;
  p.samples.push_back(p.selected);
  const std::string csv = prediction_to_csv(s, p);
  CHECK(csv.rfind("sample_id,step,x,y,omega,theta,score,termination\n-1,0,1,2,1,0,0.75,"
                  "max-steps\n", 0) == 0);
}
