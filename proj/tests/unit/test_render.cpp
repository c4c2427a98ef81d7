#include <doctest.h>

#include "helpers.hpp"
#include "pathcast/render.hpp"

using namespace pathcast;

TEST_CASE("a single visited patch renders as one bright block") {
  const PatchGrid grid(16, 16, 1.0, 8);
  std::vector<PatchStats> stats(grid.count());
  stats[grid.flat({1, 0})].visit_count = 3;
  stats[grid.flat({1, 0})].rho = 0.4;
  const NavigationMap map("p", grid, BuilderConfig{}, stats);

  const std::string pgm = heatmap_to_pgm(map, HeatmapField::kPopularity);
  const std::string header = "P5\n16 16\n255\n";
  REQUIRE(pgm.size() == header.size() + 16 * 16);
  const char* pixels = pgm.data() + header.size();
  for (int iy = 0; iy < 16; ++iy) {
    for (int ix = 0; ix < 16; ++ix) {
      const unsigned char v = static_cast<unsigned char>(pixels[iy * 16 + ix]);
      if (ix >= 8 && iy < 8) {
        CHECK(v == 255);  // the visited patch scales to full brightness
      } else {
        CHECK(v == 0);
      }
    }
  }
}

TEST_CASE("heatmap field names parse") {
  CHECK(heatmap_field_from_string("rho") == HeatmapField::kPopularity);
  CHECK(heatmap_field_from_string("xi") == HeatmapField::kRouting);
  CHECK_THROWS_AS(heatmap_field_from_string("zeta"), ValidationError);
}

TEST_CASE("overlay renders a P6 image of scene size") {
  const SemanticGrid grid(12, 10, 2, 1.0, std::vector<std::uint8_t>(120, 0));
  TargetState start;
  start.position = Vec2(1.0, 1.0);
  Prediction p;
  p.selected.states.push_back(TargetState{Vec2(8.0, 6.0), 1.0, 0.0});
  p.samples.push_back(p.selected);
  const std::string ppm = overlay_to_ppm(grid, start, p);
  CHECK(ppm.rfind("P6\n12 10\n255\n", 0) == 0);
  CHECK(ppm.size() == std::string("P6\n12 10\n255\n").size() + 12 * 10 * 3);
}
