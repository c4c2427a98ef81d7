#include <doctest.h>

#include <cmath>
#include <random>

#include "pathcast/io.hpp"
#include "pathcast/transfer.hpp"

using namespace pathcast;

namespace {

SemanticGrid random_grid(std::mt19937_64& rng, int w, int h, int classes, double cell = 1.0) {
  std::uniform_int_distribution<int> label(0, classes - 1);
  std::vector<std::uint8_t> labels(std::size_t(w) * h);
  for (auto& v : labels) v = static_cast<std::uint8_t>(label(rng));
  return SemanticGrid(w, h, classes, cell, std::move(labels));
}

// Brute-force oracle for the per-class clearance field.
double brute_distance(const SemanticGrid& g, int label, int cx, int cy) {
  double best = std::hypot(g.world_width(), g.world_height());
  bool found = false;
  for (int iy = 0; iy < g.height(); ++iy) {
    for (int ix = 0; ix < g.width(); ++ix) {
      if (g.label(ix, iy) != label) continue;
      found = true;
      best = std::min(best, std::hypot(double(ix - cx), double(iy - cy)) * g.cell_size());
    }
  }
  return found ? best : std::hypot(g.world_width(), g.world_height());
}

// A scene whose observed-patch statistics vary per patch: a diagonal-ish
// band of road with landmark blocks, trained from hand-authored stats.
struct TestScene {
  SemanticGrid grid;
  NavigationMap map;
};

TestScene make_scene(int variant) {
  const int w = 48, h = 48, ps = 8;
  std::vector<std::uint8_t> labels(std::size_t(w) * h, 0);
  const auto paint = [&](int x0, int y0, int x1, int y1, std::uint8_t v) {
    for (int iy = y0; iy < y1; ++iy) {
      for (int ix = x0; ix < x1; ++ix) labels[std::size_t(iy) * w + ix] = v;
    }
  };
  paint(0, 18, 48, 26, 1);             // horizontal road, offset from the patch rows
  paint(8 + variant * 8, 0, 16 + variant * 8, 48, 1);  // vertical road, shifted per variant
  // off-diagonal landmark: breaks the transpose symmetry of the two roads,
  // which would otherwise alias mirrored patch descriptors exactly
  paint(32, 8, 40, 16, 2);
  SemanticGrid grid(w, h, 3, 1.0, labels);

  const PatchGrid patches = PatchGrid::over(grid, ps);
  std::vector<PatchStats> stats(patches.count());
  for (int flat = 0; flat < patches.count(); ++flat) {
    const PatchIndex p = patches.unflat(flat);
    if (p.y != 2 && p.x != 1 + variant) continue;  // off the roads: unobserved
    PatchStats& s = stats[flat];
    s.visit_count = 10 + flat;
    s.rho = 0.25 + 0.5 * double(flat) / patches.count();
    s.xi = 0.1 + 0.6 * double(p.x) / patches.cols();
    s.hod[1] = 0.5;
    s.hod[3] = 0.3;
    s.hod[0] = 0.2;
    s.hos[0] = SpeedStats{1.0 + 0.05 * p.x, 0.2, 50};
    s.hos[2] = SpeedStats{2.0 + 0.05 * p.y, 0.3, 30};
  }
  NavigationMap map("pedestrian", patches, BuilderConfig{}, std::move(stats));
  return TestScene{std::move(grid), std::move(map)};
}

}  // namespace

TEST_CASE("label_distance_field matches the brute-force scan exactly") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const auto grid = random_grid(rng, 17, 11, 3, 0.5);
    for (int label = 0; label < 3; ++label) {
      const auto field = label_distance_field(grid, label);
      for (int iy = 0; iy < grid.height(); ++iy) {
        for (int ix = 0; ix < grid.width(); ++ix) {
          CHECK(field[std::size_t(iy) * grid.width() + ix] ==
                doctest::Approx(brute_distance(grid, label, ix, iy)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("global context is zero when the centroid cell carries the class") {
  std::vector<std::uint8_t> labels(16 * 16, 0);
  for (int iy = 4; iy < 12; ++iy) {
    for (int ix = 4; ix < 12; ++ix) labels[iy * 16 + ix] = 1;  // road block spans the centroid
  }
  const SemanticGrid grid(16, 16, 2, 1.0, labels);
  const PatchGrid patches = PatchGrid::over(grid, 16);
  const Eigen::VectorXd g = global_context(grid, patches, {0, 0});
  CHECK(g[1] == 0.0);
  CHECK(g[0] > 0.0);
}

TEST_CASE("absent classes get the diagonal sentinel") {
  const SemanticGrid grid(8, 6, 3, 2.0, std::vector<std::uint8_t>(48, 0));
  const PatchGrid patches = PatchGrid::over(grid, 4);
  const Eigen::VectorXd g = global_context(grid, patches, {0, 0});
  CHECK(g[0] == 0.0);
  const double diag = std::hypot(16.0, 12.0);
  CHECK(g[1] == doctest::Approx(diag).epsilon(1e-12));
  CHECK(g[2] == doctest::Approx(diag).epsilon(1e-12));
}

TEST_CASE("global context clearance distance is correct within one cell") {
  // grass starts 7 cells right of the patch centroid cell
  std::vector<std::uint8_t> labels(32 * 8, 0);
  for (int iy = 0; iy < 8; ++iy) {
    for (int ix = 11; ix < 32; ++ix) labels[iy * 32 + ix] = 1;
  }
  const SemanticGrid grid(32, 8, 2, 1.0, labels);
  const PatchGrid patches = PatchGrid::over(grid, 8);
  // patch (0,0) centroid (4,4) -> centroid cell (4,4); nearest grass cell x=11
  const Eigen::VectorXd g = global_context(grid, patches, {0, 0});
  CHECK(g[1] == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("local context of a uniform grid is one-hot") {
  const SemanticGrid grid(32, 32, 3, 1.0, std::vector<std::uint8_t>(32 * 32, 2));
  const PatchGrid patches = PatchGrid::over(grid, 8);
  const Eigen::VectorXd l = local_context(grid, patches, {1, 1});
  CHECK(l[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l[0] == 0.0);
  CHECK(l[1] == 0.0);
}

TEST_CASE("shells at distance 0, 1, 2 average cleanly on concentric classes") {
  // patch rings labeled with distinct classes: shell histograms are one-hot,
  // so their average is one third per ring class
  const int ps = 4, w = 5 * ps, h = 5 * ps;
  std::vector<std::uint8_t> labels(std::size_t(w) * h);
  for (int iy = 0; iy < h; ++iy) {
    for (int ix = 0; ix < w; ++ix) {
      const int ring = std::max(std::abs(ix / ps - 2), std::abs(iy / ps - 2));
      labels[std::size_t(iy) * w + ix] = static_cast<std::uint8_t>(ring);  // 0, 1, 2
    }
  }
  const SemanticGrid grid(w, h, 3, 1.0, labels);
  const PatchGrid patches = PatchGrid::over(grid, ps);
  const Eigen::VectorXd l = local_context(grid, patches, {2, 2});
  for (int c = 0; c < 3; ++c) CHECK(l[c] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("border patches average only the in-bounds shells") {
  // 2x2 patches: the corner's shell 2 is entirely out of bounds, so l is the
  // mean of shell 0 (own labels) and shell 1 (the other three patches)
  std::vector<std::uint8_t> labels(16 * 16, 1);
  for (int iy = 0; iy < 8; ++iy) {
    for (int ix = 0; ix < 8; ++ix) labels[iy * 16 + ix] = 0;
  }
  const SemanticGrid grid(16, 16, 2, 1.0, labels);
  const PatchGrid patches = PatchGrid::over(grid, 8);
  const Eigen::VectorXd l = local_context(grid, patches, {0, 0});
  CHECK(l[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(l[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("checkerboard shell-1 sees four same and four other patches") {
  const int ps = 4, n = 8;
  std::vector<std::uint8_t> labels(std::size_t(n * ps) * n * ps);
  for (int iy = 0; iy < n * ps; ++iy) {
    for (int ix = 0; ix < n * ps; ++ix) {
      labels[std::size_t(iy) * n * ps + ix] =
          static_cast<std::uint8_t>((ix / ps + iy / ps) % 2);
    }
  }
  const SemanticGrid grid(n * ps, n * ps, 2, 1.0, labels);
  const PatchGrid patches = PatchGrid::over(grid, ps);
  // interior black patch (even parity): shell0 one-hot black, shells 1 and 2
  // half and half -> average (2/3, 1/3)
  const Eigen::VectorXd l = local_context(grid, patches, {4, 4});
  CHECK(l[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(l[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("descriptors are translation covariant for interior content") {
  // same compact structure embedded at two offsets, far from the border
  const auto build = [](int ox, int oy) {
    std::vector<std::uint8_t> labels(64 * 64, 0);
    const auto paint = [&](int x0, int y0, int x1, int y1, std::uint8_t v) {
      for (int iy = y0; iy < y1; ++iy) {
        for (int ix = x0; ix < x1; ++ix) labels[std::size_t(iy) * 64 + ix] = v;
      }
    };
    paint(ox, oy + 8, ox + 24, oy + 12, 1);
    paint(ox + 12, oy, ox + 16, oy + 20, 2);
    return SemanticGrid(64, 64, 3, 1.0, labels);
  };
  const SemanticGrid a = build(8, 8);
  const SemanticGrid b = build(16, 24);  // shifted by (+1, +2) patches
  const PatchGrid pa = PatchGrid::over(a, 8);
  const PatchGrid pb = PatchGrid::over(b, 8);
  const PatchIndex qa{2, 2};
  const PatchIndex qb{3, 4};
  const Eigen::VectorXd ga = global_context(a, pa, qa);
  const Eigen::VectorXd gb = global_context(b, pb, qb);
  const Eigen::VectorXd la = local_context(a, pa, qa);
  const Eigen::VectorXd lb = local_context(b, pb, qb);
  // distances to structure classes are unchanged; the fill class surrounds
  // both patches identically
  for (int c = 0; c < 3; ++c) {
    CHECK(ga[c] == doctest::Approx(gb[c]).epsilon(1e-12));
    CHECK(la[c] == doctest::Approx(lb[c]).epsilon(1e-12));
  }
}

TEST_CASE("combined descriptor blends the normalized parts") {
  std::mt19937_64 rng(37);
  const auto grid = random_grid(rng, 24, 24, 4);
  const PatchGrid patches = PatchGrid::over(grid, 8);
  for (const double w : {0.0, 0.3, 1.0}) {
    const ContextDescriptor d = context_descriptor(grid, patches, {1, 1}, w);
    Eigen::VectorXd gn = d.global / d.global.lpNorm<1>();
    Eigen::VectorXd ln = d.local / d.local.lpNorm<1>();
    const Eigen::VectorXd expect = w * gn + (1.0 - w) * ln;
    CHECK((d.combined - expect).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("build_index collects one entry per observed patch") {
  const TestScene scene = make_scene(0);
  int observed = 0;
  for (const auto& s : scene.map.stats()) observed += s.observed() ? 1 : 0;
  const DescriptorIndex index = build_index({{"A", &scene.grid, &scene.map}}, 0.5);
  CHECK(static_cast<int>(index.entries().size()) == observed);

  const DescriptorIndex doubled =
      build_index({{"A", &scene.grid, &scene.map}, {"B", &scene.grid, &scene.map}}, 0.5);
  CHECK(doubled.entries().size() == 2 * index.entries().size());
}

TEST_CASE("identity transfer with K=1 returns the trained stats exactly") {
  const TestScene scene = make_scene(0);
  const DescriptorIndex index = build_index({{"A", &scene.grid, &scene.map}}, 0.5);
  const TransferResult result = transfer_map(scene.grid, index, 1);
  for (int flat = 0; flat < scene.map.grid().count(); ++flat) {
    const PatchStats& trained = scene.map.stats()[flat];
    if (!trained.observed()) continue;
    const PatchStats& got = result.map.stats()[flat];
    CHECK(got.rho == trained.rho);
    CHECK(got.xi == trained.xi);
    CHECK(got.hod == trained.hod);
    CHECK(got.visit_count == trained.visit_count);
    for (int d = 0; d < kNumDirections; ++d) {
      CHECK(got.hos[d].mu == trained.hos[d].mu);
      CHECK(got.hos[d].sigma == trained.hos[d].sigma);
      CHECK(got.hos[d].n == trained.hos[d].n);
    }
  }
}

TEST_CASE("averaging identical stats reproduces them; K clamps to the index") {
  const int w = 16, h = 8, ps = 8;
  std::vector<std::uint8_t> labels(std::size_t(w) * h, 0);
  for (int ix = 0; ix < w; ++ix) labels[3 * w + ix] = 1;
  const SemanticGrid grid(w, h, 2, 1.0, labels);
  const PatchGrid patches = PatchGrid::over(grid, ps);
  std::vector<PatchStats> stats(patches.count());
  for (auto& s : stats) {
    s.visit_count = 4;
    s.rho = 0.8;
    s.xi = 0.3;
    s.hod[1] = 0.6;
    s.hod[3] = 0.4;
    s.hos[0] = SpeedStats{1.5, 0.2, 20};
    s.hos[2] = SpeedStats{2.5, 0.4, 10};
  }
  const NavigationMap map("p", patches, BuilderConfig{}, stats);
  const DescriptorIndex index = build_index({{"A", &grid, &map}}, 0.5);
  const TransferResult result = transfer_map(grid, index, 50);  // K > index size: use all
  for (const PatchStats& got : result.map.stats()) {
    CHECK(got.rho == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(got.xi == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(got.hod[1] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(got.hos[0].mu == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(got.hos[0].sigma == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(got.hos[2].mu == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(got.hos[2].n == 20);  // pooled counts accumulate across neighbors
  }
}

TEST_CASE("transferred rho is the neighbor mean") {
  // two observed patches with rho 0.2 and 0.6; K=2 averages them
  const int w = 16, h = 8, ps = 8;
  const SemanticGrid grid(w, h, 2, 1.0, std::vector<std::uint8_t>(std::size_t(w) * h, 1));
  const PatchGrid patches = PatchGrid::over(grid, ps);
  std::vector<PatchStats> stats(patches.count());
  for (int i = 0; i < 2; ++i) {
    stats[i].visit_count = 1;
    stats[i].rho = i == 0 ? 0.2 : 0.6;
    stats[i].xi = 0.5;
    stats[i].hod[1] = 1.0;
    stats[i].hos[0] = SpeedStats{1.0, 0.1, 5};
  }
  const NavigationMap map("p", patches, BuilderConfig{}, stats);
  const DescriptorIndex index = build_index({{"A", &grid, &map}}, 0.5);
  const TransferResult result = transfer_map(grid, index, 2);
  for (const PatchStats& got : result.map.stats()) {
    CHECK(got.rho == doctest::Approx(0.4).epsilon(1e-12));
  }
}

TEST_CASE("transfer output satisfies the patch-stat invariants") {
  const TestScene a = make_scene(0);
  const TestScene b = make_scene(2);
  const DescriptorIndex index =
      build_index({{"A", &a.grid, &a.map}, {"B", &b.grid, &b.map}}, 0.5);
  for (const int k : {1, 3, 7}) {
    const TransferResult result = transfer_map(make_scene(1).grid, index, k);
    CHECK_NOTHROW(result.map.validate());
    for (const PatchStats& s : result.map.stats()) {
      CHECK(s.observed());
      if (s.has_directions()) CHECK(std::fabs(s.hod.sum() - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("adding the query scene to the index drives K=1 error to zero") {
  const TestScene query = make_scene(1);
  const TestScene other = make_scene(3);
  const DescriptorIndex without = build_index({{"A", &other.grid, &other.map}}, 0.5);
  const DescriptorIndex with = build_index(
      {{"A", &other.grid, &other.map}, {"Q", &query.grid, &query.map}}, 0.5);

  const auto max_error = [&](const DescriptorIndex& index) {
    const TransferResult result = transfer_map(query.grid, index, 1);
    double err = 0.0;
    for (int flat = 0; flat < query.map.grid().count(); ++flat) {
      const PatchStats& trained = query.map.stats()[flat];
      if (!trained.observed()) continue;
      const PatchStats& got = result.map.stats()[flat];
      err = std::max(err, std::fabs(got.rho - trained.rho));
      err = std::max(err, std::fabs(got.xi - trained.xi));
      err = std::max(err, (got.hod - trained.hod).lpNorm<Eigen::Infinity>());
    }
    return err;
  };
  CHECK(max_error(without) > 0.0);
  CHECK(max_error(with) == 0.0);
}

TEST_CASE("w=0 ranking is invariant to appending an absent class") {
  // raising the class count without adding cells appends the diagonal
  // sentinel to every g and a zero column to every l; local-only matching
  // must keep the exact neighbor ranking (the w>0 case is not claimed)
  const TestScene scene = make_scene(0);
  const SemanticGrid widened(scene.grid.width(), scene.grid.height(), 4, scene.grid.cell_size(),
                             scene.grid.labels());
  const DescriptorIndex ia = build_index({{"A", &scene.grid, &scene.map}}, 0.0);
  const DescriptorIndex ib = build_index({{"A", &widened, &scene.map}}, 0.0);
  const TransferResult ra = transfer_map(scene.grid, ia, 3);
  const TransferResult rb = transfer_map(widened, ib, 3);
  REQUIRE(ra.report.size() == rb.report.size());
  for (std::size_t i = 0; i < ra.report.size(); ++i) {
    CHECK(ra.report[i].scene_id == rb.report[i].scene_id);
    CHECK(ra.report[i].neighbor == rb.report[i].neighbor);
    CHECK(ra.report[i].distance == doctest::Approx(rb.report[i].distance).epsilon(1e-12));
  }
}

TEST_CASE("with_blend recombines stored descriptor parts") {
  const TestScene scene = make_scene(0);
  const DescriptorIndex index = build_index({{"A", &scene.grid, &scene.map}}, 0.5);
  const DescriptorIndex same = with_blend(index, 0.5);
  const DescriptorIndex global_only = with_blend(index, 1.0);
  for (std::size_t i = 0; i < index.entries().size(); ++i) {
    const ContextDescriptor& d = index.entries()[i].descriptor;
    CHECK((same.entries()[i].descriptor.combined - d.combined).lpNorm<Eigen::Infinity>() <=
          1e-12);
    const Eigen::VectorXd gn = d.global / d.global.lpNorm<1>();
    CHECK((global_only.entries()[i].descriptor.combined - gn).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
  CHECK(global_only.w() == 1.0);
  CHECK_NOTHROW(transfer_map(scene.grid, global_only, 2));
}

TEST_CASE("hallucinate reproduces the query when it is in the index") {
  const TestScene scene = make_scene(0);
  const DescriptorIndex index = build_index({{"A", &scene.grid, &scene.map}}, 0.5);
  const SemanticGrid out = hallucinate(scene.grid, index, 1);
  // patches with an index entry at distance zero copy themselves; patches
  // without one fall back to some observed patch's labels
  const PatchGrid patches = PatchGrid::over(scene.grid, index.patch_size());
  for (int flat = 0; flat < patches.count(); ++flat) {
    if (!scene.map.stats()[flat].observed()) continue;
    int x0, x1, y0, y1;
    patches.cell_span(patches.unflat(flat), x0, x1, y0, y1);
    for (int iy = y0; iy < y1; ++iy) {
      for (int ix = x0; ix < x1; ++ix) {
        CHECK(out.label(ix, iy) == scene.grid.label(ix, iy));
      }
    }
  }
  CHECK_NOTHROW(hallucinate(scene.grid, index, 5));
}

TEST_CASE("hallucination changes with the neighbor count on a mixed corpus") {
  const TestScene a = make_scene(0);
  const TestScene b = make_scene(2);
  const TestScene c = make_scene(4);
  const DescriptorIndex index = build_index(
      {{"A", &a.grid, &a.map}, {"B", &b.grid, &b.map}, {"C", &c.grid, &c.map}}, 0.5);
  const SemanticGrid query = make_scene(1).grid;
  const SemanticGrid k1 = hallucinate(query, index, 1);
  const SemanticGrid k_all = hallucinate(query, index, static_cast<int>(index.entries().size()));
  CHECK(k1.labels() != k_all.labels());
}
