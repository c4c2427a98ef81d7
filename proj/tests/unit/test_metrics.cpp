#include <doctest.h>

#include <cmath>
#include <random>

#include "pathcast/metrics.hpp"

using namespace pathcast;

namespace {

std::vector<Vec2> random_points(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<Vec2> out;
  for (int i = 0; i < n; ++i) out.push_back(Vec2(u(rng), u(rng)));
  return out;
}

}  // namespace

TEST_CASE("mhd of identical sets is zero") {
  const std::vector<Vec2> a{Vec2(1, 2), Vec2(3, 4), Vec2(-1, 0)};
  CHECK(mhd(a, a) == 0.0);
}

TEST_CASE("mhd of two singletons is the point distance") {
  CHECK(mhd({Vec2(0, 0)}, {Vec2(3, 4)}) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("mhd hand-enumerated case") {
  const std::vector<Vec2> a{Vec2(0, 0), Vec2(1, 0)};
  const std::vector<Vec2> b{Vec2(0, 1)};
  CHECK(mhd(a, b) == doctest::Approx((1.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-12));
}

TEST_CASE("mhd is symmetric") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(1, 12);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_points(rng, size(rng));
    const auto b = random_points(rng, size(rng));
    CHECK(mhd(a, b) == mhd(b, a));
  }
}

TEST_CASE("mhd is translation invariant and scales linearly") {
  std::mt19937_64 rng(13);
  const auto a = random_points(rng, 9);
  const auto b = random_points(rng, 5);
  const double base = mhd(a, b);

  const Vec2 shift(4.2, -1.7);
  auto at = a, bt = b;
  for (auto& p : at) p += shift;
  for (auto& p : bt) p += shift;
  CHECK(mhd(at, bt) == doctest::Approx(base).epsilon(1e-12));

  const double scale = 3.5;
  auto as = a, bs = b;
  for (auto& p : as) p *= scale;
  for (auto& p : bs) p *= scale;
  CHECK(mhd(as, bs) == doctest::Approx(scale * base).epsilon(1e-12));
}

TEST_CASE("mhd rejects empty sets") {
  CHECK_THROWS_AS(mhd({}, {Vec2(0, 0)}), ValidationError);
  CHECK_THROWS_AS(mhd({Vec2(0, 0)}, {}), ValidationError);
}
