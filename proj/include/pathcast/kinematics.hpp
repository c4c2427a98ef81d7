#pragma once

#include <optional>
#include <vector>

#include "pathcast/common.hpp"

namespace pathcast {

/// First and second position derivatives at one sample, unit time spacing.
struct Derivatives {
  double dx = 0.0;
  double dy = 0.0;
  double ddx = 0.0;
  double ddy = 0.0;

  double speed_sq() const { return dx * dx + dy * dy; }
};

/// Finite-difference derivatives at every sample of a position sequence,
/// assuming unit spacing in the time index: central differences at interior
/// points, second-order one-sided at the two ends. Exact for polynomials of
/// degree <= 2.
inline std::vector<Derivatives> finite_diff_derivatives(const std::vector<Vec2>& p) {
  const std::size_t n = p.size();
  if (n < 3) throw ValidationError("finite differences need at least 3 samples");
  std::vector<Derivatives> out(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i].dx = 0.5 * (p[i + 1].x() - p[i - 1].x());
    out[i].dy = 0.5 * (p[i + 1].y() - p[i - 1].y());
    out[i].ddx = p[i + 1].x() - 2.0 * p[i].x() + p[i - 1].x();
    out[i].ddy = p[i + 1].y() - 2.0 * p[i].y() + p[i - 1].y();
  }
  out[0].dx = 0.5 * (-3.0 * p[0].x() + 4.0 * p[1].x() - p[2].x());
  out[0].dy = 0.5 * (-3.0 * p[0].y() + 4.0 * p[1].y() - p[2].y());
  out[0].ddx = p[0].x() - 2.0 * p[1].x() + p[2].x();
  out[0].ddy = p[0].y() - 2.0 * p[1].y() + p[2].y();
  out[n - 1].dx = 0.5 * (3.0 * p[n - 1].x() - 4.0 * p[n - 2].x() + p[n - 3].x());
  out[n - 1].dy = 0.5 * (3.0 * p[n - 1].y() - 4.0 * p[n - 2].y() + p[n - 3].y());
  out[n - 1].ddx = p[n - 1].x() - 2.0 * p[n - 2].x() + p[n - 3].x();
  out[n - 1].ddy = p[n - 1].y() - 2.0 * p[n - 2].y() + p[n - 3].y();
  return out;
}

/// Signed-magnitude curvature |x'y'' - y'x''| / (x'^2 + y'^2)^(3/2).
/// Empty when the speed is below min_speed: the sample is skipped rather
/// than treated as zero curvature.
inline std::optional<double> curvature(const Derivatives& d, double min_speed = 1e-6) {
  const double s2 = d.speed_sq();
  if (!(s2 > min_speed * min_speed)) return std::nullopt;
  return std::fabs(d.dx * d.ddy - d.dy * d.ddx) / (s2 * std::sqrt(s2));
}

}  // namespace pathcast
