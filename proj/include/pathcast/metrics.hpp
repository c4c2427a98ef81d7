#pragma once

#include <limits>
#include <vector>

#include "pathcast/common.hpp"

namespace pathcast {

/// Modified Hausdorff distance between two nonempty point sets:
/// max of the two directed mean nearest-neighbor distances.
inline double mhd(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  if (a.empty() || b.empty()) throw ValidationError("mhd: point sets must be nonempty");
  const auto directed = [](const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
    double sum = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, (p - q).norm());
      sum += best;
    }
    return sum / static_cast<double>(from.size());
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace pathcast
