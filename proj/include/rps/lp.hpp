#pragma once

#include <span>
#include <vector>

namespace rps::lp {

struct Solution {
  double value = 0.0;
  std::vector<double> x;
};

/// Maximizes c.x subject to A x <= b, x >= 0, for b >= 0 (the origin is
/// feasible). Dense tableau simplex with Bland's rule, so degenerate
/// problems terminate. Throws std::runtime_error if the problem is unbounded.
Solution maximize(std::span<const double> c, const std::vector<std::vector<double>>& A, std::span<const double> b);

}  // namespace rps::lp
