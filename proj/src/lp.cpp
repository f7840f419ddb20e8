#include "rps/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rps::lp {

Solution maximize(std::span<const double> c, const std::vector<std::vector<double>>& A, std::span<const double> b) {
  const std::size_t rows = A.size();
  const std::size_t nvar = c.size();
  if (b.size() != rows) throw std::invalid_argument("lp: b has wrong length");
  const std::size_t cols = nvar + rows + 1;  // structural, slack, rhs

  std::vector<double> t((rows + 1) * cols, 0.0);
  auto at = [&](std::size_t r, std::size_t col) -> double& { return t[r * cols + col]; };

  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    if (A[r].size() != nvar) throw std::invalid_argument("lp: ragged constraint matrix");
    if (b[r] < 0.0) throw std::invalid_argument("lp: negative right-hand side");
    for (std::size_t v = 0; v < nvar; ++v) at(r, v) = A[r][v];
    at(r, nvar + r) = 1.0;
    at(r, cols - 1) = b[r];
    basis[r] = nvar + r;
  }
  for (std::size_t v = 0; v < nvar; ++v) at(rows, v) = -c[v];

  constexpr double eps = 1e-12;
  for (;;) {
    // Bland: lowest-index improving column.
    std::size_t enter = cols;
    for (std::size_t col = 0; col + 1 < cols; ++col) {
      if (at(rows, col) < -eps) {
        enter = col;
        break;
      }
    }
    if (enter == cols) break;

    std::size_t leave = rows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      const double a = at(r, enter);
      if (a > eps) {
        const double ratio = at(r, cols - 1) / a;
        if (ratio < best - eps || (std::abs(ratio - best) <= eps && basis[r] < basis[leave])) {
          best = ratio;
          leave = r;
        }
      }
    }
    if (leave == rows) throw std::runtime_error("lp: objective unbounded");

    const double piv = at(leave, enter);
    for (std::size_t col = 0; col < cols; ++col) at(leave, col) /= piv;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (std::size_t col = 0; col < cols; ++col) at(r, col) -= f * at(leave, col);
    }
    basis[leave] = enter;
  }

  Solution sol;
  sol.x.assign(nvar, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] < nvar) sol.x[basis[r]] = at(r, cols - 1);
  }
  sol.value = at(rows, cols - 1);
  return sol;
}

}  // namespace rps::lp
