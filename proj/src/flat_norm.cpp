#include "rps/flat_norm.hpp"

#include <vector>

#include "rps/lp.hpp"

namespace rps {

double flat_norm(const AtomicMeasure& mu, double h, FlatNormOptions opts) {
  const AtomicMeasure c0 = mu.canonical();
  const std::vector<Atom>& atoms = c0.atoms();
  const std::size_t n = atoms.size();
  if (n == 0) return 0.0;

  // Variables: p_0..p_{n-1}, q_0..q_{n-1} (f = p - q), a, b.
  const std::size_t nvar = 2 * n + 2;
  const std::size_t ia = 2 * n;
  const std::size_t ib = 2 * n + 1;

  std::vector<double> c(nvar, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = atoms[i].weight;
    c[n + i] = -atoms[i].weight;
  }

  std::vector<std::vector<double>> A;
  std::vector<double> rhs;
  auto row = [&]() -> std::vector<double>& {
    A.emplace_back(nvar, 0.0);
    rhs.push_back(0.0);
    return A.back();
  };

  for (std::size_t i = 0; i < n; ++i) {
    const double w = opts.weight == FlatWeight::V ? weight_V(atoms[i].location, h) : 1.0;
    auto& up = row();
    up[i] = 1.0;
    up[n + i] = -1.0;
    up[ia] = -w;
    auto& down = row();
    down[i] = -1.0;
    down[n + i] = 1.0;
    down[ia] = -w;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = atoms[i + 1].location - atoms[i].location;
    auto& up = row();
    up[i + 1] = 1.0;
    up[n + i + 1] = -1.0;
    up[i] = -1.0;
    up[n + i] = 1.0;
    up[ib] = -d;
    auto& down = row();
    down[i + 1] = -1.0;
    down[n + i + 1] = 1.0;
    down[i] = 1.0;
    down[n + i] = -1.0;
    down[ib] = -d;
  }
  if (opts.convention == BLConvention::sum) {
    auto& r = row();
    r[ia] = 1.0;
    r[ib] = 1.0;
    rhs.back() = 1.0;
  } else {
    row()[ia] = 1.0;
    rhs.back() = 1.0;
    row()[ib] = 1.0;
    rhs.back() = 1.0;
  }

  return lp::maximize(c, A, rhs).value;
}

double flat_norm(const GridMeasure& mu, FlatNormOptions opts) { return flat_norm(to_atomic(mu), mu.spec().h, opts); }

}  // namespace rps
