#include "rps/asymptotics.hpp"

#include <cmath>

#include "rps/error.hpp"

namespace rps {

GridMeasure project_Ph(const GridMeasure& mu) {
  GridMeasure out(mu.spec());
  for (int j = 0; j < mu.spec().m; ++j) {
    double s = 0.0;
    for (double v : mu.column(j)) s += v;
    out(j, 0) = s;
  }
  return out;
}

AtomicMeasure project_P0(const GridMeasure& mu) { return AtomicMeasure({{0.0, total_mass(mu)}}); }

void HarrisEnvelope::validate() const {
  if (!(C >= 1.0)) throw ConfigError("envelope prefactor C must be >= 1");
  if (!(lambda > 0.0)) throw ConfigError("envelope exponent lambda must be > 0");
  if (!(B0 >= 0.0) || !(d0 >= 0.0)) throw ConfigError("envelope B0 and d0 must be >= 0");
}

double decay_envelope(double t, const HarrisEnvelope& env) {
  return env.C * env.d0 / std::pow(1.0 + env.eta * env.B0 * t / 3.0, env.lambda);
}

double wealth_loss(const GridMeasure& mu) {
  const GridSpec& g = mu.spec();
  double s = 0.0;
  for (int j = 0; j < g.m; ++j) {
    const auto col = mu.column(j);
    for (int k = 1; k <= g.K; ++k) s += k * col[k];
  }
  return g.h * s;
}

PhP0Distance ph_p0_distance(const GridMeasure& mu, FlatNormOptions opts, bool with_ratio) {
  AtomicMeasure diff = to_atomic(project_Ph(mu));
  diff -= project_P0(mu);
  PhP0Distance r;
  r.distance = flat_norm(diff, mu.spec().h, opts);
  if (!with_ratio) return r;
  r.mu_norm = flat_norm(mu, opts);
  r.ratio = r.mu_norm > 0.0 ? r.distance / r.mu_norm : 0.0;
  r.within_bound = r.ratio <= mu.spec().h + 1e-9;
  return r;
}

}  // namespace rps
