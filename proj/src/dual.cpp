#include "rps/dual.hpp"

#include <algorithm>
#include <cmath>

#include "rps/asymptotics.hpp"
#include "rps/error.hpp"

namespace rps {

double ClassFunction::sup_norm() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

double ClassFunction::v_norm(double h) const {
  double s = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    s = std::max(s, std::abs(values[k]) / weight_V(offset, static_cast<int>(k), h));
  }
  return s;
}

RateFunction RateFunction::constant(double value) {
  if (!(value >= 0.0)) throw ConfigError("rate must be nonnegative");
  RateFunction r;
  r.times_ = {0.0};
  r.values_ = {value};
  r.cumulative_ = {0.0};
  return r;
}

RateFunction RateFunction::table(std::vector<double> times, std::vector<double> values) {
  if (times.empty() || times.size() != values.size()) throw ConfigError("rate table needs matching nonempty columns");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(values[i] >= 0.0)) throw ConfigError("rate table values must be nonnegative");
    if (i > 0 && !(times[i] >= times[i - 1])) throw ConfigError("rate table times must be nondecreasing");
  }
  RateFunction r;
  r.times_ = std::move(times);
  r.values_ = std::move(values);
  r.cumulative_.assign(r.times_.size(), 0.0);
  for (std::size_t i = 1; i < r.times_.size(); ++i) {
    r.cumulative_[i] =
        r.cumulative_[i - 1] + 0.5 * (r.times_[i] - r.times_[i - 1]) * (r.values_[i] + r.values_[i - 1]);
  }
  return r;
}

double RateFunction::operator()(double t) const {
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double span = times_[i + 1] - times_[i];
  if (span <= 0.0) return values_[i + 1];
  const double s = (t - times_[i]) / span;
  return (1.0 - s) * values_[i] + s * values_[i + 1];
}

double RateFunction::primitive(double t) const {
  if (t <= times_.front()) return (t - times_.front()) * values_.front();
  if (t >= times_.back()) return cumulative_.back() + (t - times_.back()) * values_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  return cumulative_[i] + 0.5 * (t - times_[i]) * (values_[i] + (*this)(t));
}

double RateFunction::integral(double s, double t) const { return primitive(t) - primitive(s); }

double RateFunction::sup() const { return *std::max_element(values_.begin(), values_.end()); }

namespace {

void apply_A_into(const std::vector<double>& f, std::vector<double>& out) {
  const std::size_t K = f.size() - 1;
  out.resize(f.size());
  out[0] = 0.0;
  for (std::size_t k = 1; k < K; ++k) out[k] = f[k + 1] + f[k - 1] - 2.0 * f[k];
  out[K] = f[K - 1] - f[K];
}

}  // namespace

ClassFunction apply_A(const ClassFunction& f) {
  if (f.values.size() < 2) throw ConfigError("class function needs at least two levels");
  ClassFunction out{f.offset, {}};
  apply_A_into(f.values, out.values);
  return out;
}

ClassFunction evolve_dual_ode(const ClassFunction& f0, const RateFunction& b, double s, double t,
                              const ModelParams& params, double dt) {
  params.validate();
  if (!(s <= t)) throw ConfigError("dual evolution needs s <= t");
  if (!(dt > 0.0)) throw ConfigError("dual step must be positive");
  if (f0.values.size() < 2) throw ConfigError("class function needs at least two levels");

  const double rate = params.eta / 3.0;
  ClassFunction f = f0;
  std::vector<double> Af;
  double sigma = s;
  while (sigma < t) {
    double step = dt;
    bool last = false;
    if (sigma + step >= t) {
      step = t - sigma;
      last = true;
    }
    const double c = rate * b(sigma);
    if (2.0 * c * step > 1.0) throw ConfigError("dual step too large: 2 (eta/3) b dt exceeds 1");
    apply_A_into(f.values, Af);
    for (std::size_t k = 0; k < Af.size(); ++k) f.values[k] += step * c * Af[k];
    sigma = last ? t : sigma + step;
  }
  return f;
}

PicardResult picard_gamma(const ClassFunction& f0, const RateFunction& b, double window, const ModelParams& params,
                          int iters, int nodes) {
  params.validate();
  if (iters < 1) throw ConfigError("picard iteration count must be >= 1");
  if (nodes < 2) throw ConfigError("picard mesh needs at least two nodes");
  if (f0.values.size() < 2) throw ConfigError("class function needs at least two levels");
  const double bmax = b.sup();
  if (!(window > 0.0) || (bmax > 0.0 && !(window < 3.0 / (2.0 * params.eta * bmax)))) {
    throw ConfigError("picard window must satisfy 0 < window < 3 / (2 eta sup b)");
  }

  const std::size_t N = static_cast<std::size_t>(nodes) - 1;
  const std::size_t L = f0.values.size();
  const std::size_t K = L - 1;
  const double dsig = window / static_cast<double>(N);
  const double rate = params.eta / 3.0;

  std::vector<double> beta(N + 1);       // (eta/3) b at the nodes
  std::vector<double> lam(N);            // integral of (eta/3) b over each interval
  for (std::size_t n = 0; n <= N; ++n) beta[n] = rate * b(n * dsig);
  for (std::size_t n = 0; n < N; ++n) lam[n] = rate * b.integral(n * dsig, (n + 1) * dsig);

  // F[n * L + k] = f(t_n, x + k h), constant-in-time start.
  std::vector<double> F((N + 1) * L);
  for (std::size_t n = 0; n <= N; ++n) std::copy(f0.values.begin(), f0.values.end(), F.begin() + n * L);
  std::vector<double> G(F.size());

  auto neighbours = [&](const std::vector<double>& X, std::size_t n, std::size_t k) {
    const double* row = X.data() + n * L;
    return k < K ? row[k + 1] + row[k - 1] : row[K - 1];
  };

  PicardResult result;
  result.contraction_bound = 2.0 * rate * bmax * window;
  for (int it = 0; it < iters; ++it) {
    for (std::size_t n = 0; n <= N; ++n) G[n * L] = f0.values[0];
    for (std::size_t k = 1; k <= K; ++k) {
      const double r = k < K ? 2.0 : 1.0;  // top level has a single neighbour
      double decay0 = 1.0;                 // exp(-r Lambda(0, t_n))
      double integral = 0.0;               // trapezoid sum up to t_n
      G[k] = f0.values[k];
      for (std::size_t n = 0; n < N; ++n) {
        const double e = std::exp(-r * lam[n]);
        decay0 *= e;
        integral = e * integral +
                   0.5 * dsig * (beta[n] * e * neighbours(F, n, k) + beta[n + 1] * neighbours(F, n + 1, k));
        G[(n + 1) * L + k] = f0.values[k] * decay0 + integral;
      }
    }
    double change = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) change = std::max(change, std::abs(G[i] - F[i]));
    result.sweep_change.push_back(change);
    std::swap(F, G);
  }

  result.f.offset = f0.offset;
  result.f.values.assign(F.begin() + N * L, F.end());
  return result;
}

double duality_gap(const GridMeasure& mu0, const std::vector<ClassFunction>& f0, double t, const ModelParams& params,
                   double dt) {
  const GridSpec& g = mu0.spec();
  if (f0.size() != static_cast<std::size_t>(g.m)) throw ConfigError("need one class function per offset cell");
  for (const ClassFunction& f : f0) {
    if (f.values.size() != static_cast<std::size_t>(g.levels())) throw ConfigError("class function length != K+1");
  }

  SolverConfig cfg;
  cfg.dt0 = dt / 100.0;
  cfg.t_end = t;
  cfg.early_stop = false;
  cfg.snapshot_every = 1 << 30;
  const Trajectory traj = solve_nonlinear(mu0, params, cfg, project_Ph(mu0));
  const RateFunction b = RateFunction::table(traj.rate_times, traj.rate_values);

  double lhs = 0.0;
  double rhs = 0.0;
  for (int j = 0; j < g.m; ++j) {
    const auto now = traj.final_state.column(j);
    const auto start = mu0.column(j);
    const ClassFunction evolved = evolve_dual_ode(f0[j], b, 0.0, t, params, dt);
    for (int k = 0; k <= g.K; ++k) {
      lhs += now[k] * f0[j].values[k];
      rhs += start[k] * evolved.values[k];
    }
  }
  return std::abs(lhs - rhs);
}

double coupling_bound(double t) { return 1.0 + std::exp(-2.0 * t); }

double measured_coupling(double x, double h, double t, double dt, int K) {
  if (!(x >= 0.0 && x < h)) throw ConfigError("offset must lie in [0,h)");
  GridMeasure pair(GridSpec{h, 1, K});
  pair(0, 0) = 1.0;
  pair(0, 1) = -1.0;
  const Trajectory traj = solve_linear(pair, t, dt);
  return norm_TV(traj.final_state);
}

double lyapunov_residual(double x, double h, double t, double dt, double sigma, int K) {
  if (!(x >= 0.0 && x < h)) throw ConfigError("offset must lie in [0,h)");
  ClassFunction V{x, std::vector<double>(static_cast<std::size_t>(K) + 1)};
  for (int k = 0; k <= K; ++k) V.values[k] = weight_V(x, k, h);
  const ClassFunction NV = evolve_dual_ode(V, RateFunction::constant(1.0), 0.0, t, ModelParams{3.0, h}, dt);
  const double decay = std::exp(-sigma * t);
  double worst = -1e300;
  for (int k = 0; k <= K; ++k) {
    worst = std::max(worst, NV.values[k] - decay * V.values[k] - 2.0 * (1.0 - decay));
  }
  return worst;
}

}  // namespace rps
