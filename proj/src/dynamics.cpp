#include "rps/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rps/asymptotics.hpp"
#include "rps/error.hpp"

namespace rps {

void SolverConfig::validate() const {
  if (!(dt0 > 0.0)) throw ConfigError("solver.dt0 must be > 0");
  if (!(theta_max > 0.0 && theta_max < 1.0)) throw ConfigError("solver.theta_max must lie in (0,1)");
  if (!(t_end >= 0.0)) throw ConfigError("solver.t_end must be >= 0");
  if (!(stop_frac > 0.0 && stop_frac < 1.0)) throw ConfigError("solver.stop_frac must lie in (0,1)");
  if (snapshot_every < 1) throw ConfigError("solver.snapshot_every must be >= 1");
}

namespace {

// In-place Euler update of one offset column with rate*dt = cdt.
void euler_column(std::span<double> w, double cdt, std::vector<double>& scratch) {
  const std::size_t K = w.size() - 1;
  scratch.assign(w.begin(), w.end());
  const double* s = scratch.data();
  w[0] = s[0] + cdt * s[1];
  if (K == 1) {
    w[1] = s[1] - cdt * s[1];
    return;
  }
  w[1] = s[1] + cdt * (s[2] - 2.0 * s[1]);
  for (std::size_t k = 2; k < K; ++k) w[k] = s[k] + cdt * (s[k - 1] + s[k + 1] - 2.0 * s[k]);
  w[K] = s[K] + cdt * (s[K - 1] - s[K]);
}

void generator_column(std::span<const double> w, double c, std::span<double> d) {
  const std::size_t K = w.size() - 1;
  d[0] = c * w[1];
  if (K == 1) {
    d[1] = -c * w[1];
    return;
  }
  d[1] = c * (w[2] - 2.0 * w[1]);
  for (std::size_t k = 2; k < K; ++k) d[k] = c * (w[k - 1] + w[k + 1] - 2.0 * w[k]);
  d[K] = c * (w[K - 1] - w[K]);
}

void euler_inplace(GridMeasure& mu, double cdt, std::vector<double>& scratch) {
  for (int j = 0; j < mu.spec().m; ++j) euler_column(mu.column(j), cdt, scratch);
}

struct Scan {
  double min = std::numeric_limits<double>::infinity();
  bool finite = true;
};

Scan scan(const GridMeasure& mu) {
  Scan s;
  for (double v : mu.masses()) {
    if (!std::isfinite(v)) {
      s.finite = false;
      return s;
    }
    s.min = std::min(s.min, v);
  }
  return s;
}

Diagnostics diagnose(const GridMeasure& mu, const GridMeasure& limit) {
  const GridMeasure diff = mu - limit;
  return {norm_TV(diff), norm_V(diff), total_mass(mu), first_moment(mu)};
}

}  // namespace

GridMeasure apply_generator(const GridMeasure& mu, double c) {
  GridMeasure d(mu.spec());
  for (int j = 0; j < mu.spec().m; ++j) generator_column(mu.column(j), c, d.column(j));
  return d;
}

double adaptive_dt(double B, const ModelParams& params, const SolverConfig& config) {
  const double cap = config.dt_cap();
  if (!(B > 0.0)) return cap;
  return std::min(cap, config.theta_max * 3.0 / (2.0 * params.eta * B));
}

GridMeasure step_euler(const GridMeasure& mu, double c, double dt) {
  GridMeasure out = mu;
  std::vector<double> scratch;
  euler_inplace(out, c * dt, scratch);
  return out;
}

Trajectory solve_nonlinear(const GridMeasure& mu0, const ModelParams& params, const SolverConfig& config,
                           const GridMeasure& limit) {
  params.validate();
  config.validate();
  if (!(mu0.spec() == limit.spec())) throw ConfigError("limit measure lives on a different grid");
  if (std::abs(mu0.spec().h - params.h) > 1e-12 * params.h) throw ConfigError("grid h differs from model h");

  Trajectory traj(mu0.spec());
  GridMeasure mu = mu0;
  std::vector<double> scratch;

  const double mass0 = total_mass(mu0);
  const double mass_scale = std::abs(mass0) > 0.0 ? std::abs(mass0) : 1.0;
  const double d0 = norm_V(mu0 - limit);
  const double stop_level = config.stop_frac * d0;
  bool warned_top = false;

  double t = 0.0;
  double theta = 0.0;
  double B = mass_above_h(mu);
  const double rate = params.eta / 3.0;

  Scan sc = scan(mu);
  traj.min_mass = sc.min;

  auto record = [&](const Diagnostics& diag) {
    traj.times.push_back(t);
    traj.B.push_back(B);
    traj.theta.push_back(theta);
    traj.diagnostics.push_back(diag);
    if (config.store_measures) traj.snapshots.emplace_back(t, mu);
  };

  auto check_top = [&]() {
    const double occ = std::abs(top_level_mass(mu)) / mass_scale;
    traj.max_top_occupancy = std::max(traj.max_top_occupancy, occ);
    if (!warned_top && occ > 1e-10) {
      warned_top = true;
      traj.warnings.push_back("top level K holds " + std::to_string(occ) +
                              " of the total mass at t = " + std::to_string(t) + "; increase grid.K");
    }
  };
  check_top();

  Diagnostics diag = diagnose(mu, limit);
  record(diag);

  std::size_t step = 0;
  for (;;) {
    if (config.early_stop && diag.v_dist <= stop_level) {
      traj.stopped_early = true;
      break;
    }
    if (t >= config.t_end) break;

    double dt = adaptive_dt(std::abs(B), params, config);
    bool last = false;
    if (t + dt >= config.t_end) {
      dt = config.t_end - t;
      last = true;
    }

    traj.rate_times.push_back(t);
    traj.rate_values.push_back(B);

    euler_inplace(mu, rate * B * dt, scratch);
    ++step;

    const double B_new = mass_above_h(mu);
    if (config.theta_rule == ThetaRule::left) {
      theta += dt * rate * B;
    } else {
      theta += 0.5 * dt * rate * (B + B_new);
    }
    t = last ? config.t_end : t + dt;
    B = B_new;

    sc = scan(mu);
    if (!sc.finite || !std::isfinite(B)) throw NumericalError("non-finite mass encountered", step);
    traj.min_mass = std::min(traj.min_mass, sc.min);
    check_top();

    diag = diagnose(mu, limit);
    const bool stop_now = config.early_stop && diag.v_dist <= stop_level;
    if (step % static_cast<std::size_t>(config.snapshot_every) == 0 || stop_now || t >= config.t_end) {
      record(diag);
    }
  }

  traj.rate_times.push_back(t);
  traj.rate_values.push_back(B);
  traj.steps = step;
  traj.final_state = mu;
  return traj;
}

Trajectory solve_linear(const GridMeasure& mu0, double tau_end, double dt, std::span<const double> sample_taus) {
  // unit rate: 1 - 2 dt >= 1 - theta_max with the default margin 0.5
  if (!(dt > 0.0) || dt > 0.25) throw ConfigError("linear solver needs 0 < dt <= 1/4");
  if (!(tau_end >= 0.0)) throw ConfigError("tau_end must be >= 0");
  if (!std::is_sorted(sample_taus.begin(), sample_taus.end())) throw ConfigError("sample times must be ascending");

  const GridMeasure limit = project_Ph(mu0);
  Trajectory traj(mu0.spec());
  GridMeasure mu = mu0;
  std::vector<double> scratch;
  double tau = 0.0;

  auto record = [&]() {
    traj.times.push_back(tau);
    traj.B.push_back(mass_above_h(mu));
    traj.theta.push_back(tau);
    traj.diagnostics.push_back(diagnose(mu, limit));
    traj.snapshots.emplace_back(tau, mu);
  };
  record();
  traj.min_mass = scan(mu).min;

  std::vector<double> targets;
  for (double s : sample_taus) {
    if (s > 0.0 && s < tau_end) targets.push_back(s);
  }
  targets.push_back(tau_end);

  std::size_t step = 0;
  for (double target : targets) {
    while (tau < target) {
      double h = dt;
      bool hit = false;
      if (tau + h >= target) {
        h = target - tau;
        hit = true;
      }
      traj.rate_times.push_back(tau);
      traj.rate_values.push_back(mass_above_h(mu));
      euler_inplace(mu, h, scratch);
      ++step;
      tau = hit ? target : tau + h;
      const Scan sc = scan(mu);
      if (!sc.finite) throw NumericalError("non-finite mass encountered", step);
      traj.min_mass = std::min(traj.min_mass, sc.min);
    }
    if (traj.times.back() != tau) record();
  }

  traj.rate_times.push_back(tau);
  traj.rate_values.push_back(mass_above_h(mu));
  traj.steps = step;
  traj.final_state = mu;
  return traj;
}

double theta_lower_bound(double t, double B0, const ModelParams& params) {
  return std::log1p(params.eta * B0 * t / 3.0);
}

}  // namespace rps
