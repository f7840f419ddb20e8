#pragma once

// Time evolution of the nonlinear exchange equation and of its time-rescaled
// linear counterpart.
//
// Per offset column the generator is the gated birth-death stencil
//
//   d_0 = c w_1
//   d_1 = c (w_2 - 2 w_1)
//   d_k = c (w_{k-1} + w_{k+1} - 2 w_k)      2 <= k <= K-1
//   d_K = c (w_{K-1} - w_K)                  reflecting top
//
// with c = (eta/3) mu([h,inf)) for the nonlinear equation and c = 1 for the
// rescaled one. Column sums vanish, so mass is conserved exactly.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rps/measure.hpp"

namespace rps {

enum class ThetaRule { left, trapezoid };

struct SolverConfig {
  double dt0 = 0.1;          // dt cap is 100 * dt0
  double theta_max = 0.5;    // positivity margin, 1 - (2 eta/3) B dt >= 1 - theta_max
  double t_end = 1e7;
  double stop_frac = 0.05;   // stop once the V-distance to the limit drops below this fraction
  int snapshot_every = 1;
  bool early_stop = true;
  bool store_measures = false;
  ThetaRule theta_rule = ThetaRule::left;

  void validate() const;
  double dt_cap() const noexcept { return 100.0 * dt0; }
};

struct Diagnostics {
  double tv_dist = 0.0;  // ||mu_t - limit||_TV
  double v_dist = 0.0;   // ||mu_t - limit||_V
  double mass = 0.0;
  double first_moment = 0.0;
};

struct Trajectory {
  // One entry per snapshot.
  std::vector<double> times;
  std::vector<double> B;
  std::vector<double> theta;
  std::vector<Diagnostics> diagnostics;
  std::vector<std::pair<double, GridMeasure>> snapshots;  // only with store_measures

  // (t, B) at the start of every step plus the final time; the dual solver
  // reads this as its rate table.
  std::vector<double> rate_times;
  std::vector<double> rate_values;

  std::size_t steps = 0;
  bool stopped_early = false;
  double min_mass = 0.0;            // smallest cell mass seen over the run
  double max_top_occupancy = 0.0;   // largest sum_j w[j,K] / |total mass|
  std::vector<std::string> warnings;

  GridMeasure final_state;

  explicit Trajectory(const GridSpec& spec) : final_state(spec) {}
};

/// Time derivative c * G mu of the gated birth-death generator.
GridMeasure apply_generator(const GridMeasure& mu, double c);

/// Largest positivity-preserving step, capped at 100 * dt0.
double adaptive_dt(double B, const ModelParams& params, const SolverConfig& config);

/// mu + dt * apply_generator(mu, c).
GridMeasure step_euler(const GridMeasure& mu, double c, double dt);

/// Explicit Euler for the nonlinear equation with adaptive steps. Distances
/// are measured against `limit` (normally project_Ph(mu0)). Throws
/// NumericalError on non-finite state.
Trajectory solve_nonlinear(const GridMeasure& mu0, const ModelParams& params, const SolverConfig& config,
                           const GridMeasure& limit);

/// Unit-rate linear equation up to tau_end with uniform steps dt. Each time in
/// `sample_taus` (ascending) is hit exactly by shortening the preceding step
/// and recorded as a snapshot, as are tau = 0 and tau_end. The measure is
/// stored at every snapshot. Requires dt <= 1/4, the default positivity margin.
Trajectory solve_linear(const GridMeasure& mu0, double tau_end, double dt, std::span<const double> sample_taus = {});

/// log(1 + eta B0 t / 3)
double theta_lower_bound(double t, double B0, const ModelParams& params);

}  // namespace rps
