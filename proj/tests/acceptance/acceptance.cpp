// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and run sizes are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rps/asymptotics.hpp"
#include "rps/dual.hpp"
#include "rps/dynamics.hpp"
#include "rps/flat_norm.hpp"
#include "rps/harris.hpp"
#include "rps/montecarlo.hpp"

using namespace rps;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

HarrisInputs sigma2(double T, SignVariant v = SignVariant::consistent) {
  HarrisInputs in;
  in.T = T;
  in.sign_variant = v;
  return in;
}

// 1
Outcome harris_exact() {
  constexpr double tol_beta = 1e-12, tol_4dp = 5e-5, budget = 1e-3;
  const auto t0 = Clock::now();
  const auto [gL, K] = lyapunov_constants(2.0, 1.0);
  const double beta = beta_root(K, coupling_constant(1.0), gL, 3.0, SignVariant::consistent);
  const auto [C, lambda] = limiting_constants(sigma2(1.0));
  const double elapsed = seconds_since(t0);
  const double beta_ref = (std::sqrt(265.0) - 11.0) / 24.0;
  const double C_ref = (std::sqrt(265.0) + 13.0) / (std::sqrt(265.0) - 11.0);
  const double eb = std::abs(beta - beta_ref);
  const bool ok = eb <= tol_beta && std::abs(C - C_ref) <= 1e-12 && std::abs(C - 5.5465) <= tol_4dp &&
                  std::abs(lambda - 2.0 / (3.0 * C)) <= 1e-15 && std::abs(lambda - 0.1202) <= tol_4dp &&
                  elapsed < budget;
  return {ok, fmt("beta=%.15f (err %.1e), C=%.6f, lambda=%.6f, %.3f ms", beta, eb, C, lambda, elapsed * 1e3)};
}

// 2
Outcome quadratic_residual() {
  constexpr double tol = 1e-12;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> S(0.1, 10.0);
  std::uniform_real_distribution<double> logT(std::log(0.01), std::log(10.0));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double sigma = S(rng), T = std::exp(logT(rng));
    const auto [gL, K] = lyapunov_constants(sigma, T);
    const double gH = coupling_constant(T);
    for (auto v : {SignVariant::consistent, SignVariant::as_typed}) {
      const double b = beta_root(K, gH, gL, 3.0, v);
      worst = std::max(worst, std::abs(beta_quadratic(b, K, gH, gL, 3.0, v)));
      if (!(b > 0.0)) worst = INFINITY;
    }
  }
  return {worst <= tol, fmt("max |residual| = %.2e over 200 roots", worst)};
}

// 3
Outcome lambda_monotone() {
  constexpr double tol = 1e-12;
  double worst_rise = 0.0, prev = INFINITY, first = 0.0, last = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double T = 0.01 + (10.0 - 0.01) * i / 999.0;
    const double l = constants_at(T, sigma2(T)).second;
    if (i == 0) first = l;
    last = l;
    worst_rise = std::max(worst_rise, l - prev);
    prev = l;
  }
  return {worst_rise <= tol, fmt("lambda(0.01)=%.6f, lambda(10)=%.6f, largest increase %.1e", first, last,
                                 std::max(worst_rise, 0.0))};
}

// 4
Outcome conservation() {
  constexpr double tol_mass = 1e-10, tol_moment = 1e-8, budget = 10.0;
  const auto t0 = Clock::now();
  const GridSpec g{0.5, 32, 200};
  const GridMeasure mu0 = ingest_density(SquareDensity{1}, g);
  SolverConfig cfg;
  const Trajectory tr = solve_nonlinear(mu0, ModelParams{3.0, 0.5}, cfg, project_Ph(mu0));
  const double elapsed = seconds_since(t0);
  const double m0 = total_mass(mu0), x0 = first_moment(mu0);
  double dm = 0.0, dx = 0.0;
  for (const auto& d : tr.diagnostics) {
    dm = std::max(dm, std::abs(d.mass - m0) / m0);
    dx = std::max(dx, std::abs(d.first_moment - x0) / x0);
  }
  const bool guard = tr.max_top_occupancy <= 1e-10;
  const bool ok = tr.stopped_early && dm <= tol_mass && dx <= tol_moment && tr.min_mass >= 0.0 && guard &&
                  elapsed < budget;
  return {ok, fmt("steps=%zu t=%.4g, mass drift %.1e, moment drift %.1e, min mass %.1e, top occupancy %.1e, %.2f s",
                  tr.steps, tr.times.back(), dm, dx, tr.min_mass, tr.max_top_occupancy, elapsed)};
}

// 5
Outcome envelope_dominance() {
  constexpr double budget = 120.0;
  const auto t0 = Clock::now();
  const ModelParams p{3.0, 0.5};
  const auto [C, lambda] = limiting_constants(sigma2(1.0));
  struct Case {
    const char* name;
    Density density;
    int K;
  };
  const std::vector<Case> cases = {
      {"square k0=1", SquareDensity{1}, 200},       {"square k0=4", SquareDensity{4}, 700},
      {"square k0=8", SquareDensity{8}, 1400},      {"exp alpha=0.25", ExponentialDensity{0.25}, 1400},
      {"exp alpha=1", ExponentialDensity{1.0}, 500}, {"exp alpha=4", ExponentialDensity{4.0}, 200},
  };
  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    const GridSpec g{0.5, 4, c.K};
    const GridMeasure mu0 = ingest_density(c.density, g, QuadratureRule::simpson);
    const GridMeasure limit = project_Ph(mu0);
    HarrisEnvelope env;
    env.C = C;
    env.lambda = lambda;
    env.eta = p.eta;
    env.B0 = mass_above_h(mu0);
    env.d0 = norm_V(mu0 - limit);
    const Trajectory tr = solve_nonlinear(mu0, p, SolverConfig{}, limit);
    double worst = 0.0;  // largest measured / envelope
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      worst = std::max(worst, tr.diagnostics[i].v_dist / decay_envelope(tr.times[i], env));
    }
    const bool case_ok = tr.stopped_early && worst <= 1.0 && tr.max_top_occupancy <= 1e-6;
    ok = ok && case_ok;
    detail += fmt("%s%s: max ratio %.3f, t_stop %.3g, top %.0e", detail.empty() ? "" : "; ", c.name, worst,
                  tr.times.back(), tr.max_top_occupancy);
  }
  const double elapsed = seconds_since(t0);
  ok = ok && elapsed < budget;
  return {ok, detail + fmt("; %.1f s", elapsed)};
}

// 6
Outcome exponential_limit() {
  const double alpha = 1.0, h = 0.5;
  auto rel_error = [&](int m) {
    const GridSpec g{h, m, 100};
    const GridMeasure P = project_Ph(ingest_density(ExponentialDensity{alpha}, g, QuadratureRule::midpoint));
    const double w = g.cell_width();
    double worst = 0.0;
    for (int j = 0; j < m; ++j) {
      const double exact = (std::exp(-alpha * j * w) - std::exp(-alpha * (j + 1) * w)) / -std::expm1(-alpha * h);
      worst = std::max(worst, std::abs(P(j, 0) / exact - 1.0));
    }
    return worst;
  };
  std::string detail;
  bool ok = true;
  double prev = rel_error(8);
  detail = fmt("rel err m=8 %.2e", prev);
  for (int m : {16, 32, 64}) {
    const double e = rel_error(m);
    const double ratio = prev / e;
    ok = ok && ratio >= 3.5;
    detail += fmt(", m=%d %.2e (x%.2f)", m, e, ratio);
    prev = e;
  }
  return {ok, detail};
}

// 7
Outcome rescaling() {
  const ModelParams p{3.0, 0.5};
  const GridSpec g{0.5, 4, 200};
  const GridMeasure mu0 = ingest_density(SquareDensity{1}, g);
  auto gap = [&](double dt) {
    SolverConfig cfg;
    cfg.dt0 = dt / 100.0;  // the cap binds: dt < theta_max * 3 / (2 eta B)
    cfg.t_end = 20.0;
    cfg.early_stop = false;
    cfg.store_measures = true;
    // Snapshots once per unit of t. Sampling the linear solve at every
    // nonlinear step would cut its mesh into the nonlinear one.
    cfg.snapshot_every = static_cast<int>(std::lround(1.0 / dt));
    const Trajectory nl = solve_nonlinear(mu0, p, cfg, project_Ph(mu0));
    const Trajectory lin = solve_linear(mu0, nl.theta.back(), dt, nl.theta);
    double worst = 0.0;
    std::size_t li = 0;
    for (std::size_t i = 0; i < nl.snapshots.size(); ++i) {
      while (li + 1 < lin.times.size() && lin.times[li] < nl.theta[i]) ++li;
      worst = std::max(worst, norm_TV(nl.snapshots[i].second - lin.snapshots[li].second));
    }
    return worst;
  };
  const double g1 = gap(0.05), g2 = gap(0.025);
  const double ratio = g1 / g2;
  return {ratio >= 1.7 && ratio <= 2.3, fmt("gap(dt=0.05)=%.3e, gap(dt=0.025)=%.3e, ratio %.3f", g1, g2, ratio)};
}

// 8
Outcome duality() {
  const ModelParams p{3.0, 0.5};
  const double dt = 1e-2;
  const GridSpec g{0.5, 4, 80};
  const GridMeasure mu0 = ingest_density(SquareDensity{1}, g);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<ClassFunction> fs;
    for (int j = 0; j < g.m; ++j) {
      ClassFunction f{g.offset_mid(j), std::vector<double>(static_cast<std::size_t>(g.levels()))};
      for (double& v : f.values) v = U(rng);
      fs.push_back(std::move(f));
    }
    worst = std::max(worst, duality_gap(mu0, fs, 1.0, p, dt));
  }

  // Picard against Euler: window 0.1, b = 1, eta = 3, 40 sweeps, ODE dt = 1e-4.
  ClassFunction f0{0.1, std::vector<double>(81)};
  for (std::size_t k = 0; k < f0.values.size(); ++k) f0.values[k] = std::cos(0.25 * (0.1 + 0.5 * k));
  const RateFunction one = RateFunction::constant(1.0);
  const PicardResult pic = picard_gamma(f0, one, 0.1, p, 40);
  const ClassFunction ode = evolve_dual_ode(f0, one, 0.0, 0.1, p, 1e-4);
  double pg = 0.0;
  for (std::size_t k = 0; k < f0.values.size(); ++k) pg = std::max(pg, std::abs(pic.f.values[k] - ode.values[k]));

  const bool ok = worst <= 10.0 * dt && pg <= 1e-6;
  return {ok, fmt("max duality gap %.2e (bound %.0e), Picard-ODE sup gap %.2e (bound 1e-6)", worst, 10.0 * dt, pg)};
}

// 9
Outcome certificates() {
  const double dt = 1e-3, h = 0.5;
  double worst_lyap = -INFINITY, worst_coup = -INFINITY;
  for (double t : {0.5, 1.0, 2.0}) {
    for (double x : {0.0, 0.1, 0.25, 0.4, 0.49}) {
      worst_lyap = std::max(worst_lyap, lyapunov_residual(x, h, t, dt, 2.0, 200));
    }
    worst_coup = std::max(worst_coup, measured_coupling(0.0, h, t, dt, 200) - coupling_bound(t));
  }
  const bool ok = worst_lyap <= 5.0 * dt && worst_coup <= 5.0 * dt;
  return {ok, fmt("max Lyapunov excess %.3e, max coupling excess %.3e (allowance %.0e)", worst_lyap, worst_coup,
                  5.0 * dt)};
}

// 10
Outcome flat_norm_oracle() {
  const FlatNormOptions unit_max{FlatWeight::unit, BLConvention::max};
  const FlatNormOptions unit_sum{FlatWeight::unit, BLConvention::sum};
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> count(1, 3), site(0, 200);
  std::uniform_real_distribution<double> w(-1.0, 1.0), loc(0.0, 3.0);
  double lattice_gap = 0.0, vertex_gap = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    // Atoms on a 0.01 lattice: every vertex of the unit-weight problem then
    // has f values on the 201-point lattice, so the search is exact.
    std::vector<Atom> a;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) a.push_back({0.01 * site(rng), w(rng)});
    const AtomicMeasure mu(a);
    lattice_gap = std::max(lattice_gap, std::abs(flat_norm(mu, 0.5, unit_max) - oracle::flat_norm_lattice(mu)));

    std::vector<Atom> b;
    for (int i = 0; i < n; ++i) b.push_back({loc(rng), w(rng)});
    const AtomicMeasure nu(b);
    const FlatNormOptions vmax{FlatWeight::V, BLConvention::max};
    vertex_gap = std::max(vertex_gap, std::abs(flat_norm(nu, 0.5, vmax) - oracle::flat_norm_vertices(nu, 0.5, vmax)));
  }
  double pair_gap = 0.0;
  for (double d : {0.05, 0.2, 0.5, 1.0}) {
    const AtomicMeasure pair({{0.2, 1.0}, {0.2 + d, -1.0}});
    pair_gap = std::max(pair_gap, std::abs(flat_norm(pair, 0.5, unit_max) - std::min(1.0, d)));
    pair_gap = std::max(pair_gap, std::abs(flat_norm(pair, 0.5, unit_sum) - 2.0 * d / (2.0 + d)));
  }
  const bool ok = lattice_gap <= 1e-6 && vertex_gap <= 1e-6 && pair_gap <= 1e-9;
  return {ok, fmt("LP vs lattice %.1e, LP vs vertices (V weight) %.1e, delta pairs %.1e", lattice_gap, vertex_gap,
                  pair_gap)};
}

// 11
Outcome ph_p0_bound() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::uniform_int_distribution<int> lev(0, 3);
  double worst_ratio = 0.0;
  const GridSpec g{0.5, 8, 3};
  for (int rep = 0; rep < 100; ++rep) {
    GridMeasure mu(g);
    const int atoms = 1 + rep % 6;
    for (int i = 0; i < atoms; ++i) mu(static_cast<int>(U(rng) * g.m), lev(rng)) += U(rng);
    worst_ratio = std::max(worst_ratio, ph_p0_distance(mu).ratio);
  }

  double uniform_excess = -INFINITY;
  for (double h : {0.5, 0.25, 0.125}) {
    const GridSpec gu{h, 32, 1};
    GridMeasure u(gu);
    for (int j = 0; j < gu.m; ++j) u(j, 0) = gu.cell_width();
    uniform_excess = std::max(uniform_excess, ph_p0_distance(u, {}, false).distance - h * h / 2.0);
  }

  // Exponential, unit weight: the flat norm of a probability measure is 1.
  std::string exp_detail;
  double prev_err = INFINITY, last_err = 0.0;
  bool decreasing = true;
  for (double h : {0.5, 0.25, 0.125}) {
    const GridSpec ge{h, 32, static_cast<int>(std::ceil(25.0 / h))};
    const GridMeasure mu = ingest_density(ExponentialDensity{1.0}, ge, QuadratureRule::simpson);
    const double d = ph_p0_distance(mu, {FlatWeight::unit, BLConvention::max}, false).distance / total_mass(mu);
    const double err = std::abs(d / h - 0.5) / 0.5;
    decreasing = decreasing && err < prev_err;
    prev_err = err;
    last_err = err;
    exp_detail += fmt(" h=%.3f: ratio/h=%.4f", h, d / h);
  }
  const bool ok = worst_ratio <= g.h + 1e-9 && uniform_excess <= 1e-9 && decreasing && last_err <= 0.05;
  return {ok, fmt("max ratio %.4f (h=0.5), uniform excess %.1e,", worst_ratio, uniform_excess) + exp_detail};
}

// 12
Outcome wealth_identity() {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const GridSpec g{0.5, 8, 30};
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    GridMeasure mu(g);
    for (auto& v : mu.masses()) v = U(rng);
    worst = std::max(worst, std::abs(first_moment(mu) - first_moment(project_Ph(mu)) - wealth_loss(mu)));
  }
  return {worst <= 1e-12, fmt("max residual %.2e", worst)};
}

// 13
Outcome monte_carlo() {
  constexpr double threshold = 0.05, slope_target = -0.5, slope_tol = 0.15, budget = 120.0;
  const auto t0 = Clock::now();
  const ModelParams p{3.0, 0.5};
  const GridSpec g{0.5, 32, 200};
  const GridMeasure init = ingest_density(SquareDensity{1}, g);
  McOptions o;
  o.t_end = 1.0;
  o.replicates = 16;
  o.seed = 13;
  o.compare_m = 1;
  o.pde_dt0 = 1e-5;

  o.N = 10000;
  const McReport main = mc_compare(init, p, o);

  std::vector<double> lx, ly;
  for (std::size_t N : {1000u, 4000u, 16000u}) {
    o.N = N;
    lx.push_back(std::log(static_cast<double>(N)));
    ly.push_back(std::log(mc_compare(init, p, o).mean_tv));
  }
  const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  const double elapsed = seconds_since(t0);
  const bool ok = main.mean_tv <= threshold && std::abs(slope - slope_target) <= slope_tol && elapsed < budget;
  return {ok, fmt("mean TV %.4f +- %.4f (N=1e4, 16 reps), TV of average %.4f, slope %.3f, %.1f s", main.mean_tv,
                  main.stderr_tv, main.tv_of_mean, slope, elapsed)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Harris constants, exact", harris_exact},
      {"quadratic-root residual", quadratic_residual},
      {"lambda(T) nonincreasing", lambda_monotone},
      {"conservation suite", conservation},
      {"decay-envelope dominance", envelope_dominance},
      {"asymptotic limit, closed form", exponential_limit},
      {"rescaling identity, first order", rescaling},
      {"duality and Picard", duality},
      {"Lyapunov and coupling certificates", certificates},
      {"flat-norm oracle", flat_norm_oracle},
      {"P_h/P_0 bound", ph_p0_bound},
      {"wealth identity", wealth_identity},
      {"Monte Carlo consistency", monte_carlo},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
