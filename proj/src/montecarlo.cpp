#include "rps/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "rps/asymptotics.hpp"
#include "rps/error.hpp"

namespace rps {

AgentPopulation::AgentPopulation(std::vector<double> offsets, std::vector<std::int64_t> levels,
                                 const ModelParams& params, std::uint64_t seed)
    : offsets_(std::move(offsets)), levels_(std::move(levels)), params_(params), rng_(seed) {
  params_.validate();
  if (offsets_.size() != levels_.size()) throw ConfigError("offsets and levels differ in length");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!(offsets_[i] >= 0.0 && offsets_[i] < params_.h)) throw ConfigError("agent offset outside [0,h)");
    if (levels_[i] < 0) throw ConfigError("agent level must be >= 0");
    if (levels_[i] >= 1) ++rich_;
  }
}

double AgentPopulation::total_wealth() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += wealth(i);
  return s;
}

void AgentPopulation::play(std::size_t a, std::size_t b) {
  if (levels_[a] < 1 || levels_[b] < 1) return;
  const auto outcome = std::uniform_int_distribution<int>(0, 2)(rng_);
  if (outcome == 2) return;  // draw
  const std::size_t winner = outcome == 0 ? a : b;
  const std::size_t loser = outcome == 0 ? b : a;
  ++levels_[winner];
  if (--levels_[loser] == 0) --rich_;
}

void AgentPopulation::step() {
  const std::size_t N = size();
  if (N < 2) throw ConfigError("a population needs at least two agents");
  const double rate = params_.eta * static_cast<double>(N) / 2.0;
  t_ += std::exponential_distribution<double>(rate)(rng_);
  std::uniform_int_distribution<std::size_t> pick(0, N - 1);
  const std::size_t a = pick(rng_);
  std::size_t b = pick(rng_);
  while (b == a) b = pick(rng_);
  play(a, b);
}

void AgentPopulation::run_until(double t_end) {
  const std::size_t N = size();
  if (N < 2) throw ConfigError("a population needs at least two agents");
  const double rate = params_.eta * static_cast<double>(N) / 2.0;
  std::exponential_distribution<double> hold(rate);
  std::uniform_int_distribution<std::size_t> pick(0, N - 1);
  while (t_ < t_end) {
    if (rich_ < 2) {  // no playable pair left, the state is frozen
      t_ = t_end;
      break;
    }
    const double next = t_ + hold(rng_);
    if (next > t_end) {
      t_ = t_end;
      break;
    }
    t_ = next;
    const std::size_t a = pick(rng_);
    std::size_t b = pick(rng_);
    while (b == a) b = pick(rng_);
    play(a, b);
  }
}

AgentPopulation mc_step(AgentPopulation pop) {
  pop.step();
  return pop;
}

GridMeasure empirical_measure(const AgentPopulation& pop, const GridSpec& spec, std::size_t* clamped) {
  if (std::abs(spec.h - pop.params().h) > 1e-12 * spec.h) throw ConfigError("grid h differs from population h");
  GridMeasure mu(spec);
  const std::size_t N = pop.size();
  if (N == 0) return mu;
  const double w = 1.0 / static_cast<double>(N);
  const double cw = spec.cell_width();
  std::size_t over = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const int j = std::min(spec.m - 1, static_cast<int>(pop.offsets()[i] / cw));
    std::int64_t k = pop.levels()[i];
    if (k > spec.K) {
      k = spec.K;
      ++over;
    }
    mu(j, static_cast<int>(k)) += w;
  }
  if (clamped) *clamped = over;
  return mu;
}

AgentPopulation sample_population(const GridMeasure& init, std::size_t N, const ModelParams& params,
                                  std::uint64_t seed) {
  const auto w = init.masses();
  for (double v : w) {
    if (!(v >= 0.0)) throw ConfigError("Monte Carlo initial measure must be nonnegative");
  }
  if (!(total_mass(init) > 0.0)) throw ConfigError("Monte Carlo initial measure has zero mass");
  const GridSpec& g = init.spec();
  if (std::abs(g.h - params.h) > 1e-12 * g.h) throw ConfigError("grid h differs from model h");

  // Sampling uses its own stream so the game stream stays seed-determined.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::discrete_distribution<std::size_t> cell(w.begin(), w.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> offsets(N);
  std::vector<std::int64_t> levels(N);
  const double cw = g.cell_width();
  const std::size_t L = static_cast<std::size_t>(g.levels());
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t c = cell(rng);
    const int j = static_cast<int>(c / L);
    levels[i] = static_cast<std::int64_t>(c % L);
    offsets[i] = std::min((j + unit(rng)) * cw, std::nextafter(g.h, 0.0));
  }
  return AgentPopulation(std::move(offsets), std::move(levels), params, seed);
}

GridMeasure coarsen(const GridMeasure& mu, int m) {
  const GridSpec& g = mu.spec();
  if (m < 1 || g.m % m != 0) throw ConfigError("coarse cell count must divide grid.m");
  GridMeasure out(GridSpec{g.h, m, g.K});
  const int ratio = g.m / m;
  for (int j = 0; j < g.m; ++j) {
    const auto src = mu.column(j);
    auto dst = out.column(j / ratio);
    for (int k = 0; k <= g.K; ++k) dst[k] += src[k];
  }
  return out;
}

McReport mc_compare(const GridMeasure& init, const ModelParams& params, const McOptions& opts) {
  if (opts.N < 2) throw ConfigError("mc.n must be >= 2");
  if (opts.replicates < 1) throw ConfigError("mc.replicates must be >= 1");
  if (!(opts.t_end >= 0.0)) throw ConfigError("mc.t_end must be >= 0");

  GridMeasure start = init;
  start *= 1.0 / total_mass(init);
  const GridSpec cmp{init.spec().h, opts.compare_m, init.spec().K};
  const GridMeasure coarse = coarsen(start, opts.compare_m);

  // The equation acts on each offset column with the same rate, so solving
  // on the coarse grid is the exact fold of the fine solution.
  SolverConfig cfg;
  cfg.dt0 = opts.pde_dt0;
  cfg.t_end = opts.t_end;
  cfg.early_stop = false;
  cfg.snapshot_every = 1 << 30;
  McReport report(cmp);
  report.mean_field = solve_nonlinear(coarse, params, cfg, project_Ph(coarse)).final_state;

  const int R = opts.replicates;
  std::vector<GridMeasure> finals(static_cast<std::size_t>(R), GridMeasure(cmp));
  std::vector<std::size_t> over(static_cast<std::size_t>(R), 0);
  auto run = [&](int r) {
    AgentPopulation pop = sample_population(start, opts.N, params, opts.seed + static_cast<std::uint64_t>(r));
    pop.run_until(opts.t_end);
    finals[r] = empirical_measure(pop, cmp, &over[r]);
  };

  int threads = opts.threads > 0 ? opts.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, R);
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (int r = w; r < R; r += threads) run(r);
    });
  }
  for (auto& th : pool) th.join();

  for (int r = 0; r < R; ++r) {
    report.tv.push_back(norm_TV(finals[r] - report.mean_field));
    report.averaged += finals[r];
    report.clamped += over[r];
  }
  report.averaged *= 1.0 / R;
  report.mean_tv = std::accumulate(report.tv.begin(), report.tv.end(), 0.0) / R;
  if (R > 1) {
    double ss = 0.0;
    for (double v : report.tv) ss += (v - report.mean_tv) * (v - report.mean_tv);
    report.stderr_tv = std::sqrt(ss / (R - 1)) / std::sqrt(static_cast<double>(R));
  }
  report.tv_of_mean = norm_TV(report.averaged - report.mean_field);
  return report;
}

}  // namespace rps
