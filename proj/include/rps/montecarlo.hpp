#pragma once

// Agent-based version of the exchange game.
//
// N agents, pair encounters at total rate eta N / 2 with the pair drawn
// uniformly. When both agents hold at least h the encounter is a win, a loss
// or a draw with probability 1/3 each; otherwise nothing happens. Each rich
// agent then gains and loses h at rate (eta/3) times the rich fraction of
// the others, the same coefficient as the mean-field equation.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "rps/dynamics.hpp"
#include "rps/measure.hpp"

namespace rps {

class AgentPopulation {
 public:
  /// Wealth of agent i is offsets[i] + levels[i] * h.
  AgentPopulation(std::vector<double> offsets, std::vector<std::int64_t> levels, const ModelParams& params,
                  std::uint64_t seed);

  std::size_t size() const noexcept { return levels_.size(); }
  double time() const noexcept { return t_; }
  const ModelParams& params() const noexcept { return params_; }
  const std::vector<double>& offsets() const noexcept { return offsets_; }
  const std::vector<std::int64_t>& levels() const noexcept { return levels_; }
  double wealth(std::size_t i) const noexcept { return offsets_[i] + static_cast<double>(levels_[i]) * params_.h; }
  double total_wealth() const;
  /// Agents holding at least h.
  std::size_t rich_count() const noexcept { return rich_; }

  /// One encounter: exponential holding time, then the game.
  void step();
  /// Advance to exactly t_end. The event after t_end is discarded, which is
  /// harmless because holding times are memoryless.
  void run_until(double t_end);

 private:
  void play(std::size_t a, std::size_t b);

  std::vector<double> offsets_;
  std::vector<std::int64_t> levels_;
  ModelParams params_;
  std::mt19937_64 rng_;
  double t_ = 0.0;
  std::size_t rich_ = 0;
};

/// Functional form of AgentPopulation::step.
AgentPopulation mc_step(AgentPopulation pop);

/// Mass 1/N per agent in its cell. Agents above level K are put on level K
/// and counted in `clamped` when given.
GridMeasure empirical_measure(const AgentPopulation& pop, const GridSpec& spec, std::size_t* clamped = nullptr);

/// N i.i.d. agents from a nonnegative grid measure: a cell is drawn with
/// probability proportional to its mass, the offset uniformly inside it.
AgentPopulation sample_population(const GridMeasure& init, std::size_t N, const ModelParams& params,
                                  std::uint64_t seed);

struct McOptions {
  std::size_t N = 10000;
  double t_end = 1.0;
  int replicates = 16;
  std::uint64_t seed = 1;
  int compare_m = 1;      // offset cells of the comparison grid
  double pde_dt0 = 1e-5;  // dt0 of the reference solve (cap 100 dt0)
  int threads = 0;        // 0: hardware concurrency
};

struct McReport {
  std::vector<double> tv;   // per replicate, against the mean-field solution
  double mean_tv = 0.0;
  double stderr_tv = 0.0;   // sample std / sqrt(replicates)
  double tv_of_mean = 0.0;  // TV between the replicate average and the mean field
  std::size_t clamped = 0;  // agents above level K, summed over replicates
  GridMeasure mean_field;
  GridMeasure averaged;

  explicit McReport(const GridSpec& spec) : mean_field(spec), averaged(spec) {}
};

/// Replicate r uses seed + r. Replicates run on separate threads.
McReport mc_compare(const GridMeasure& init, const ModelParams& params, const McOptions& opts);

/// Fold a grid measure onto a grid with fewer offset cells (m must divide).
GridMeasure coarsen(const GridMeasure& mu, int m);

}  // namespace rps
