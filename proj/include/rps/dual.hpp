#pragma once

// Dual (test-function) side of the exchange equation, one wealth class at a time.
//
// On a class {x + kh} the dual generator is the gated second difference
//   (A f)_0 = 0,  (A f)_k = f_{k+1} + f_{k-1} - 2 f_k,  (A f)_K = f_{K-1} - f_K,
// the exact transpose of the forward stencil in dynamics.hpp, so forward and
// dual solutions pair without a boundary mismatch.

#include <cstddef>
#include <vector>

#include "rps/dynamics.hpp"
#include "rps/measure.hpp"

namespace rps {

struct ClassFunction {
  double offset = 0.0;         // x in [0,h)
  std::vector<double> values;  // f(x + k h), k = 0..K

  double sup_norm() const;
  /// max_k |f_k| / V(x + k h)
  double v_norm(double h) const;
};

/// Continuous nonnegative rate b(t): a constant or a piecewise-linear table
/// (held constant past either end).
class RateFunction {
 public:
  static RateFunction constant(double value);
  static RateFunction table(std::vector<double> times, std::vector<double> values);

  double operator()(double t) const;
  /// Exact integral of the interpolant over [s, t].
  double integral(double s, double t) const;
  double sup() const;

 private:
  double primitive(double t) const;

  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

ClassFunction apply_A(const ClassFunction& f);

/// Explicit Euler for f' = (eta/3) b(sigma) A f from sigma = s to t, last step
/// shortened to land on t. Throws ConfigError when a step would break
/// positivity, i.e. 2 (eta/3) b dt > 1.
ClassFunction evolve_dual_ode(const ClassFunction& f0, const RateFunction& b, double s, double t,
                              const ModelParams& params, double dt);

struct PicardResult {
  ClassFunction f;                   // iterate at the window end
  std::vector<double> sweep_change;  // sup distance between successive iterates
  double contraction_bound = 0.0;    // (2 eta/3) sup b * window
};

/// Fixed-point iteration of the mild dual operator on [0, window]. Time
/// integrals use the trapezoid rule on `nodes` uniform nodes. Throws
/// ConfigError unless window < 3 / (2 eta sup b) and iters >= 1.
PicardResult picard_gamma(const ClassFunction& f0, const RateFunction& b, double window, const ModelParams& params,
                          int iters, int nodes = 64);

/// |<mu_t, f> - <mu_0, M_{0,t} f>| with mu_t from solve_nonlinear (step dt)
/// and M_{0,t} f from evolve_dual_ode driven by the recorded (t, B) table.
/// `f0` holds one class function per offset cell of mu0's grid.
double duality_gap(const GridMeasure& mu0, const std::vector<ClassFunction>& f0, double t, const ModelParams& params,
                   double dt);

/// 1 + exp(-2 t): bound on ||(delta_x - delta_{x+h}) N_t||_TV.
double coupling_bound(double t);
/// TV norm of e_0 - e_1 evolved by the unit-rate linear equation to time t.
double measured_coupling(double x, double h, double t, double dt, int K = 200);

/// max_k [N_t V - exp(-sigma t) V - 2 (1 - exp(-sigma t))]_k on the class of
/// offset x, where N_t is the unit-rate dual semigroup. Nonpositive when the
/// Lyapunov inequality holds.
double lyapunov_residual(double x, double h, double t, double dt, double sigma = 2.0, int K = 200);

}  // namespace rps
