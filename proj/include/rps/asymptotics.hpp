#pragma once

#include "rps/flat_norm.hpp"
#include "rps/measure.hpp"

namespace rps {

/// Fold onto [0,h): result(j,0) = sum_k mu(j,k), higher levels zero.
GridMeasure project_Ph(const GridMeasure& mu);

/// Total mass as a single atom at 0.
AtomicMeasure project_P0(const GridMeasure& mu);

/// Right-hand side of the subgeometric decay bound.
struct HarrisEnvelope {
  double C = 1.0;
  double lambda = 1.0;
  double eta = 3.0;
  double B0 = 0.0;  // initial mass above h
  double d0 = 0.0;  // initial distance to the limit

  void validate() const;
};

/// C d0 / (1 + eta B0 t / 3)^lambda
double decay_envelope(double t, const HarrisEnvelope& env);

/// h * sum_{j,k} k w[j,k]: wealth that leaves with players absorbed into [0,h).
double wealth_loss(const GridMeasure& mu);

struct PhP0Distance {
  double distance = 0.0;   // flat norm of mu P_h - mu P_0
  double mu_norm = 0.0;    // flat norm of mu
  double ratio = 0.0;      // distance / mu_norm (0 when mu_norm == 0)
  bool within_bound = true;  // ratio <= h + 1e-9
};

/// The ratio needs the flat norm of mu itself, an LP over every nonzero
/// cell; pass with_ratio = false on large grids to skip it.
PhP0Distance ph_p0_distance(const GridMeasure& mu, FlatNormOptions opts = {}, bool with_ratio = true);

}  // namespace rps
