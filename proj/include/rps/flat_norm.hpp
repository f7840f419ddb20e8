#pragma once

#include "rps/measure.hpp"

namespace rps {

enum class FlatWeight { unit, V };

/// How the sup-part a and the Lipschitz part b of ||f||_BL are combined:
/// `sum` bounds a + b <= 1, `max` bounds max(a, b) <= 1.
enum class BLConvention { max, sum };

struct FlatNormOptions {
  FlatWeight weight = FlatWeight::V;
  BLConvention convention = BLConvention::max;
};

/// Dual bounded-Lipschitz norm of a finitely supported measure:
///
///   max sum_i f_i mu_i  over (f, a, b) with a, b >= 0,
///       |f_i| <= a W(y_i),  |f_{i+1} - f_i| <= b (y_{i+1} - y_i),
///
/// plus the convention constraint on (a, b). W is 1 or the weight V (which
/// needs the quantum h). In one dimension the adjacent Lipschitz constraints
/// imply all pairwise ones. Solved exactly by the simplex method.
double flat_norm(const AtomicMeasure& mu, double h, FlatNormOptions opts = {});
double flat_norm(const GridMeasure& mu, FlatNormOptions opts = {});

}  // namespace rps
