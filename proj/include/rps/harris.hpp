#pragma once

// Explicit constants of the subgeometric decay bound, obtained by applying a
// Harris theorem to the rescaled semigroup N_T at a time T.
//
// Inputs are a Lyapunov rate sigma (with b = 2 sigma), the coupling level
// A = 3, and the growth bound C_V e^{omega_V t} = 1. From them:
//
//   gamma_L = e^{-sigma T},  K = 2 (1 - e^{-sigma T}),  gamma_H = (1 + e^{-2T}) / 2,
//   beta    = positive root of K b^2 + (gamma_H - gamma_L -+ K (1 - 1/A)) b + gamma_H - 1,
//   gamma   = max{gamma_H + beta K, 1 - beta/(1+beta) (1 - gamma_L - K/A)},
//   C(T)    = C_V e^{omega_V T} (1 + beta) / (gamma beta),  lambda(T) = -log(gamma) / T.
//
// The sign in front of K (1 - 1/A) is selectable. With `consistent`
// (+) the root is exactly the beta that makes both branches of gamma equal;
// with `as_typed` (-) gamma exceeds one for sigma = 2 and no certificate exists.

#include <optional>
#include <utility>

namespace rps {

enum class SignVariant { as_typed, consistent };

struct HarrisInputs {
  double sigma = 2.0;
  double T = 1.0;
  double A_level = 3.0;
  double C_V = 1.0;
  double omega_V = 0.0;
  SignVariant sign_variant = SignVariant::consistent;

  void validate() const;
};

struct HarrisConstants {
  double gamma_L = 0.0;
  double K_lyap = 0.0;
  double gamma_H = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double C_of_T = 0.0;
  double lambda_of_T = 0.0;
  double C_limit = 0.0;
  double lambda_limit = 0.0;
};

/// beta = (sqrt(265) - 11) / 24, the sigma = 2 root with the consistent sign.
double beta_sigma2_closed_form();

/// (gamma_L, K) = (e^{-sigma T}, 2 (1 - e^{-sigma T}))
std::pair<double, double> lyapunov_constants(double sigma, double T);

/// (1 + e^{-2T}) / 2
double coupling_constant(double T);

/// Positive root of the beta quadratic. Throws std::domain_error when K <= 0.
double beta_root(double K_lyap, double gamma_H, double gamma_L, double A_level, SignVariant variant);

/// Value of the beta quadratic at `beta`.
double beta_quadratic(double beta, double K_lyap, double gamma_H, double gamma_L, double A_level,
                      SignVariant variant);

/// 1 - gamma computed without cancellation from the deficits 1 - gamma_H and
/// 1 - gamma_L; positive exactly when a certificate exists.
double gamma_deficit(double beta, double K_lyap, double one_minus_gamma_H, double one_minus_gamma_L,
                     double A_level);

/// The max formula for gamma. Throws NoCertificateError when gamma >= 1.
double gamma_rate(double beta, double K_lyap, double gamma_H, double gamma_L, double A_level);

/// (C(T), lambda(T)) at inputs.T. Throws NoCertificateError when gamma >= 1.
std::pair<double, double> constants_at(double T, const HarrisInputs& inputs);

/// T -> 0 limits of (C(T), lambda(T)). For sigma = 2, A = 3, C_V = 1 these are
/// C = (1 + beta)/beta and lambda = 2 beta / (3 (1 + beta)).
std::pair<double, double> limiting_constants(const HarrisInputs& inputs);

/// One row of the constants table. C and lambda are empty without a certificate.
struct HarrisRow {
  double T = 0.0;
  double gamma_L = 0.0;
  double K_lyap = 0.0;
  double gamma_H = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::optional<double> C;
  std::optional<double> lambda;
};

HarrisRow harris_row(const HarrisInputs& inputs);

/// Everything at inputs.T. Throws NoCertificateError when gamma >= 1.
HarrisConstants compute_constants(const HarrisInputs& inputs);

/// alpha(x) = 2 ln2 / (2x + h). Throws std::domain_error outside [0,h) and
/// std::logic_error if one of the level-set conditions fails.
double alpha_of_x(double x, double h);

}  // namespace rps
