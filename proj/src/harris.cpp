#include "rps/harris.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <tuple>

#include "rps/error.hpp"

namespace rps {

namespace {

struct Deficits {
  double one_minus_gL;  // 1 - e^{-sigma T}
  double one_minus_gH;  // (1 - e^{-2T}) / 2
  double K;
};

Deficits deficits(double sigma, double T) {
  const double dL = -std::expm1(-sigma * T);
  return {dL, -0.5 * std::expm1(-2.0 * T), 2.0 * dL};
}

double sign_of(SignVariant v) { return v == SignVariant::consistent ? 1.0 : -1.0; }

// Positive root of a x^2 + b x + c with a > 0, c < 0.
double positive_root(double a, double b, double c) {
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  if (b >= 0.0) return 2.0 * c / (-b - disc);
  return (-b + disc) / (2.0 * a);
}

// Quadratic coefficients with gamma_H - gamma_L and gamma_H - 1 built from deficits.
double root_from_deficits(const Deficits& d, double A, SignVariant v) {
  if (!(d.K > 0.0)) throw std::domain_error("beta quadratic is degenerate: K must be > 0");
  const double c1 = (d.one_minus_gL - d.one_minus_gH) + sign_of(v) * d.K * (1.0 - 1.0 / A);
  return positive_root(d.K, c1, -d.one_minus_gH);
}

std::string format_gamma(double deficit) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "no certificate: gamma = 1 - (%.6g) >= 1", deficit);
  return buf;
}

}  // namespace

void HarrisInputs::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("harris.sigma must be > 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("harris T must be > 0");
  if (!(A_level > 2.0) || !std::isfinite(A_level)) throw ConfigError("harris A_level must be > 2 so that b/A < sigma");
  if (!(C_V > 0.0) || !std::isfinite(C_V)) throw ConfigError("harris C_V must be > 0");
  if (!std::isfinite(omega_V)) throw ConfigError("harris omega_V must be finite");
}

double beta_sigma2_closed_form() { return (std::sqrt(265.0) - 11.0) / 24.0; }

std::pair<double, double> lyapunov_constants(double sigma, double T) {
  const double e = std::exp(-sigma * T);
  return {e, -2.0 * std::expm1(-sigma * T)};
}

double coupling_constant(double T) { return 0.5 * (1.0 + std::exp(-2.0 * T)); }

double beta_root(double K_lyap, double gamma_H, double gamma_L, double A_level, SignVariant variant) {
  if (!(K_lyap > 0.0)) throw std::domain_error("beta quadratic is degenerate: K must be > 0");
  const double c1 = gamma_H - gamma_L + sign_of(variant) * K_lyap * (1.0 - 1.0 / A_level);
  const double c0 = gamma_H - 1.0;
  if (!(c0 < 0.0)) throw std::domain_error("beta quadratic has no positive root: gamma_H must be < 1");
  return positive_root(K_lyap, c1, c0);
}

double beta_quadratic(double beta, double K_lyap, double gamma_H, double gamma_L, double A_level,
                      SignVariant variant) {
  const double c1 = gamma_H - gamma_L + sign_of(variant) * K_lyap * (1.0 - 1.0 / A_level);
  return (K_lyap * beta + c1) * beta + (gamma_H - 1.0);
}

double gamma_deficit(double beta, double K_lyap, double one_minus_gamma_H, double one_minus_gamma_L,
                     double A_level) {
  const double high = one_minus_gamma_H - beta * K_lyap;
  const double low = beta / (1.0 + beta) * (one_minus_gamma_L - K_lyap / A_level);
  return std::min(high, low);
}

double gamma_rate(double beta, double K_lyap, double gamma_H, double gamma_L, double A_level) {
  const double g = std::max(gamma_H + beta * K_lyap, 1.0 - beta / (1.0 + beta) * (1.0 - gamma_L - K_lyap / A_level));
  if (!(g < 1.0)) throw NoCertificateError(format_gamma(1.0 - g));
  return g;
}

HarrisRow harris_row(const HarrisInputs& in) {
  in.validate();
  const Deficits d = deficits(in.sigma, in.T);
  HarrisRow row;
  row.T = in.T;
  row.gamma_L = std::exp(-in.sigma * in.T);
  row.K_lyap = d.K;
  row.gamma_H = coupling_constant(in.T);
  row.beta = root_from_deficits(d, in.A_level, in.sign_variant);
  const double def = gamma_deficit(row.beta, d.K, d.one_minus_gH, d.one_minus_gL, in.A_level);
  row.gamma = 1.0 - def;
  if (def > 0.0) {
    row.C = in.C_V * std::exp(in.omega_V * in.T) * (1.0 + row.beta) / (row.gamma * row.beta);
    row.lambda = -std::log1p(-def) / in.T;
  }
  return row;
}

std::pair<double, double> constants_at(double T, const HarrisInputs& inputs) {
  HarrisInputs in = inputs;
  in.T = T;
  const HarrisRow row = harris_row(in);
  if (!row.C) throw NoCertificateError(format_gamma(1.0 - row.gamma));
  return {*row.C, *row.lambda};
}

std::pair<double, double> limiting_constants(const HarrisInputs& in) {
  in.validate();
  // Leading order in T: gamma_L ~ 1 - sigma T, K ~ 2 sigma T, gamma_H ~ 1 - T.
  const double s = in.sigma;
  const double c1 = (s - 1.0) + sign_of(in.sign_variant) * 2.0 * s * (1.0 - 1.0 / in.A_level);
  const double beta = positive_root(2.0 * s, c1, -1.0);
  const double C = in.C_V * (1.0 + beta) / beta;
  const double lambda = beta / (1.0 + beta) * s * (1.0 - 2.0 / in.A_level);
  return {C, lambda};
}

HarrisConstants compute_constants(const HarrisInputs& in) {
  const HarrisRow row = harris_row(in);
  if (!row.C) throw NoCertificateError(format_gamma(1.0 - row.gamma));
  HarrisConstants c;
  c.gamma_L = row.gamma_L;
  c.K_lyap = row.K_lyap;
  c.gamma_H = row.gamma_H;
  c.beta = row.beta;
  c.gamma = row.gamma;
  c.C_of_T = *row.C;
  c.lambda_of_T = *row.lambda;
  std::tie(c.C_limit, c.lambda_limit) = limiting_constants(in);
  return c;
}

double alpha_of_x(double x, double h) {
  if (!(h > 0.0)) throw std::domain_error("alpha_of_x: h must be > 0");
  if (!(x >= 0.0 && x < h)) throw std::domain_error("alpha_of_x: x must lie in [0,h)");
  const double a = 2.0 * std::log(2.0) / (2.0 * x + h);
  const double eax = std::exp(a * x);
  const double eah = std::exp(-a * h);
  const double tol = 1e-12;
  if (!(2.0 + tol >= eax)) throw std::logic_error("alpha_of_x: 2 >= e^{alpha x} fails");
  if (!(1.0 + eah + tol >= eax)) throw std::logic_error("alpha_of_x: 1 + e^{-alpha h} >= e^{alpha x} fails");
  if (!(2.0 * eah < eax)) throw std::logic_error("alpha_of_x: 2 e^{-alpha h} < e^{alpha x} fails");
  return a;
}

}  // namespace rps
