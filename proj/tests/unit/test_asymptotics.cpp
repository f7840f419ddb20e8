#include <doctest.h>

#include <cmath>
#include <random>

#include "rps/asymptotics.hpp"
#include "rps/error.hpp"

using namespace rps;

TEST_CASE("P_h folds every class onto level 0") {
  const GridSpec g{0.5, 3, 4};
  GridMeasure mu(g);
  mu(0, 0) = 1.0;
  mu(0, 3) = 2.0;
  mu(2, 1) = -0.5;
  const GridMeasure p = project_Ph(mu);
  CHECK(p(0, 0) == 3.0);
  CHECK(p(2, 0) == -0.5);
  CHECK(mass_above_h(p) == 0.0);
  CHECK(project_Ph(p) == p);
  CHECK(total_mass(project_P0(mu)) == doctest::Approx(total_mass(mu)));
}

TEST_CASE("fold of a single atom and its wealth loss") {
  const GridSpec g{0.5, 10, 5};
  const GridMeasure mu = bin_atoms(AtomicMeasure({{0.12 + 2 * 0.5, 1.0}}), g);
  const GridMeasure p = project_Ph(mu);
  CHECK(p(2, 0) == 1.0);
  CHECK(wealth_loss(mu) == doctest::Approx(2 * 0.5));
}

TEST_CASE("square k0 = 3 folds to the uniform measure on [0,h)") {
  const GridSpec g{0.5, 16, 6};
  const GridMeasure p = project_Ph(ingest_density(SquareDensity{3}, g));
  for (int j = 0; j < g.m; ++j) CHECK(p(j, 0) == doctest::Approx(1.0 / 16));
}

TEST_CASE("P_h of an exponential is the truncated exponential on [0,h)") {
  const double alpha = 1.0, h = 0.5;
  const GridSpec g{h, 16, 80};
  const GridMeasure p = project_Ph(ingest_density(ExponentialDensity{alpha}, g, QuadratureRule::simpson));
  const double w = g.cell_width();
  for (int j = 0; j < g.m; ++j) {
    const double exact = (std::exp(-alpha * j * w) - std::exp(-alpha * (j + 1) * w)) / -std::expm1(-alpha * h);
    CHECK(p(j, 0) == doctest::Approx(exact).epsilon(1e-8));
  }
}

TEST_CASE("property: wealth identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const GridSpec g{0.5, 7, 25};
  for (int rep = 0; rep < 50; ++rep) {
    GridMeasure mu(g);
    for (auto& v : mu.masses()) v = U(rng);
    const double residual = first_moment(mu) - first_moment(project_Ph(mu)) - wealth_loss(mu);
    CHECK(std::abs(residual) <= 1e-12 * std::max(1.0, norm_TV(mu) * g.upper()));
  }
}

TEST_CASE("decay envelope") {
  HarrisEnvelope env;
  env.C = 2.0;
  env.lambda = 0.5;
  env.B0 = 1.0;
  env.d0 = 3.0;
  CHECK(decay_envelope(0.0, env) == doctest::Approx(6.0));
  CHECK(decay_envelope(1.0, env) == doctest::Approx(6.0 / std::sqrt(2.0)));
  env.C = 0.5;
  CHECK_THROWS_AS(env.validate(), ConfigError);
}

TEST_CASE("flat distance between P_h and P_0") {
  SUBCASE("uniform density on [0,h) gives h^2/2") {
    for (double h : {0.5, 0.25}) {
      const GridSpec g{h, 16, 1};
      GridMeasure mu(g);
      for (int j = 0; j < g.m; ++j) mu(j, 0) = g.cell_width();  // density 1, mass h
      const PhP0Distance d = ph_p0_distance(mu);
      CHECK(d.distance == doctest::Approx(h * h / 2).epsilon(1e-12));
      CHECK(d.within_bound);
    }
  }
  SUBCASE("nonnegative measures satisfy the ratio bound") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const GridSpec g{0.5, 3, 3};
    for (int rep = 0; rep < 20; ++rep) {
      GridMeasure mu(g);
      for (auto& v : mu.masses()) v = U(rng) < 0.5 ? U(rng) : 0.0;
      mu(0, 0) += 1e-3;
      CHECK(ph_p0_distance(mu).ratio <= g.h + 1e-9);
    }
  }
  SUBCASE("signed measures can violate it") {
    const GridSpec g{0.5, 50, 2};
    GridMeasure mu(g);
    mu(49, 0) = 1.0;  // just below h
    mu(0, 1) = -1.0;  // just above h
    const PhP0Distance d = ph_p0_distance(mu, {FlatWeight::unit, BLConvention::max});
    CHECK(d.mu_norm == doctest::Approx(g.cell_width()));
    CHECK(d.ratio > g.h);
    CHECK_FALSE(d.within_bound);
  }
}
