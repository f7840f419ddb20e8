#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rps/config.hpp"
#include "rps/error.hpp"
#include "rps/io.hpp"

using namespace rps;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
  const fs::path p = fs::temp_directory_path() / ("rps_test_" + std::string(name));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(
      "# comment\n"
      "model.eta = 6\n"
      "model.h = 0.25   # trailing comment\n"
      "grid.m = 8\n"
      "grid.K = 50\n"
      "init.kind = exponential\n"
      "init.alpha = 2\n"
      "solver.early_stop = false\n"
      "harris.variant = as_typed\n"
      "flatnorm.atoms = 0.1:1, 0.4:-1\n");
  CHECK(c.model.eta == 6.0);
  CHECK(c.grid.h == 0.25);
  CHECK(c.grid.m == 8);
  CHECK(c.init.kind == InitKind::exponential);
  CHECK(c.init.alpha == 2.0);
  CHECK_FALSE(c.solver.early_stop);
  CHECK(c.harris.inputs.sign_variant == SignVariant::as_typed);
  REQUIRE(c.flat_atoms.size() == 2);
  CHECK(c.flat_atoms[1].weight == -1.0);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("model.etaa = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model.eta = 3\nmodel.eta = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model.eta = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model.eta\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model.h = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("init.kind = gaussian\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("init.k0 = 500\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("mc.m = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("init.kind = atoms\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
  try {
    parse_config("\n\nbogus = 1\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("resolved entries include defaults and re-parse to the same config") {
  const ExperimentConfig c = parse_config("init.kind = atoms\ninit.atoms = 0.3:1, 1.2:0.5\n");
  const ConfigEntries e = resolved_entries(c);
  bool has_eta = false;
  std::string text;
  for (const auto& [k, v] : e) {
    if (k == "model.eta") has_eta = (v == "3");
    text += k + " = " + v + "\n";
  }
  CHECK(has_eta);
  const ExperimentConfig again = parse_config(text);
  CHECK(resolved_entries(again) == e);
}

TEST_CASE("initial measures from the config") {
  ExperimentConfig c = parse_config("grid.m = 4\ngrid.K = 10\ninit.kind = atoms\ninit.atoms = 1.1:2\n");
  const GridMeasure mu = build_initial(c);
  CHECK(mu(0, 2) == 2.0);
  c = parse_config("grid.m = 4\ngrid.K = 10\ninit.k0 = 3\n");
  CHECK(build_initial(c)(1, 3) == 0.25);
}

TEST_CASE("measure CSV round-trips bit for bit") {
  const fs::path dir = scratch_dir("roundtrip");
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N(0.0, 1.0);
  GridMeasure mu(GridSpec{0.5, 3, 7});
  for (auto& v : mu.masses()) v = N(rng) * 1e-7 + N(rng);
  const std::string path = (dir / "mu.csv").string();
  write_measure_csv(path, mu, {{"model.eta", "3"}});
  const GridMeasure back = read_measure_csv(path);
  CHECK(back == mu);
  CHECK(slurp(path).rfind("# model.eta = 3\n", 0) == 0);

  const InitFile f = read_init_csv(path);
  REQUIRE(f.measure.has_value());
  CHECK(*f.measure == mu);

  std::ofstream(dir / "dens.csv") << "# sampled\ny,f\n0,0\n1,2\n2,0\n";
  const InitFile d = read_init_csv((dir / "dens.csv").string());
  REQUIRE(d.density.has_value());
  CHECK((*d.density)(1.5) == doctest::Approx(1.0));

  std::ofstream(dir / "bad.csv") << "a,b,c\n1,2,3\n";
  CHECK_THROWS_AS(read_init_csv((dir / "bad.csv").string()), ConfigError);
  std::ofstream(dir / "nohdr.csv") << "j,k,y_mid,mass\n0,0,0.1,1\n";
  CHECK_THROWS_AS(read_measure_csv((dir / "nohdr.csv").string()), ConfigError);
}

TEST_CASE("report writers") {
  const fs::path dir = scratch_dir("reports");
  HarrisInputs in;
  std::vector<HarrisRow> rows{harris_row(in)};
  in.sign_variant = SignVariant::as_typed;
  rows.push_back(harris_row(in));
  write_harris_csv((dir / "h.csv").string(), rows, {});
  const std::string h = slurp(dir / "h.csv");
  CHECK(h.find("T,gamma_L,K,gamma_H,beta,gamma,C,lambda\n") == 0);
  CHECK(h.find(",,\n") != std::string::npos);  // no certificate: empty C and lambda

  write_loglog_svg((dir / "p.svg").string(), "t", "x", "y", {{"a", {1, 10, 100}, {1, 0.1, 0.01}, true}});
  const std::string svg = slurp(dir / "p.svg");
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("width=\"800\" height=\"600\"") != std::string::npos);

  ensure_directory((dir / "a" / "b").string());
  CHECK(fs::is_directory(dir / "a" / "b"));
  CHECK_THROWS_AS(write_measure_csv((dir / "missing" / "x.csv").string(), GridMeasure(GridSpec{}), {}), ConfigError);
}
