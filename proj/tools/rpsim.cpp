// rpsim: command-line driver for the exchange-equation library.
//
//   rpsim simulate --config run.cfg [--svg] [--out DIR]
//   rpsim limit    --config run.cfg
//   rpsim harris   --config run.cfg
//   rpsim mc       --config run.cfg [--seed S] [--n N] [--replicates R]
//   rpsim flatnorm --config run.cfg
//
// Exit status: 0 success, 1 configuration or I/O error, 2 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "rps/asymptotics.hpp"
#include "rps/config.hpp"
#include "rps/error.hpp"
#include "rps/flat_norm.hpp"
#include "rps/harris.hpp"
#include "rps/io.hpp"
#include "rps/montecarlo.hpp"

namespace {

struct Options {
  std::string config;
  bool svg = false;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<int> replicates;
};

rps::ExperimentConfig load(const Options& o) {
  rps::ExperimentConfig cfg = rps::load_config(o.config);
  if (o.out) cfg.output_dir = *o.out;
  if (o.seed) cfg.mc.seed = *o.seed;
  if (o.n) cfg.mc.n = *o.n;
  if (o.replicates) cfg.mc.replicates = *o.replicates;
  cfg.validate();
  rps::ensure_directory(cfg.output_dir);
  return cfg;
}

std::string join(const std::string& dir, const char* name) { return dir + "/" + name; }

rps::HarrisEnvelope envelope_for(const rps::ExperimentConfig& cfg, const rps::GridMeasure& mu0,
                                 const rps::GridMeasure& limit) {
  const auto [C, lambda] = rps::limiting_constants(
      [&] {
        rps::HarrisInputs in = cfg.harris.inputs;
        in.T = cfg.harris.t_min;
        return in;
      }());
  rps::HarrisEnvelope env;
  env.C = C;
  env.lambda = lambda;
  env.eta = cfg.model.eta;
  env.B0 = rps::mass_above_h(mu0);
  env.d0 = rps::norm_V(mu0 - limit);
  env.validate();
  return env;
}

int cmd_simulate(const Options& o) {
  const rps::ExperimentConfig cfg = load(o);
  const auto header = rps::resolved_entries(cfg);
  const rps::GridMeasure mu0 = rps::build_initial(cfg);
  const rps::GridMeasure limit = rps::project_Ph(mu0);
  const rps::HarrisEnvelope env = envelope_for(cfg, mu0, limit);

  const rps::Trajectory traj = rps::solve_nonlinear(mu0, cfg.model, cfg.solver, limit);
  for (const auto& w : traj.warnings) std::cerr << "warning: " << w << '\n';

  const std::string path = join(cfg.output_dir, "trajectory.csv");
  rps::write_trajectory_csv(path, traj, env, header);
  rps::write_rate_csv(join(cfg.output_dir, "rate.csv"), traj, header);
  rps::write_measure_csv(join(cfg.output_dir, "final.csv"), traj.final_state, header);

  std::size_t violations = 0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.diagnostics[i].v_dist > rps::decay_envelope(traj.times[i], env)) ++violations;
  }
  std::printf("steps %zu, snapshots %zu, t_final %.6g, stopped_early %s\n", traj.steps, traj.times.size(),
              traj.times.back(), traj.stopped_early ? "yes" : "no");
  std::printf("B0 %.6g, d0 %.6g, C %.6g, lambda %.6g, envelope violations %zu\n", env.B0, env.d0, env.C, env.lambda,
              violations);
  std::printf("wrote %s\n", path.c_str());

  if (o.svg) {
    rps::PlotSeries measured{"||mu_t - mu P_h||_V", {}, {}, true};
    rps::PlotSeries bound{"envelope", {}, {}, false};
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      measured.x.push_back(traj.times[i]);
      measured.y.push_back(traj.diagnostics[i].v_dist);
      bound.x.push_back(traj.times[i]);
      bound.y.push_back(rps::decay_envelope(traj.times[i], env));
    }
    const std::string svg = join(cfg.output_dir, "trajectory.svg");
    rps::write_loglog_svg(svg, "decay to the limit", "t", "distance", {measured, bound});
    std::printf("wrote %s\n", svg.c_str());
  }
  return 0;
}

int cmd_limit(const Options& o) {
  const rps::ExperimentConfig cfg = load(o);
  auto header = rps::resolved_entries(cfg);
  const rps::GridMeasure mu0 = rps::build_initial(cfg);
  const rps::GridMeasure limit = rps::project_Ph(mu0);
  const double loss = rps::wealth_loss(mu0);
  header.emplace_back("wealth_loss", rps::format_number(loss));
  const std::string path = join(cfg.output_dir, "limit.csv");
  rps::write_measure_csv(path, limit, header);
  std::printf("total mass %.17g\nwealth_loss %.17g\nwrote %s\n", rps::total_mass(limit), loss, path.c_str());

  if (cfg.init.kind == rps::InitKind::exponential) {
    const double a = cfg.init.alpha;
    const double h = cfg.model.h;
    const double w = cfg.grid.cell_width();
    const std::string cf = join(cfg.output_dir, "limit_closed_form.csv");
    std::FILE* f = std::fopen(cf.c_str(), "w");
    if (!f) throw rps::ConfigError("cannot write '" + cf + "'");
    for (const auto& [k, v] : header) std::fprintf(f, "# %s = %s\n", k.c_str(), v.c_str());
    std::fprintf(f, "j,y_mid,grid_mass,closed_form\n");
    double worst = 0.0;
    for (int j = 0; j < cfg.grid.m; ++j) {
      const double exact = (std::exp(-a * j * w) - std::exp(-a * (j + 1) * w)) / -std::expm1(-a * h);
      worst = std::max(worst, std::abs(limit(j, 0) - exact));
      std::fprintf(f, "%d,%.17g,%.17g,%.17g\n", j, cfg.grid.offset_mid(j), limit(j, 0), exact);
    }
    std::fclose(f);
    // mass of [h, inf) under alpha e^{-alpha y} is e^{-alpha h}
    std::printf("max cell error vs closed form %.3e\n", worst);
    std::printf("B0 measured %.12g, integral e^{-alpha h} %.12g, alternative 1 - e^{-alpha h} %.12g\n",
                rps::mass_above_h(mu0), std::exp(-a * h), -std::expm1(-a * h));
    std::printf("wrote %s\n", cf.c_str());
  }
  return 0;
}

int cmd_harris(const Options& o) {
  const rps::ExperimentConfig cfg = load(o);
  const auto header = rps::resolved_entries(cfg);
  const auto& tab = cfg.harris;
  for (rps::SignVariant v : {rps::SignVariant::consistent, rps::SignVariant::as_typed}) {
    const char* name = v == rps::SignVariant::consistent ? "consistent" : "as_typed";
    rps::HarrisInputs in = tab.inputs;
    in.sign_variant = v;
    std::vector<rps::HarrisRow> rows;
    for (int i = 0; i < tab.t_points; ++i) {
      const double s = tab.t_points == 1 ? 0.0 : static_cast<double>(i) / (tab.t_points - 1);
      in.T = tab.t_min * std::pow(tab.t_max / tab.t_min, s);
      rows.push_back(rps::harris_row(in));
    }
    in.T = tab.t_min;
    const auto [C, lambda] = rps::limiting_constants(in);
    std::printf("%s: limiting C = %.10g, lambda = %.10g\n", name, C, lambda);
    std::printf("%12s %12s %12s %12s %12s %12s %12s %12s\n", "T", "gamma_L", "K", "gamma_H", "beta", "gamma", "C",
                "lambda");
    for (const auto& r : rows) {
      std::printf("%12.6g %12.6g %12.6g %12.6g %12.6g %12.6g ", r.T, r.gamma_L, r.K_lyap, r.gamma_H, r.beta, r.gamma);
      if (r.C) {
        std::printf("%12.6g %12.6g\n", *r.C, *r.lambda);
      } else {
        std::printf("%12s %12s\n", "-", "-");
      }
    }
    auto h = header;
    h.emplace_back("variant", name);
    h.emplace_back("C_limit", rps::format_number(C));
    h.emplace_back("lambda_limit", rps::format_number(lambda));
    const std::string path = cfg.output_dir + "/harris_" + name + ".csv";
    rps::write_harris_csv(path, rows, h);
    std::printf("wrote %s\n\n", path.c_str());
  }
  return 0;
}

int cmd_mc(const Options& o) {
  const rps::ExperimentConfig cfg = load(o);
  const auto header = rps::resolved_entries(cfg);
  const rps::GridMeasure mu0 = rps::build_initial(cfg);
  rps::McOptions mo;
  mo.N = cfg.mc.n;
  mo.replicates = cfg.mc.replicates;
  mo.seed = cfg.mc.seed;
  mo.t_end = cfg.mc.t_end;
  mo.compare_m = cfg.mc.m;
  mo.pde_dt0 = cfg.mc.pde_dt0;
  const rps::McReport rep = rps::mc_compare(mu0, cfg.model, mo);
  if (rep.clamped > 0) std::cerr << "warning: " << rep.clamped << " agents above level K were clamped\n";
  const std::string path = join(cfg.output_dir, "mc_report.csv");
  rps::write_mc_csv(path, rep, mo.t_end, header);
  std::printf("N %zu, replicates %d, mean TV %.6g, stderr %.3g, TV of average %.6g\nwrote %s\n", mo.N, mo.replicates,
              rep.mean_tv, rep.stderr_tv, rep.tv_of_mean, path.c_str());
  return 0;
}

int cmd_flatnorm(const Options& o) {
  const rps::ExperimentConfig cfg = load(o);
  const std::string path = join(cfg.output_dir, "flatnorm.csv");
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw rps::ConfigError("cannot write '" + path + "'");
  for (const auto& [k, v] : rps::resolved_entries(cfg)) std::fprintf(f, "# %s = %s\n", k.c_str(), v.c_str());
  std::fprintf(f, "quantity,value\n");
  auto emit = [&](const char* name, double v) {
    std::printf("%-22s %.12g\n", name, v);
    std::fprintf(f, "%s,%.17g\n", name, v);
  };
  if (!cfg.flat_atoms.empty()) {
    emit("flat_norm", rps::flat_norm(rps::AtomicMeasure(cfg.flat_atoms), cfg.model.h, cfg.flat));
  } else {
    const rps::GridMeasure mu0 = rps::build_initial(cfg);
    const rps::PhP0Distance d = rps::ph_p0_distance(mu0, cfg.flat);
    emit("flat_norm_init", d.mu_norm);
    emit("flat_dist_Ph_P0", d.distance);
    emit("ratio", d.ratio);
    emit("h", cfg.model.h);
  }
  std::fclose(f);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rock-paper-scissors wealth exchange: solver, limits, constants, Monte Carlo"};
  app.require_subcommand(1);
  Options opts;

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config, "configuration file")->required();
    sub->add_option("--out", opts.out, "output directory (overrides output.dir)");
    return sub;
  };
  CLI::App* sim = add("simulate", "solve the nonlinear equation and write the trajectory");
  sim->add_flag("--svg", opts.svg, "also write a log-log SVG plot");
  add("limit", "write the asymptotic limit of the initial measure");
  add("harris", "tabulate the decay constants for both sign variants");
  CLI::App* mc = add("mc", "compare the agent simulation with the mean-field solution");
  mc->add_option("--seed", opts.seed, "base RNG seed");
  mc->add_option("--n", opts.n, "number of agents");
  mc->add_option("--replicates", opts.replicates, "number of replicates");
  add("flatnorm", "flat norm of flatnorm.atoms, or the limit distance of the initial measure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const std::string which = app.get_subcommands().front()->get_name();
    if (which == "simulate") return cmd_simulate(opts);
    if (which == "limit") return cmd_limit(opts);
    if (which == "harris") return cmd_harris(opts);
    if (which == "mc") return cmd_mc(opts);
    return cmd_flatnorm(opts);
  } catch (const rps::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const rps::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const rps::NoCertificateError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
