#pragma once

// CSV and SVG output. Numbers are written with 17 significant digits so a
// measure read back is bit-identical. Every file starts with `# key = value`
// comment lines holding the resolved configuration.

#include <optional>
#include <string>
#include <vector>

#include "rps/asymptotics.hpp"
#include "rps/config.hpp"
#include "rps/dual.hpp"
#include "rps/dynamics.hpp"
#include "rps/harris.hpp"
#include "rps/measure.hpp"
#include "rps/montecarlo.hpp"

namespace rps {

/// Creates the directory (and parents). Throws ConfigError if that fails or
/// the path is not a writable directory.
void ensure_directory(const std::string& dir);

/// Columns j,k,y_mid,mass. grid.h, grid.m and grid.K are added to the header.
void write_measure_csv(const std::string& path, const GridMeasure& mu, const ConfigEntries& header);
GridMeasure read_measure_csv(const std::string& path);

/// Either a grid measure (j,k,y_mid,mass) or density samples (y,f).
struct InitFile {
  std::optional<GridMeasure> measure;
  std::optional<SampledDensity> density;
};
InitFile read_init_csv(const std::string& path);

/// Columns t,B,theta,tv_dist,v_dist,envelope.
void write_trajectory_csv(const std::string& path, const Trajectory& traj, const HarrisEnvelope& env,
                          const ConfigEntries& header);

/// Columns k,f_k.
void write_dual_csv(const std::string& path, const ClassFunction& f, const ConfigEntries& header);
/// Columns t,B: the rate table recorded by the nonlinear solver.
void write_rate_csv(const std::string& path, const Trajectory& traj, const ConfigEntries& header);

/// Columns T,gamma_L,K,gamma_H,beta,gamma,C,lambda; C and lambda are empty
/// when no certificate exists.
void write_harris_csv(const std::string& path, const std::vector<HarrisRow>& rows, const ConfigEntries& header);

/// Columns replicate,t_end,tv_distance, then rows `mean` and `stderr`.
void write_mc_csv(const std::string& path, const McReport& report, double t_end, const ConfigEntries& header);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // markers, else a polyline
};

/// Self-contained 800x600 log-log plot. Points with nonpositive coordinates
/// are skipped.
void write_loglog_svg(const std::string& path, const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<PlotSeries>& series);

}  // namespace rps
