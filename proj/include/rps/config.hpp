#pragma once

// Experiment configuration: a flat text file of `key = value` lines with
// dotted section prefixes. '#' starts a comment. Unknown keys are errors.
//
//   model.eta = 3
//   model.h = 0.5
//   grid.m = 32
//   init.kind = square
//   init.k0 = 1

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rps/dynamics.hpp"
#include "rps/flat_norm.hpp"
#include "rps/harris.hpp"
#include "rps/measure.hpp"

namespace rps {

enum class InitKind { square, exponential, atoms, csv };

struct InitSpec {
  InitKind kind = InitKind::square;
  int k0 = 1;
  double alpha = 1.0;
  std::vector<Atom> atoms;  // "x:w, x:w, ..."
  std::string path;         // measure CSV (j,k,y_mid,mass) or density samples (y,f)
  QuadratureRule rule = QuadratureRule::midpoint;
};

struct HarrisTable {
  HarrisInputs inputs;  // T is ignored; the table scans [t_min, t_max]
  double t_min = 0.01;
  double t_max = 10.0;
  int t_points = 25;    // log-spaced
};

struct McSettings {
  std::size_t n = 10000;
  int replicates = 16;
  std::uint64_t seed = 1;
  double t_end = 1.0;
  int m = 1;             // offset cells of the comparison grid
  double pde_dt0 = 1e-5;
};

struct ExperimentConfig {
  ModelParams model;
  GridSpec grid;  // grid.h always equals model.h
  SolverConfig solver;
  InitSpec init;
  HarrisTable harris;
  McSettings mc;
  FlatNormOptions flat;
  std::vector<Atom> flat_atoms;  // measure for the flatnorm command; empty: use init
  std::string output_dir = "out";

  void validate() const;
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Throws ConfigError with the line number on syntax errors, unknown keys
/// and bad values, and on failed validation.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Every key with its resolved value, defaults included, in a fixed order.
ConfigEntries resolved_entries(const ExperimentConfig& cfg);

std::vector<Atom> parse_atoms(const std::string& text);
std::string format_number(double v);

/// Initial measure described by cfg.init on cfg.grid.
GridMeasure build_initial(const ExperimentConfig& cfg);

}  // namespace rps
