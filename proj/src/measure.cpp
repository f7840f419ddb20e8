#include "rps/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rps/error.hpp"

namespace rps {

void ModelParams::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("model.eta must be a positive finite number");
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("model.h must be a positive finite number");
}

void GridSpec::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("grid h must be a positive finite number");
  if (m < 1) throw ConfigError("grid.m must be at least 1");
  if (K < 1) throw ConfigError("grid.K must be at least 1");
}

GridMeasure::GridMeasure(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  w_.assign(spec_.size(), 0.0);
}

GridMeasure::GridMeasure(const GridSpec& spec, std::vector<double> mass) : spec_(spec), w_(std::move(mass)) {
  spec_.validate();
  if (w_.size() != spec_.size()) {
    throw ConfigError("mass array has " + std::to_string(w_.size()) + " entries, grid needs " +
                      std::to_string(spec_.size()));
  }
}

std::span<const double> GridMeasure::column(int j) const noexcept {
  return std::span<const double>(w_).subspan(index(j, 0), static_cast<std::size_t>(spec_.K + 1));
}

std::span<double> GridMeasure::column(int j) noexcept {
  return std::span<double>(w_).subspan(index(j, 0), static_cast<std::size_t>(spec_.K + 1));
}

GridMeasure& GridMeasure::operator+=(const GridMeasure& other) {
  if (!(spec_ == other.spec_)) throw ConfigError("grid mismatch in measure arithmetic");
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] += other.w_[i];
  return *this;
}

GridMeasure& GridMeasure::operator-=(const GridMeasure& other) {
  if (!(spec_ == other.spec_)) throw ConfigError("grid mismatch in measure arithmetic");
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] -= other.w_[i];
  return *this;
}

GridMeasure& GridMeasure::operator*=(double s) noexcept {
  for (double& v : w_) v *= s;
  return *this;
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const Atom& a : atoms_) {
    if (!(a.location >= 0.0) || !std::isfinite(a.location)) throw ConfigError("atom locations must be finite and >= 0");
    if (!std::isfinite(a.weight)) throw ConfigError("atom weights must be finite");
  }
}

AtomicMeasure AtomicMeasure::canonical() const {
  std::vector<Atom> sorted = atoms_;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Atom& a, const Atom& b) { return a.location < b.location; });
  std::vector<Atom> merged;
  for (const Atom& a : sorted) {
    if (!merged.empty() && merged.back().location == a.location) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }
  std::erase_if(merged, [](const Atom& a) { return a.weight == 0.0; });
  AtomicMeasure out;
  out.atoms_ = std::move(merged);
  return out;
}

AtomicMeasure& AtomicMeasure::operator+=(const AtomicMeasure& other) {
  atoms_.insert(atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  return *this;
}

AtomicMeasure& AtomicMeasure::operator-=(const AtomicMeasure& other) {
  for (const Atom& a : other.atoms_) atoms_.push_back({a.location, -a.weight});
  return *this;
}

AtomicMeasure& AtomicMeasure::operator*=(double s) noexcept {
  for (Atom& a : atoms_) a.weight *= s;
  return *this;
}

AtomicMeasure to_atomic(const GridMeasure& mu) {
  const GridSpec& g = mu.spec();
  std::vector<Atom> atoms;
  for (int j = 0; j < g.m; ++j) {
    for (int k = 0; k <= g.K; ++k) {
      if (mu(j, k) != 0.0) atoms.push_back({g.midpoint(j, k), mu(j, k)});
    }
  }
  return AtomicMeasure(std::move(atoms)).canonical();
}

GridMeasure bin_atoms(const AtomicMeasure& atoms, const GridSpec& spec) {
  GridMeasure mu(spec);
  const double dx = spec.cell_width();
  for (const Atom& a : atoms.atoms()) {
    const double level = std::floor(a.location / spec.h);
    if (level > spec.K) throw ConfigError("atom at " + std::to_string(a.location) + " lies beyond the grid");
    const int k = static_cast<int>(level);
    const double x = a.location - k * spec.h;
    const int j = std::clamp(static_cast<int>(std::floor(x / dx)), 0, spec.m - 1);
    mu(j, k) += a.weight;
  }
  return mu;
}

double total_mass(const GridMeasure& mu) {
  double s = 0.0;
  for (double v : mu.masses()) s += v;
  return s;
}

double total_mass(const AtomicMeasure& mu) {
  double s = 0.0;
  for (const Atom& a : mu.atoms()) s += a.weight;
  return s;
}

double mass_above_h(const GridMeasure& mu) {
  double s = 0.0;
  for (int j = 0; j < mu.spec().m; ++j) {
    const auto col = mu.column(j);
    for (std::size_t k = 1; k < col.size(); ++k) s += col[k];
  }
  return s;
}

double level0_mass(const GridMeasure& mu) {
  double s = 0.0;
  for (int j = 0; j < mu.spec().m; ++j) s += mu(j, 0);
  return s;
}

double top_level_mass(const GridMeasure& mu) {
  double s = 0.0;
  for (int j = 0; j < mu.spec().m; ++j) s += mu(j, mu.spec().K);
  return s;
}

double first_moment(const GridMeasure& mu) {
  const GridSpec& g = mu.spec();
  double s = 0.0;
  for (int j = 0; j < g.m; ++j) {
    for (int k = 0; k <= g.K; ++k) s += g.midpoint(j, k) * mu(j, k);
  }
  return s;
}

double first_moment(const AtomicMeasure& mu) {
  double s = 0.0;
  for (const Atom& a : mu.atoms()) s += a.location * a.weight;
  return s;
}

double weight_V(double x, int k, double h) {
  const double alpha = 2.0 * std::numbers::ln2 / (2.0 * x + h);
  return 2.0 - std::exp(-alpha * (x + k * h));
}

double weight_V(double y, double h) {
  const double level = std::floor(y / h);
  double x = y - level * h;
  if (x < 0.0) x = 0.0;
  const double alpha = 2.0 * std::numbers::ln2 / (2.0 * x + h);
  return 2.0 - std::exp(-alpha * y);
}

double norm_TV(const GridMeasure& mu) {
  double s = 0.0;
  for (double v : mu.masses()) s += std::abs(v);
  return s;
}

double norm_TV(const AtomicMeasure& mu) {
  const AtomicMeasure c = mu.canonical();
  double s = 0.0;
  for (const Atom& a : c.atoms()) s += std::abs(a.weight);
  return s;
}

double norm_V(const GridMeasure& mu) {
  const GridSpec& g = mu.spec();
  double s = 0.0;
  for (int j = 0; j < g.m; ++j) {
    const double x = g.offset_mid(j);
    const auto col = mu.column(j);
    for (int k = 0; k <= g.K; ++k) {
      if (col[k] != 0.0) s += weight_V(x, k, g.h) * std::abs(col[k]);
    }
  }
  return s;
}

double norm_V(const AtomicMeasure& mu, double h) {
  const AtomicMeasure c = mu.canonical();
  double s = 0.0;
  for (const Atom& a : c.atoms()) s += weight_V(a.location, h) * std::abs(a.weight);
  return s;
}

double SampledDensity::operator()(double at) const {
  if (y.size() < 2 || at < y.front() || at > y.back()) return 0.0;
  const auto it = std::upper_bound(y.begin(), y.end(), at);
  if (it == y.end()) return f.back();
  const std::size_t i = static_cast<std::size_t>(it - y.begin()) - 1;
  const double s = (at - y[i]) / (y[i + 1] - y[i]);
  return (1.0 - s) * f[i] + s * f[i + 1];
}

namespace {

template <class F>
double integrate_cell(const F& f, double a, double b, QuadratureRule rule) {
  const double mid = 0.5 * (a + b);
  if (rule == QuadratureRule::midpoint) return (b - a) * f(mid);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(mid) + f(b));
}

template <class F>
GridMeasure ingest_function(const F& f, const GridSpec& spec, QuadratureRule rule) {
  GridMeasure mu(spec);
  const double dx = spec.cell_width();
  for (int j = 0; j < spec.m; ++j) {
    for (int k = 0; k <= spec.K; ++k) {
      const double a = k * spec.h + j * dx;
      mu(j, k) = integrate_cell(f, a, a + dx, rule);
    }
  }
  return mu;
}

}  // namespace

GridMeasure ingest_density(const Density& density, const GridSpec& spec, QuadratureRule rule) {
  spec.validate();
  if (const auto* sq = std::get_if<SquareDensity>(&density)) {
    if (sq->k0 < 0 || sq->k0 > spec.K) {
      throw ConfigError("square density level " + std::to_string(sq->k0) + " outside grid levels 0.." +
                        std::to_string(spec.K));
    }
    GridMeasure mu(spec);
    for (int j = 0; j < spec.m; ++j) mu(j, sq->k0) = 1.0 / spec.m;
    return mu;
  }
  if (const auto* ex = std::get_if<ExponentialDensity>(&density)) {
    if (!(ex->alpha > 0.0)) throw ConfigError("exponential density needs alpha > 0");
    const double alpha = ex->alpha;
    return ingest_function([alpha](double y) { return alpha * std::exp(-alpha * y); }, spec, rule);
  }
  const auto& sampled = std::get<SampledDensity>(density);
  if (sampled.y.size() != sampled.f.size() || sampled.y.size() < 2) {
    throw ConfigError("sampled density needs at least two (y, f) pairs of equal length");
  }
  if (!std::is_sorted(sampled.y.begin(), sampled.y.end())) throw ConfigError("sampled density nodes must be sorted");
  return ingest_function(sampled, spec, rule);
}

}  // namespace rps
