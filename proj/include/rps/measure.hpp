#pragma once

// Discretized signed measures on the half-line.
//
// Wealth y >= 0 is split as y = x + k*h with offset x in [0,h) and level k.
// The grid is aligned with the exchange quantum: each period [kh,(k+1)h) is
// cut into m cells of width h/m, so a cell never straddles two periods and
// the wealth classes {x + kh : k >= 0} map onto grid columns exactly.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace rps {

struct ModelParams {
  double eta = 3.0;  // pair-formation rate
  double h = 0.5;    // exchange quantum

  void validate() const;
};

struct GridSpec {
  double h = 0.5;
  int m = 32;   // cells per period
  int K = 200;  // highest level

  void validate() const;

  int levels() const noexcept { return K + 1; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(m) * static_cast<std::size_t>(K + 1); }
  double cell_width() const noexcept { return h / m; }
  /// Midpoint of cell j inside one period.
  double offset_mid(int j) const noexcept { return (j + 0.5) * cell_width(); }
  double midpoint(int j, int k) const noexcept { return k * h + offset_mid(j); }
  /// Right end of the representable range, (K+1)h.
  double upper() const noexcept { return (K + 1) * h; }

  bool operator==(const GridSpec&) const = default;
};

/// Signed mass per cell. Storage is class-major: all levels of offset j are
/// contiguous, which is the layout every solver sweeps.
class GridMeasure {
 public:
  explicit GridMeasure(const GridSpec& spec);
  GridMeasure(const GridSpec& spec, std::vector<double> mass);

  const GridSpec& spec() const noexcept { return spec_; }

  double operator()(int j, int k) const noexcept { return w_[index(j, k)]; }
  double& operator()(int j, int k) noexcept { return w_[index(j, k)]; }

  /// Masses of levels 0..K for offset cell j.
  std::span<const double> column(int j) const noexcept;
  std::span<double> column(int j) noexcept;

  std::span<const double> masses() const noexcept { return w_; }
  std::span<double> masses() noexcept { return w_; }

  GridMeasure& operator+=(const GridMeasure& other);
  GridMeasure& operator-=(const GridMeasure& other);
  GridMeasure& operator*=(double s) noexcept;

  friend GridMeasure operator+(GridMeasure a, const GridMeasure& b) { return a += b; }
  friend GridMeasure operator-(GridMeasure a, const GridMeasure& b) { return a -= b; }
  friend GridMeasure operator*(double s, GridMeasure a) { return a *= s; }

  bool operator==(const GridMeasure&) const = default;

 private:
  std::size_t index(int j, int k) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(spec_.K + 1) + static_cast<std::size_t>(k);
  }

  GridSpec spec_;
  std::vector<double> w_;
};

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

/// Finite combination of point masses.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  bool empty() const noexcept { return atoms_.empty(); }

  /// Sorted by location, equal locations merged, zero weights dropped.
  AtomicMeasure canonical() const;

  AtomicMeasure& operator+=(const AtomicMeasure& other);
  AtomicMeasure& operator-=(const AtomicMeasure& other);
  AtomicMeasure& operator*=(double s) noexcept;

  friend AtomicMeasure operator+(AtomicMeasure a, const AtomicMeasure& b) { return a += b; }
  friend AtomicMeasure operator-(AtomicMeasure a, const AtomicMeasure& b) { return a -= b; }

 private:
  std::vector<Atom> atoms_;
};

/// Nonzero cells as atoms at their midpoints.
AtomicMeasure to_atomic(const GridMeasure& mu);
/// Each atom's weight goes to the cell containing it. Throws ConfigError for
/// atoms at or beyond (K+1)h.
GridMeasure bin_atoms(const AtomicMeasure& atoms, const GridSpec& spec);

double total_mass(const GridMeasure& mu);
double total_mass(const AtomicMeasure& mu);
/// mu([h, inf)); exact on the aligned grid.
double mass_above_h(const GridMeasure& mu);
double level0_mass(const GridMeasure& mu);
double top_level_mass(const GridMeasure& mu);
double first_moment(const GridMeasure& mu);
double first_moment(const AtomicMeasure& mu);

/// V(y) = 2 - exp(-a(y) y) with a(y) = 2 ln2 / (2 mod(y,h) + h). Values in [1,2).
double weight_V(double y, double h);
/// Same weight written per class: y = x + k h with x in [0,h). Avoids fmod.
double weight_V(double x, int k, double h);

double norm_TV(const GridMeasure& mu);
double norm_TV(const AtomicMeasure& mu);
double norm_V(const GridMeasure& mu);
double norm_V(const AtomicMeasure& mu, double h);

// Density descriptors for ingest_density.

/// (1/h) 1_{[k0 h, (k0+1) h)}
struct SquareDensity {
  int k0 = 1;
};
/// alpha exp(-alpha y)
struct ExponentialDensity {
  double alpha = 1.0;
};
/// Piecewise-linear interpolation of (y, f) samples, zero outside [y.front(), y.back()].
struct SampledDensity {
  std::vector<double> y;
  std::vector<double> f;

  double operator()(double at) const;
};

using Density = std::variant<SquareDensity, ExponentialDensity, SampledDensity>;

enum class QuadratureRule { midpoint, simpson };

/// Cell masses approximating the integral of the density over each cell.
/// Square densities are integrated exactly under either rule.
GridMeasure ingest_density(const Density& density, const GridSpec& spec,
                           QuadratureRule rule = QuadratureRule::midpoint);

}  // namespace rps
