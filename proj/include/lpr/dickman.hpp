#pragma once

// Dickman-de Bruijn function rho(u): rho = 1 on [0, 1] and u rho'(u) + rho(u - 1) = 0
// beyond. The table marches the integral form
//
//   rho(u) = rho(u') - \int_{u'}^{u} rho(t - 1) / t dt
//
// node by node, taking rho(t - 1) from the already-computed unit interval.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace lpr {

class DickmanTable {
 public:
  struct Options {
    double u_max = 50.0;
    double step = 1e-3;        // 1 / step must be an integer
    double tolerance = 1e-12;  // per-cell quadrature tolerance
  };

  DickmanTable();
  explicit DickmanTable(const Options& options);

  double u_max() const noexcept { return u_max_; }
  double step() const noexcept { return step_; }
  std::span<const double> values() const noexcept { return values_; }
  const Options& options() const noexcept { return options_; }

  /// rho(u) for 0 <= u <= u_max, cubic interpolation inside each unit interval.
  double rho(double u) const;

  /// The unique u with rho(u) = 1/d, by bisection on [1, u_max].
  /// d = 1 returns 1 (the right end of the plateau).
  double u_of(double d) const;

  /// A table with twice the reach.
  DickmanTable extended() const;

 private:
  double interpolate(std::size_t cell, double u) const noexcept;

  Options options_;
  double u_max_ = 0;
  double step_ = 0;
  std::size_t nodes_per_unit_ = 0;
  std::vector<double> values_;
};

/// u_of that doubles the table until it covers 1/d.
double u_of_extending(double d, DickmanTable& table);

struct AsymptoticReciprocal {
  double leading;      // (loglog n - 1) / log n
  double error_scale;  // logloglog n / (loglog n * log n)
};

/// Leading term of the expansion of 1 / u(n); requires n >= 20.
AsymptoticReciprocal u_asymptotic_reciprocal(double n);

/// Main term exp(-u log u - u loglog u + u) of de Bruijn's expansion; requires u >= 3.
double rho_debruijn(double u);

/// Writes "u,rho" followed by rows u = 0, step, 2 step, ... up to the table's u_max.
/// step = 0 writes the table's own nodes.
void write_rho_csv(std::ostream& out, const DickmanTable& table, double step = 0);

}  // namespace lpr
