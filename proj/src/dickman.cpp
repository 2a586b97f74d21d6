#include "lpr/dickman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "lpr/errors.hpp"

namespace lpr {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
double adaptive_gauss_kronrod(const F& f, double a, double b, double tol, int depth = 0) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = kKronrodWeights[7] * f(center);
  double gauss = kGaussWeights[3] * f(center);
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  if (std::abs(kronrod - gauss) <= tol || depth >= 30) return kronrod;
  return adaptive_gauss_kronrod(f, a, center, 0.5 * tol, depth + 1) +
         adaptive_gauss_kronrod(f, center, b, 0.5 * tol, depth + 1);
}

}  // namespace

DickmanTable::DickmanTable() : DickmanTable(Options{}) {}

DickmanTable::DickmanTable(const Options& options) : options_(options) {
  if (!(options.step > 0) || options.step > 0.5)
    throw DomainError("DickmanTable: step must lie in (0, 0.5]");
  const double per_unit = 1.0 / options.step;
  nodes_per_unit_ = static_cast<std::size_t>(std::llround(per_unit));
  if (std::abs(per_unit - static_cast<double>(nodes_per_unit_)) > 1e-9 * per_unit)
    throw DomainError("DickmanTable: 1/step must be an integer");
  if (!(options.u_max >= 1)) throw DomainError("DickmanTable: u_max must be at least 1");

  step_ = 1.0 / static_cast<double>(nodes_per_unit_);
  // whole unit intervals only, so every interpolation stencil fits in one
  const auto cells = static_cast<std::size_t>(std::ceil(options.u_max - 1e-12)) * nodes_per_unit_;
  u_max_ = static_cast<double>(cells) * step_;
  values_.assign(cells + 1, 1.0);

  const std::size_t n = nodes_per_unit_;
  // Up to u = 4 march rho' = -rho(u - 1) / u by quadrature. Beyond that, forward marching keeps an
  // absolute error floor (the delay equation admits a slowly decaying parasitic solution), so switch
  // to u rho(u) = integral of rho over [u - 1, u], whose positive window sum keeps relative accuracy.
  const std::size_t forward_end = std::min(cells, 4 * n);
  for (std::size_t k = n + 1; k <= forward_end; ++k) {
    // rho(t - 1) on this cell comes from cell k - 1 - n of the previous unit interval
    const std::size_t lagged = k - 1 - n;
    auto integrand = [&](double t) { return interpolate(lagged, t - 1.0) / t; };
    const double a = static_cast<double>(k - 1) * step_;
    const double b = static_cast<double>(k) * step_;
    // relative tolerance: rho decays super-exponentially
    const double tol = options.tolerance * values_[k - 1] * step_;
    values_[k] = values_[k - 1] - adaptive_gauss_kronrod(integrand, a, b, tol);
  }
  // cell j spans [x_{j-1}, x_j]; cubic-exact integral from the centred stencil j-2 .. j+1
  std::vector<double> cell_integral(cells + 1, 0.0);
  const auto centred = [&](std::size_t j) {
    return step_ * (13 * (values_[j - 1] + values_[j]) - values_[j - 2] - values_[j + 1]) / 24;
  };
  for (std::size_t j = 3 * n + 1; j + 1 <= forward_end; ++j) cell_integral[j] = centred(j);
  for (std::size_t k = forward_end + 1; k <= cells; ++k) {
    if (k >= 2) cell_integral[k - 2] = centred(k - 2);
    double window = 0;
    for (std::size_t j = k - n + 1; j + 1 < k; ++j) window += cell_integral[j];
    // cells k-1 and k carry rho_k linearly: centred stencil and the implicit four-point rule
    const double known = window +
                         step_ * (13 * (values_[k - 2] + values_[k - 1]) - values_[k - 3]) / 24 +
                         step_ * (19 * values_[k - 1] - 5 * values_[k - 2] + values_[k - 3]) / 24;
    const double u = static_cast<double>(k) * step_;
    values_[k] = known / (u - step_ / 3);
  }
}

double DickmanTable::interpolate(std::size_t cell, double u) const noexcept {
  // four-point Lagrange stencil kept inside the unit interval that owns `cell`
  const std::size_t n = nodes_per_unit_;
  const std::size_t unit_lo = cell / n * n;
  const std::size_t unit_hi = std::min(unit_lo + n, values_.size() - 1);
  std::size_t j0 = cell > unit_lo ? cell - 1 : unit_lo;
  if (j0 + 3 > unit_hi) j0 = unit_hi >= unit_lo + 3 ? unit_hi - 3 : unit_lo;
  const double s = u / step_ - static_cast<double>(j0);
  const double y0 = values_[j0], y1 = values_[j0 + 1], y2 = values_[j0 + 2], y3 = values_[j0 + 3];
  return -y0 * (s - 1) * (s - 2) * (s - 3) / 6 + y1 * s * (s - 2) * (s - 3) / 2 -
         y2 * s * (s - 1) * (s - 3) / 2 + y3 * s * (s - 1) * (s - 2) / 6;
}

double DickmanTable::rho(double u) const {
  if (std::isnan(u) || u < 0) throw DomainError("rho: u must be non-negative");
  if (u > u_max_) throw RangeError("rho: u exceeds the table's u_max; extend the table");
  if (u <= 1) return 1.0;
  auto cell = static_cast<std::size_t>(u / step_);
  cell = std::min(cell, values_.size() - 2);
  return interpolate(cell, u);
}

double DickmanTable::u_of(double d) const {
  if (std::isnan(d) || d < 1) throw DomainError("u_of: d must be at least 1");
  if (d == 1) return 1.0;
  const double target = 1.0 / d;
  if (values_.back() > target) throw RangeError("u_of: solution lies beyond u_max; extend the table");
  double lo = 1.0, hi = u_max_;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (rho(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

DickmanTable DickmanTable::extended() const {
  Options doubled = options_;
  doubled.u_max = 2 * u_max_;
  return DickmanTable(doubled);
}

double u_of_extending(double d, DickmanTable& table) {
  if (std::isnan(d) || d < 1) throw DomainError("u_of: d must be at least 1");
  while (table.values().back() > 1.0 / d) table = table.extended();
  return table.u_of(d);
}

AsymptoticReciprocal u_asymptotic_reciprocal(double n) {
  if (!(n >= 20)) throw DomainError("u_asymptotic_reciprocal: n must be at least 20");
  const double log_n = std::log(n);
  const double loglog_n = std::log(log_n);
  return {(loglog_n - 1) / log_n, std::log(loglog_n) / (loglog_n * log_n)};
}

double rho_debruijn(double u) {
  if (!(u >= 3)) throw DomainError("rho_debruijn: expansion requires u >= 3");
  const double log_u = std::log(u);
  return std::exp(-u * log_u - u * std::log(log_u) + u);
}

void write_rho_csv(std::ostream& out, const DickmanTable& table, double step) {
  if (step == 0) step = table.step();
  if (!(step > 0)) throw DomainError("write_rho_csv: step must be positive");
  out << "u,rho\n";
  char line[64];
  const auto rows = static_cast<std::size_t>(std::floor(table.u_max() / step + 1e-9));
  for (std::size_t k = 0; k <= rows; ++k) {
    const double u = std::min(static_cast<double>(k) * step, table.u_max());
    std::snprintf(line, sizeof line, "%.12g,%.12g\n", u, table.rho(u));
    out << line;
  }
}

}  // namespace lpr
