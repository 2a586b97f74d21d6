#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lpr/dickman.hpp"
#include "lpr/errors.hpp"
#include "oracles.hpp"

using namespace lpr;

namespace {

const DickmanTable& table() {
  static const DickmanTable t;
  return t;
}

}  // namespace

TEST_CASE("rho on the first two intervals") {
  CHECK(table().rho(0) == 1.0);
  CHECK(table().rho(0.5) == 1.0);
  CHECK(table().rho(1) == 1.0);
  CHECK(table().rho(2) == doctest::Approx(0.3068528194400547).epsilon(1e-12));
  for (int i = 0; i <= 200; ++i) {
    const double u = 1 + i / 200.0;
    CHECK(std::abs(table().rho(u) - (1 - std::log(u))) <= 1e-11);
  }
}

TEST_CASE("rho agrees with the power-series oracle") {
  const oracle::RhoSeries series(50);
  double worst_relative = 0;
  for (double u = 1.0; u <= 50.0; u += 0.0137) {
    const double expected = static_cast<double>(series(u));
    worst_relative = std::max(worst_relative, std::abs(table().rho(u) - expected) / expected);
  }
  CHECK(worst_relative < 1e-9);
  // node values and interior points
  CHECK(table().rho(3) == doctest::Approx(static_cast<double>(series(3))).epsilon(1e-11));
  CHECK(table().rho(10) == doctest::Approx(2.77017183772596e-11).epsilon(1e-9));
}

TEST_CASE("rho is positive and decreasing") {
  double previous = 1;
  for (double u = 1.001; u <= 50; u += 0.01) {
    const double v = table().rho(u);
    REQUIRE(v > 0);
    REQUIRE(v < previous);
    previous = v;
  }
}

TEST_CASE("u(d) inverts rho") {
  CHECK(table().u_of(1) == 1.0);
  CHECK(table().u_of(2) == doctest::Approx(std::sqrt(std::exp(1.0))).epsilon(1e-10));
  CHECK(table().u_of(3) == doctest::Approx(std::exp(2.0 / 3)).epsilon(1e-10));
  for (double d : {2.0, 3.0, 5.0, 10.0, 100.0, 1e6, 1e12, 1e30})
    CHECK(std::abs(table().rho(table().u_of(d)) * d - 1) <= 1e-8);
  double previous = 1;
  for (double d = 1.5; d < 1e15; d *= 3.7) {
    const double u = table().u_of(d);
    CHECK(u > previous);
    previous = u;
  }
  CHECK_THROWS_AS(table().u_of(0.5), DomainError);
  CHECK_THROWS_AS(table().u_of(1e300), RangeError);
}

TEST_CASE("extending the table reaches smaller rho") {
  DickmanTable small({5, 1e-3, 1e-12});
  CHECK_THROWS_AS(small.u_of(1e6), RangeError);
  const double u = u_of_extending(1e6, small);
  CHECK(small.u_max() >= 10);
  CHECK(u == doctest::Approx(table().u_of(1e6)).epsilon(1e-9));
  CHECK(small.extended().u_max() == doctest::Approx(2 * small.u_max()));
}

TEST_CASE("domain and range errors") {
  CHECK_THROWS_AS(table().rho(-0.1), DomainError);
  CHECK_THROWS_AS(table().rho(50.5), RangeError);
  CHECK_THROWS_AS(DickmanTable({50, 0.3, 1e-12}), DomainError);
  CHECK_THROWS_AS(DickmanTable({0.5, 1e-3, 1e-12}), DomainError);
}

TEST_CASE("asymptotic forms") {
  const auto r = u_asymptotic_reciprocal(1e6);
  const double ll = std::log(std::log(1e6)), l = std::log(1e6);
  CHECK(r.leading == doctest::Approx((ll - 1) / l).epsilon(1e-12));
  CHECK(r.leading == doctest::Approx(0.117678).epsilon(1e-5));
  CHECK(r.error_scale == doctest::Approx(std::log(ll) / (ll * l)).epsilon(1e-12));
  // the leading term approaches the computed reciprocal
  const double exact = 1 / table().u_of(1e6);
  CHECK(std::abs(exact - r.leading) < 5 * r.error_scale);
  CHECK_THROWS_AS(u_asymptotic_reciprocal(10), DomainError);

  // log rho - main term stays O(u / log u)
  for (double u : {10.0, 20.0, 40.0}) {
    const double gap = std::abs(std::log(table().rho(u)) - std::log(rho_debruijn(u)));
    CHECK(gap <= 2 * u / std::log(u));
  }
  CHECK_THROWS_AS(rho_debruijn(2), DomainError);
}

TEST_CASE("csv output") {
  DickmanTable small({2, 1e-3, 1e-12});
  std::ostringstream out;
  write_rho_csv(out, small, 0.5);
  CHECK(out.str() == "u,rho\n0,1\n0.5,1\n1,1\n1.5,0.594534891892\n2,0.30685281944\n");
  std::ostringstream nodes;
  write_rho_csv(nodes, small);
  const std::string rows = nodes.str();
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 2002);
}
