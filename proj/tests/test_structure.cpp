#include <doctest.h>

#include <random>

#include "lpr/arith.hpp"
#include "lpr/errors.hpp"
#include "lpr/structure.hpp"
#include "oracles.hpp"

using namespace lpr;

TEST_CASE("discrete logs from the dense table") {
  for_each_prime(3, 400, [](u64 p) {
    const DlogContext ctx(p);
    CHECK(ctx.generator() == oracle::brute_least_primitive_root(p));
    for (u64 a = 1; a < p; ++a) REQUIRE(ctx.log(a) == oracle::brute_dlog(ctx.generator(), a, p));
  });
  const auto table = full_log_table(13);
  CHECK(table[2] == 1);
  CHECK(table[1] == 0);
  CHECK_THROWS_AS(full_log_table(15), DomainError);
}

TEST_CASE("discrete logs through the prime-power subgroups") {
  std::mt19937_64 rng(5);
  DlogOptions no_table;
  no_table.full_table_limit = 0;
  for (u64 p : std::initializer_list<u64>{10007ULL, 65537ULL, 1'000'003ULL, 998'244'353ULL, 1'000'000'007ULL, (u64{1} << 61) - 1}) {
    const DlogContext ctx(p, no_table);
    for (int i = 0; i < 40; ++i) {
      const u64 a = rng() % (p - 1) + 1;
      REQUIRE(mod_pow(ctx.generator(), ctx.log(a), p) == a);
      CHECK(ctx.log(a) < p - 1);
    }
    CHECK(ctx.log(1) == 0);
    CHECK(ctx.log(ctx.generator()) == 1);
    CHECK_THROWS_AS(ctx.log(p), DomainError);
  }
  // small primes agree with brute force on either path
  for_each_prime(3, 300, [&](u64 p) {
    const DlogContext ctx(p, no_table);
    for (u64 a = 1; a < p; ++a) REQUIRE(ctx.log(a) == oracle::brute_dlog(ctx.generator(), a, p));
  });
  CHECK_THROWS_AS(DlogContext(21), DomainError);
  DlogOptions tiny;
  tiny.full_table_limit = 0;
  tiny.max_baby_steps = 10;
  u64 p = 10007;
  while (!is_prime(p) || factorize(p - 1).factors().back().prime <= 100) p += 2;
  CHECK_THROWS_AS(DlogContext(p, tiny), CapacityError);
}

TEST_CASE("residue constraint sets") {
  ResidueConstraintSet set{{3, 1}, {5, 2}};
  CHECK(set.size() == 2);
  CHECK(set.modulus_product() == 15);
  CHECK_THROWS_AS(set.add(3, 2), DomainError);
  CHECK_THROWS_AS(set.add(9, 2), DomainError);
  CHECK_THROWS_AS(set.add(7, 7), DomainError);
  const auto s = crt_combine(set);
  CHECK(s.residue == 7);
  CHECK(s.modulus == 15);
  CHECK(crt_combine(ResidueConstraintSet{}).modulus == 1);
}

TEST_CASE("crt agrees with exhaustive search") {
  std::mt19937_64 rng(9);
  const std::vector<u64> primes{2, 3, 5, 7, 11, 13, 17, 19, 23};
  for (int trial = 0; trial < 300; ++trial) {
    ResidueConstraintSet set;
    std::vector<std::pair<u64, u64>> raw;
    u64 product = 1;
    for (u64 q : primes) {
      if (rng() % 2 || product * q > 200'000) continue;
      const u64 r = rng() % q;
      set.add(q, r);
      raw.emplace_back(q, r);
      product *= q;
    }
    const auto s = crt_combine(set);
    CHECK(s.modulus == product);
    CHECK(s.residue == oracle::brute_crt(raw));
  }
}

TEST_CASE("jacobsthal by period scan") {
  CHECK(jacobsthal_exact(factorize(1)) == 1);
  CHECK(jacobsthal_exact(factorize(2)) == 2);
  CHECK(jacobsthal_exact(factorize(30)) == 6);
  CHECK(jacobsthal_exact(factorize(35)) == 3);
  CHECK(jacobsthal_exact(factorize(210)) == 10);
  CHECK(jacobsthal_exact(factorize(2310)) == 14);
  CHECK(jacobsthal_exact(factorize(30030)) == 22);
  CHECK(jacobsthal_exact(factorize(9699690)) == 34);
  for (u64 n = 1; n <= 2000; ++n) REQUIRE(jacobsthal_exact(factorize(n)) == oracle::brute_jacobsthal(n));
  JacobsthalOptions capped;
  capped.scan_limit = 1000;
  CHECK_THROWS_AS(jacobsthal_exact(factorize(2310), capped), CapacityError);
}

TEST_CASE("covering search agrees with the period scan") {
  std::mt19937_64 rng(13);
  const auto primes = sieve_primes(60);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PrimePower> factors;
    std::vector<u64> chosen;
    u64 product = 1;
    for (u64 q : primes) {
      if (rng() % 3 || product * q > 50'000'000) continue;
      factors.push_back({q, 1});
      chosen.push_back(q);
      product *= q;
    }
    const auto n = FactoredInteger::from_factors(factors);
    REQUIRE(jacobsthal_cover_search(chosen) == jacobsthal_exact(n));
  }
  // primorials, where the scan is longest
  std::vector<u64> primorial;
  u64 product = 1;
  for (u64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23}) {
    primorial.push_back(q);
    product *= q;
    std::vector<PrimePower> factors;
    for (u64 r : primorial) factors.push_back({r, 1});
    CHECK(jacobsthal_cover_search(primorial) == jacobsthal_exact(FactoredInteger::from_factors(factors)));
  }
  CHECK(jacobsthal_cover_search(std::vector<u64>{}) == 1);
  CHECK(jacobsthal_cover_search(std::vector<u64>{1'000'000'007ULL}) == 2);
}

TEST_CASE("pigeonhole bound") {
  // j(35) = 3 = omega + 1: the bound j <= omega fails, omega + 1 holds
  const auto b = jacobsthal_pigeonhole_bound(factorize(35));
  REQUIRE(b);
  CHECK(b->printed == 2);
  CHECK(b->certified == 3);
  CHECK(jacobsthal_exact(factorize(35)) == b->certified);
  CHECK_FALSE(jacobsthal_pigeonhole_bound(factorize(30)));
  for (u64 n = 2; n <= 5000; ++n) {
    const auto f = factorize(n);
    if (const auto bound = jacobsthal_pigeonhole_bound(f)) REQUIRE(jacobsthal_exact(f) <= bound->certified);
  }
}

TEST_CASE("min_avoiding stays below j") {
  std::mt19937_64 rng(17);
  const auto primes = sieve_primes(100);
  for (int trial = 0; trial < 400; ++trial) {
    ResidueConstraintSet set;
    std::vector<std::pair<u64, u64>> raw;
    u64 product = 1;
    for (u64 q : primes) {
      if (rng() % 4 || product * q > 10'000'000) continue;
      const u64 r = rng() % q;
      set.add(q, r);
      raw.emplace_back(q, r);
      product *= q;
    }
    CHECK(min_avoiding(set) == oracle::brute_min_avoiding(raw));
  }
  // every class 0: the answer is 1 (m = 0 is forbidden)
  CHECK(min_avoiding({{2, 0}, {3, 0}, {5, 0}}) == 1);
  // the worst case for 2, 3, 5 reaches j(30) - 1 = 5
  u64 worst = 0;
  for (u64 a = 0; a < 2; ++a)
    for (u64 b = 0; b < 3; ++b)
      for (u64 c = 0; c < 5; ++c) worst = std::max(worst, min_avoiding({{2, a}, {3, b}, {5, c}}));
  CHECK(worst == 5);
  CHECK(min_avoiding(ResidueConstraintSet{}) == 0);
}
