#pragma once

// Exact 64-bit integer and modular arithmetic: sieving, primality,
// factorization, powers, multiplicative orders and the arithmetic
// functions used throughout the library.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace lpr {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Inputs at or above this bound are rejected by factorize and the prime-based APIs.
inline constexpr u64 kMaxSupported = u64{1} << 62;

struct PrimePower {
  u64 prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A positive integer together with its complete prime factorization.
///
/// Factors are sorted by prime, strictly increasing, and multiply back to
/// `value()`. Construct through `factorize` or `FactoredInteger::from_factors`.
class FactoredInteger {
 public:
  FactoredInteger() = default;  // the unit 1

  /// Validates the factor list (ascending primes, positive exponents, no overflow).
  static FactoredInteger from_factors(std::vector<PrimePower> factors);
  // No validation; for producers that already guarantee the invariants.
  static FactoredInteger from_trusted(u64 value, std::vector<PrimePower> factors) {
    FactoredInteger f;
    f.value_ = value;
    f.factors_ = std::move(factors);
    return f;
  }

  u64 value() const noexcept { return value_; }
  const std::vector<PrimePower>& factors() const noexcept { return factors_; }

  std::vector<u64> primes() const;
  std::size_t omega() const noexcept { return factors_.size(); }
  u64 radical() const noexcept;
  u64 totient() const noexcept;
  int mobius() const noexcept;
  bool divisible_by(u64 prime) const noexcept;

  friend bool operator==(const FactoredInteger&, const FactoredInteger&) = default;

 private:
  u64 value_ = 1;
  std::vector<PrimePower> factors_;
};

struct SieveOptions {
  std::size_t segment_size = std::size_t{1} << 20;
  // Cap on the bytes a materialized prime list may occupy.
  std::size_t memory_budget_bytes = std::size_t{1} << 30;
};

/// All primes in [2, limit], ascending. Throws CapacityError when the
/// resulting list would exceed the memory budget; use for_each_prime instead.
std::vector<u64> sieve_primes(u64 limit, const SieveOptions& options = {});

/// Streams the primes in [lo, hi] in ascending order through a segmented
/// sieve. Memory is O(sqrt(hi) + segment_size).
void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& visit,
                    const SieveOptions& options = {});

/// Streams each prime p in [lo, hi] together with the factorization of p - 1.
/// Factorizations come from a segmented residual sieve, so the sweep costs
/// about (hi - lo) log log hi word operations.
void for_each_prime_with_pm1(u64 lo, u64 hi,
                             const std::function<void(u64, const FactoredInteger&)>& visit,
                             const SieveOptions& options = {});

inline u64 mul_mod(u64 a, u64 b, u64 m) noexcept {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 mod_pow(u64 base, u64 exponent, u64 modulus) noexcept;

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(u64 n) noexcept;

/// Trial division by the primes below 10^6, then Pollard-Brent rho on the cofactor.
FactoredInteger factorize(u64 n);

/// Smallest e >= 1 with a^e = 1 (mod p), given the factorization of p - 1.
u64 multiplicative_order(u64 a, u64 p, const FactoredInteger& p_minus_1);
u64 multiplicative_order(u64 a, u64 p);

bool is_primitive_root(u64 a, u64 p, const FactoredInteger& p_minus_1);
bool is_primitive_root(u64 a, u64 p);

/// Smallest a >= 2 of multiplicative order p - 1 (brute force). p must be an odd prime.
u64 least_primitive_root(u64 p, const FactoredInteger& p_minus_1);
u64 least_primitive_root(u64 p);

/// Number of distinct primes q | n with q < t.
std::size_t omega_up_to(const FactoredInteger& n, double t) noexcept;

/// True iff every odd prime factor of p - 1 is at least y.
bool is_y_rough(const FactoredInteger& p_minus_1, double y) noexcept;

u64 gcd(u64 a, u64 b) noexcept;

/// Inverse of a modulo m; requires gcd(a, m) = 1.
u64 inverse_mod(u64 a, u64 m);

struct PrimeRecord {
  u64 p = 0;
  FactoredInteger p_minus_1;
  std::map<double, bool> is_rough_at;
};

PrimeRecord make_prime_record(u64 p, std::span<const double> thresholds);

}  // namespace lpr
