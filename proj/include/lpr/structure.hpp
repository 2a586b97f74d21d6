#pragma once

// Structure of (Z/pZ)*: discrete logarithms to a fixed primitive root, CRT
// over distinct prime moduli, the Jacobsthal function and the least integer
// avoiding a set of residue classes.

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lpr/arith.hpp"

namespace lpr {

struct DlogOptions {
  u64 full_table_limit = 10'000;           // enumerate the whole group up to this p
  std::size_t max_baby_steps = std::size_t{1} << 22;  // per prime-order subgroup
};

/// Discrete logarithms in (Z/pZ)* to the least primitive root, via
/// Pohlig-Hellman over the prime powers of p - 1 and baby-step giant-step
/// in each prime-order subgroup. Immutable after construction.
class DlogContext {
 public:
  explicit DlogContext(u64 p, const DlogOptions& options = {});
  DlogContext(u64 p, FactoredInteger p_minus_1, const DlogOptions& options = {});

  u64 p() const noexcept { return p_; }
  u64 generator() const noexcept { return generator_; }
  const FactoredInteger& p_minus_1() const noexcept { return p_minus_1_; }

  /// The unique e in [0, p - 1) with generator^e = a (mod p).
  u64 log(u64 a) const;

 private:
  struct Subgroup {
    u64 prime;
    unsigned exponent;
    u64 prime_power;
    u64 base;        // generator^((p-1)/q^e), order q^e
    u64 base_inverse;
    u64 gamma;       // base^(q^(e-1)), order q
    u64 giant;       // gamma^(-m)
    u64 m;
    std::unordered_map<u64, u64> baby;  // gamma^j -> j, j < m
  };

  u64 log_in_subgroup(const Subgroup& s, u64 a) const;

  u64 p_ = 0;
  u64 generator_ = 0;
  FactoredInteger p_minus_1_;
  std::vector<std::uint32_t> full_;  // empty unless p <= full_table_limit
  std::vector<Subgroup> subgroups_;
};

/// log[a] for every a in [1, p), to the least primitive root; log[0] is unused.
std::vector<std::uint32_t> full_log_table(u64 p);

struct ResidueConstraint {
  u64 modulus;  // prime
  u64 residue;  // in [0, modulus)
};

/// One forbidden (or prescribed) residue class for each of a set of distinct primes.
class ResidueConstraintSet {
 public:
  ResidueConstraintSet() = default;
  ResidueConstraintSet(std::initializer_list<ResidueConstraint> constraints);

  /// Throws DomainError for a non-prime or repeated modulus or an unreduced residue.
  void add(u64 modulus, u64 residue);

  std::span<const ResidueConstraint> constraints() const noexcept { return constraints_; }
  std::size_t size() const noexcept { return constraints_.size(); }
  bool empty() const noexcept { return constraints_.empty(); }
  std::vector<u64> moduli() const;

  /// Product of the moduli; CapacityError past 2^62.
  u64 modulus_product() const;

 private:
  std::vector<ResidueConstraint> constraints_;
};

struct CrtSolution {
  u64 residue;
  u64 modulus;
  friend bool operator==(const CrtSolution&, const CrtSolution&) = default;
};

CrtSolution crt_combine(const ResidueConstraintSet& constraints);

struct JacobsthalOptions {
  u64 scan_limit = 1'000'000'000;  // largest radical the period scan accepts
};

/// j(n) by scanning one period of rad(n) for the widest gap between
/// consecutive integers coprime to n (cyclically). CapacityError beyond scan_limit.
u64 jacobsthal_exact(const FactoredInteger& n, const JacobsthalOptions& options = {});

/// j(P) for P the product of `primes` (distinct, any order), by searching for
/// the longest run of consecutive positions the primes' residue classes can
/// cover. Independent of the size of P; exponential only in the number of primes.
u64 jacobsthal_cover_search(std::span<const u64> primes);

struct PigeonholeBound {
  u64 printed;    // omega(n)
  u64 certified;  // omega(n) + 1, the bound the counting argument supports
};

/// Present iff every prime q | n exceeds omega(n).
std::optional<PigeonholeBound> jacobsthal_pigeonhole_bound(const FactoredInteger& n);

/// Smallest m >= 0 with m != a_q (mod q) for every constraint. When j(P) is
/// computable the result is checked against m <= j(P) - 1 (ContractError otherwise).
u64 min_avoiding(const ResidueConstraintSet& constraints, const JacobsthalOptions& options = {});

}  // namespace lpr
