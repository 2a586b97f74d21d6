#pragma once

// Builds a simultaneous q-th power non-residue for every prime q | p - 1 (a
// primitive root) as a product of least non-residues:
//
//   1. For each prime q | p - 1 find g(q), the least q-th power non-residue.
//   2. Merge primes sharing a g value into levels A_1, ..., A_s with
//      g(A_1) < ... < g(A_s). Every g(A_j) is a q-th power residue for q in a
//      later level A_i, i > j.
//   3. Start from z_s = g(A_s) and lift downwards: z_t = g(A_t)^{m_t} z_{t+1},
//      choosing m_t so that z_t stays a non-residue for A_t and all later levels.
//      Each m_t avoids one residue class per q in A_t, so it is bounded by the
//      Jacobsthal function of P(A_t).
//
// The trace also carries the exponent bounds that this construction implies.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpr/arith.hpp"
#include "lpr/dickman.hpp"
#include "lpr/structure.hpp"

namespace lpr {

struct ResidueEntry {
  u64 q;    // prime divisor of p - 1
  u64 g_q;  // least q-th power non-residue
  friend bool operator==(const ResidueEntry&, const ResidueEntry&) = default;
};

struct ResidueProfile {
  u64 p = 0;
  FactoredInteger p_minus_1;
  std::vector<ResidueEntry> entries;  // by g_q, then q
};

ResidueProfile residue_profile(u64 p);
ResidueProfile residue_profile(u64 p, const FactoredInteger& p_minus_1);

struct Level {
  std::vector<u64> primes;  // ascending
  u64 g;                    // common least non-residue of the level
  u64 divisor;              // d_i: product of the primes in this and all later levels

  u64 prime_product() const;
};

struct Grouping {
  u64 p = 0;
  FactoredInteger p_minus_1;
  std::vector<Level> levels;  // strictly increasing g
};

Grouping group_levels(const ResidueProfile& profile);

/// Every g(A_j) must have discrete log = 0 mod q for each q in a later level.
bool verify_remark2(const Grouping& grouping, const DlogContext& ctx);

struct LiftResult {
  u64 m;
  u64 product;           // y^m * z mod p
  bool zero_fallback;    // no m in [1, j - 1] was admissible, so m = 0 was used
  std::optional<u64> jacobsthal;  // j(P(A)) when it was computed
};

/// Finds the least admissible m >= 1 below j(P(A)) such that y^m z is a
/// q-th power non-residue for every q in A and B, falling back to m = 0.
/// Preconditions are checked with direct residue tests.
LiftResult lift_step(u64 y, u64 z, const std::vector<u64>& level_a, const std::vector<u64>& later_b,
                     const DlogContext& ctx);

struct BoundExponents {
  double main1 = 0;           // 1/(4 sqrt e) + sum_{i<s} j(P(A_i)) / u(d_i) + eps
  double main1_j_minus_1 = 0; // same with j - 1
  double main3 = 0;           // 1/(4 sqrt e) + sum_{j=2}^{r} 10 / u(b_j) + eps
  bool main1_surrogate = false;  // some j(P(A_i)) was replaced by a surrogate bound
};

struct ConstructionTrace {
  Grouping grouping;
  std::vector<u64> exponents;         // m_1, ..., m_s (m_s = 1)
  std::vector<u64> partial_products;  // z_1, ..., z_s (mod p)
  std::vector<std::optional<u64>> jacobsthal;  // j(P(A_i)) per level
  u64 result = 0;                     // z_1
  double log_product = 0;             // log of prod g(A_i)^{m_i}, unreduced
  std::optional<u64> integer_product; // the unreduced product when it fits in 64 bits
  double realized_exponent = 0;       // log_product / log p
  std::size_t zero_fallbacks = 0;
  bool remark2 = false;
  u64 least_primitive_root = 0;
  double epsilon = 0.01;
  BoundExponents bounds;
};

inline constexpr double kBurgessExponent = 0.15163266492815836;  // 1 / (4 sqrt e)

/// Runs the full construction and re-verifies the result is a primitive root.
/// Throws ContractError (with the trace as JSON) on any failed self-check.
ConstructionTrace construct_simultaneous_nonresidue(u64 p, DickmanTable& table, double epsilon = 0.01);
ConstructionTrace construct_simultaneous_nonresidue(u64 p, const FactoredInteger& p_minus_1,
                                                    DickmanTable& table, double epsilon = 0.01);

BoundExponents bound_exponents(const Grouping& grouping,
                               const std::vector<std::optional<u64>>& jacobsthal, DickmanTable& table,
                               double epsilon);

/// 1/(4 sqrt e) + sum_{i<s} j(P(A_i)) / u(d_i) + eps.
double bound_exponent_main1(const Grouping& grouping, DickmanTable& table, double epsilon = 0.01);

/// 1/(4 sqrt e) + sum_{j=2}^{r} 10 / u(b_j) + eps, b_j the product of the j smallest primes of p - 1.
double bound_exponent_main3(const FactoredInteger& p_minus_1, DickmanTable& table, double epsilon = 0.01);

/// loglog under the convention loglog x = max(1, log log x), unless raw.
double loglog(double x, bool raw = false);

/// Sum over odd primes q | p - 1 of loglog(q) / log(q).
double condition2_sum(const FactoredInteger& p_minus_1, bool raw_loglog = false);

/// JSON rendering of a trace (fixed field order).
std::string trace_json(const ConstructionTrace& trace, bool full = true);

}  // namespace lpr
