#pragma once

// Power residues modulo a prime, least d-th power non-residues, exact
// counts of smooth numbers and character partial sums.

#include <cstdint>

#include "lpr/arith.hpp"
#include "lpr/dickman.hpp"

namespace lpr {

/// n is a d-th power residue mod p iff n^((p-1)/d) = 1. Requires d | p - 1, 1 <= n < p.
bool is_dth_power_residue(u64 n, u64 p, u64 d);

/// Smallest n >= 2 that is not a d-th power residue mod p (linear scan).
u64 least_power_nonresidue(u64 p, u64 d);

struct PsiOptions {
  u64 x_limit = 100'000'000;
  std::size_t segment_size = std::size_t{1} << 18;
};

/// Psi(x, y): integers n in [1, x] all of whose prime factors are strictly below y.
/// The strict inequality follows the set-builder definition used for the
/// smooth-number lower bound; most references use p <= y instead.
u64 psi_count(u64 x, double y, const PsiOptions& options = {});

struct PsiBoundReport {
  u64 x;
  double y;
  double u;           // log x / log y, floored at 0
  u64 psi;
  double x_rho_u;     // x * rho(u)
  bool holds;         // psi >= x * rho(u)
  double margin;      // psi / (x * rho(u))
};

PsiBoundReport check_psi_lower_bound(u64 x, double y, const DickmanTable& table,
                                     const PsiOptions& options = {});

struct CharacterSumOptions {
  u64 p_limit = 1'000'000;
};

struct CharacterSumReport {
  double max_normalized_sum;  // max over k of |sum_{n <= H} chi_k(n)| / H
  u64 argmax_k;               // the maximizing character index
};

/// Scans the characters chi_k(n) = exp(2 pi i k log(n) / d), k = 1..d-1, whose
/// d-th power is principal, with discrete logs taken to the least primitive root.
CharacterSumReport character_partial_sum_diagnostic(u64 p, u64 d, u64 h,
                                                    const CharacterSumOptions& options = {});

}  // namespace lpr
