#include "lpr/residues.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lpr/errors.hpp"
#include "lpr/structure.hpp"

namespace lpr {

namespace {

void require_divisor(u64 p, u64 d, const char* op) {
  if (p < 2 || d == 0 || (p - 1) % d != 0)
    throw DomainError(std::string(op) + ": d must divide p - 1");
}

struct Kahan {
  double sum = 0, carry = 0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

bool is_dth_power_residue(u64 n, u64 p, u64 d) {
  require_divisor(p, d, "is_dth_power_residue");
  if (n == 0 || n >= p) throw DomainError("is_dth_power_residue: n must lie in [1, p)");
  return mod_pow(n, (p - 1) / d, p) == 1;
}

u64 least_power_nonresidue(u64 p, u64 d) {
  require_divisor(p, d, "least_power_nonresidue");
  if (d < 2) throw DomainError("least_power_nonresidue: d must be at least 2");
  const u64 exponent = (p - 1) / d;
  for (u64 n = 2; n < p; ++n)
    if (mod_pow(n, exponent, p) != 1) return n;
  // unreachable for prime p: only (p - 1) / d < p - 1 elements are residues
  throw DomainError("least_power_nonresidue: p must be prime");
}

u64 psi_count(u64 x, double y, const PsiOptions& options) {
  if (x < 1) throw DomainError("psi_count: x must be at least 1");
  if (!(y >= 2)) throw DomainError("psi_count: y must be at least 2");
  if (x > options.x_limit)
    throw CapacityError("psi_count: x exceeds the configured limit " + std::to_string(options.x_limit));

  // Dividing out every prime q < min(y, sqrt(x) + 1) leaves a residual that is
  // either 1, a single prime above sqrt(x), or (when y <= sqrt(x)) a number
  // whose prime factors are all >= y. Smooth iff the residual is 1 or below y.
  u64 root = static_cast<u64>(std::sqrt(static_cast<double>(x)));
  while (root * root > x) --root;
  while ((root + 1) * (root + 1) <= x) ++root;
  const double sieve_bound = std::min(y, static_cast<double>(root) + 1);
  std::vector<u64> primes;
  if (sieve_bound > 2) for_each_prime(2, static_cast<u64>(std::ceil(sieve_bound)) - 1, [&](u64 q) {
      if (static_cast<double>(q) < sieve_bound) primes.push_back(q);
    });

  const std::size_t seg = std::max<std::size_t>(options.segment_size, 64);
  std::vector<u64> residual(seg);
  u64 count = 0;
  for (u64 lo = 1; lo <= x; lo += seg) {
    const u64 len = std::min<u64>(seg, x - lo + 1);
    for (u64 i = 0; i < len; ++i) residual[i] = lo + i;
    for (u64 q : primes) {
      for (u64 power = q;; power *= q) {
        for (u64 n = (lo + power - 1) / power * power; n < lo + len; n += power) residual[n - lo] /= q;
        if (power > x / q) break;
      }
    }
    for (u64 i = 0; i < len; ++i)
      if (residual[i] == 1 || static_cast<double>(residual[i]) < y) ++count;
    if (x - lo < seg) break;
  }
  return count;
}

PsiBoundReport check_psi_lower_bound(u64 x, double y, const DickmanTable& table,
                                     const PsiOptions& options) {
  PsiBoundReport report{};
  report.x = x;
  report.y = y;
  report.psi = psi_count(x, y, options);
  report.u = std::max(0.0, std::log(static_cast<double>(x)) / std::log(y));
  report.x_rho_u = static_cast<double>(x) * table.rho(report.u);
  report.holds = static_cast<double>(report.psi) >= report.x_rho_u;
  report.margin = static_cast<double>(report.psi) / report.x_rho_u;
  return report;
}

CharacterSumReport character_partial_sum_diagnostic(u64 p, u64 d, u64 h,
                                                    const CharacterSumOptions& options) {
  if (!is_prime(p)) throw DomainError("character_partial_sum_diagnostic: p must be prime");
  require_divisor(p, d, "character_partial_sum_diagnostic");
  if (d < 2) throw DomainError("character_partial_sum_diagnostic: d must be at least 2");
  if (h == 0 || h >= p) throw DomainError("character_partial_sum_diagnostic: H must lie in [1, p)");
  if (p > options.p_limit)
    throw CapacityError("character_partial_sum_diagnostic: p exceeds the discrete-log table limit " +
                        std::to_string(options.p_limit));

  const auto logs = full_log_table(p);
  // chi_k(n) depends on log(n) mod d only; histogram those classes first
  std::vector<u64> classes(d, 0);
  for (u64 n = 1; n <= h; ++n) ++classes[logs[n] % d];

  CharacterSumReport report{0.0, 1};
  for (u64 k = 1; k < d; ++k) {
    Kahan re, im;
    for (u64 r = 0; r < d; ++r) {
      if (classes[r] == 0) continue;
      const u64 phase = static_cast<u64>(static_cast<u128>(k) * r % d);
      const double angle = 2 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(d);
      re.add(static_cast<double>(classes[r]) * std::cos(angle));
      im.add(static_cast<double>(classes[r]) * std::sin(angle));
    }
    const double normalized = std::hypot(re.sum, im.sum) / static_cast<double>(h);
    if (normalized > report.max_normalized_sum) report = {normalized, k};
  }
  return report;
}

}  // namespace lpr
