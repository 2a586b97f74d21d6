#include "lpr/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lpr/errors.hpp"

namespace lpr {

namespace {

u64 ceil_sqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n) --r;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Discrete logarithms

DlogContext::DlogContext(u64 p, const DlogOptions& options)
    : DlogContext(p, p >= 3 ? factorize(p - 1) : FactoredInteger{}, options) {}

DlogContext::DlogContext(u64 p, FactoredInteger p_minus_1, const DlogOptions& options)
    : p_(p), p_minus_1_(std::move(p_minus_1)) {
  if (p < 3 || !is_prime(p) || p >= kMaxSupported)
    throw DomainError("DlogContext: p must be an odd prime below 2^62");
  if (p_minus_1_.value() != p - 1) throw DomainError("DlogContext: factorization does not match p - 1");
  generator_ = least_primitive_root(p_, p_minus_1_);

  if (p_ <= options.full_table_limit) {
    full_ = full_log_table(p_);
    return;
  }
  const u64 order = p_ - 1;
  for (const auto& f : p_minus_1_.factors()) {
    Subgroup s{};
    s.prime = f.prime;
    s.exponent = f.exponent;
    s.prime_power = 1;
    for (unsigned e = 0; e < f.exponent; ++e) s.prime_power *= f.prime;
    s.base = mod_pow(generator_, order / s.prime_power, p_);
    s.base_inverse = inverse_mod(s.base, p_);
    s.gamma = mod_pow(s.base, s.prime_power / s.prime, p_);
    s.m = ceil_sqrt(s.prime);
    if (s.m > options.max_baby_steps)
      throw CapacityError("DlogContext: baby-step table for q = " + std::to_string(f.prime) +
                          " exceeds the configured cap");
    s.baby.reserve(s.m);
    u64 power = 1;
    for (u64 j = 0; j < s.m; ++j) {
      s.baby.emplace(power, j);
      power = mul_mod(power, s.gamma, p_);
    }
    s.giant = inverse_mod(mod_pow(s.gamma, s.m, p_), p_);
    subgroups_.push_back(std::move(s));
  }
}

u64 DlogContext::log_in_subgroup(const Subgroup& s, u64 a) const {
  // digits of x = log_base(h) in base q, each found by BSGS in <gamma>
  const u64 h = mod_pow(a, (p_ - 1) / s.prime_power, p_);
  u64 x = 0, q_power = 1;
  for (unsigned k = 0; k < s.exponent; ++k) {
    const u64 shifted = mul_mod(h, mod_pow(s.base_inverse, x, p_), p_);
    const u64 target = mod_pow(shifted, s.prime_power / (q_power * s.prime), p_);
    u64 digit = s.prime;  // sentinel
    u64 probe = target;
    for (u64 i = 0; i <= s.m; ++i) {
      if (auto it = s.baby.find(probe); it != s.baby.end()) {
        digit = (i * s.m + it->second) % s.prime;
        break;
      }
      probe = mul_mod(probe, s.giant, p_);
    }
    if (digit == s.prime) throw ContractError("DlogContext: element outside the subgroup generated");
    x += digit * q_power;
    q_power *= s.prime;
  }
  return x;
}

u64 DlogContext::log(u64 a) const {
  if (a % p_ == 0) throw DomainError("discrete_log: a must be nonzero mod p");
  a %= p_;
  if (!full_.empty()) return full_[a];
  // CRT over the prime powers of p - 1
  u64 result = 0, modulus = 1;
  for (const auto& s : subgroups_) {
    const u64 x = log_in_subgroup(s, a);
    // result + modulus * t = x (mod q^e)
    const u64 diff = (x + s.prime_power - result % s.prime_power) % s.prime_power;
    const u64 t = mul_mod(diff, inverse_mod(modulus % s.prime_power, s.prime_power), s.prime_power);
    result += modulus * t;
    modulus *= s.prime_power;
  }
  return result;
}

std::vector<std::uint32_t> full_log_table(u64 p) {
  if (p < 3 || !is_prime(p)) throw DomainError("full_log_table: p must be an odd prime");
  if (p > std::numeric_limits<std::uint32_t>::max())
    throw CapacityError("full_log_table: p too large for a dense table");
  const u64 g = least_primitive_root(p);
  std::vector<std::uint32_t> logs(p, 0);
  u64 power = 1;
  for (u64 e = 0; e + 1 < p; ++e) {
    logs[power] = static_cast<std::uint32_t>(e);
    power = mul_mod(power, g, p);
  }
  return logs;
}

// ---------------------------------------------------------------------------
// Residue constraints and CRT

ResidueConstraintSet::ResidueConstraintSet(std::initializer_list<ResidueConstraint> constraints) {
  for (const auto& c : constraints) add(c.modulus, c.residue);
}

void ResidueConstraintSet::add(u64 modulus, u64 residue) {
  if (!is_prime(modulus)) throw DomainError("ResidueConstraintSet: modulus must be prime");
  if (residue >= modulus) throw DomainError("ResidueConstraintSet: residue must be reduced");
  for (const auto& c : constraints_)
    if (c.modulus == modulus) throw DomainError("ResidueConstraintSet: duplicate modulus " + std::to_string(modulus));
  constraints_.push_back({modulus, residue});
}

std::vector<u64> ResidueConstraintSet::moduli() const {
  std::vector<u64> out;
  for (const auto& c : constraints_) out.push_back(c.modulus);
  return out;
}

u64 ResidueConstraintSet::modulus_product() const {
  u64 product = 1;
  for (const auto& c : constraints_) {
    const u128 next = static_cast<u128>(product) * c.modulus;
    if (next >= kMaxSupported) throw CapacityError("ResidueConstraintSet: modulus product exceeds 2^62");
    product = static_cast<u64>(next);
  }
  return product;
}

CrtSolution crt_combine(const ResidueConstraintSet& constraints) {
  CrtSolution solution{0, 1};
  for (const auto& c : constraints.constraints()) {
    const u64 diff = (c.residue + c.modulus - solution.residue % c.modulus) % c.modulus;
    const u64 t = mul_mod(diff, inverse_mod(solution.modulus % c.modulus, c.modulus), c.modulus);
    const u128 next = static_cast<u128>(solution.modulus) * c.modulus;
    if (next >= kMaxSupported) throw CapacityError("crt_combine: modulus product exceeds 2^62");
    solution.residue += solution.modulus * t;
    solution.modulus = static_cast<u64>(next);
  }
  return solution;
}

// ---------------------------------------------------------------------------
// Jacobsthal function

u64 jacobsthal_exact(const FactoredInteger& n, const JacobsthalOptions& options) {
  const u64 rad = n.radical();
  if (rad > options.scan_limit)
    throw CapacityError("jacobsthal_exact: radical " + std::to_string(rad) + " exceeds the scan limit");
  const auto primes = n.primes();
  // positions 1 .. rad + 1; both ends are coprime to rad
  constexpr u64 kSegment = u64{1} << 16;
  std::vector<char> coprime;
  u64 last = 1, widest = 1;
  for (u64 lo = 2; lo <= rad + 1; lo += kSegment) {
    const u64 hi = std::min(rad + 2, lo + kSegment);  // exclusive
    coprime.assign(hi - lo, 1);
    for (u64 q : primes)
      for (u64 m = (lo + q - 1) / q * q; m < hi; m += q) coprime[m - lo] = 0;
    for (u64 v = lo; v < hi; ++v) {
      if (!coprime[v - lo]) continue;
      widest = std::max(widest, v - last);
      last = v;
    }
  }
  return widest;
}

namespace {

class CoverSearch {
 public:
  CoverSearch(std::span<const u64> primes, u64 length) : length_(length), covered_(length, 0) {
    for (u64 q : primes) {
      if (q < length)
        small_.push_back(q);
      else
        ++large_;
    }
    used_.assign(small_.size(), 0);
  }

  bool coverable() { return search(0, large_); }

 private:
  bool search(u64 pos, u64 large_left) {
    while (pos < length_ && covered_[pos]) ++pos;
    if (pos == length_) return true;

    u64 uncovered = 0;
    for (u64 i = pos; i < length_; ++i) uncovered += !covered_[i];
    u64 capacity = large_left;
    const u64 span = length_ - pos;
    for (std::size_t k = 0; k < small_.size(); ++k)
      if (!used_[k]) capacity += (span + small_[k] - 1) / small_[k];
    if (capacity < uncovered) return false;

    for (std::size_t k = 0; k < small_.size(); ++k) {
      if (used_[k]) continue;
      used_[k] = 1;
      std::vector<u64> marked;
      for (u64 i = pos; i < length_; i += small_[k])
        if (!covered_[i]) {
          covered_[i] = 1;
          marked.push_back(i);
        }
      const bool ok = search(pos + 1, large_left);
      for (u64 i : marked) covered_[i] = 0;
      used_[k] = 0;
      if (ok) return true;
    }
    if (large_left > 0) {
      covered_[pos] = 1;
      const bool ok = search(pos + 1, large_left - 1);
      covered_[pos] = 0;
      if (ok) return true;
    }
    return false;
  }

  u64 length_;
  std::vector<char> covered_;
  std::vector<u64> small_;
  std::vector<char> used_;
  u64 large_ = 0;
};

}  // namespace

u64 jacobsthal_cover_search(std::span<const u64> primes) {
  // Placing the window start anywhere mod P realizes every choice of one
  // residue class per prime (CRT), so j - 1 is the longest run [0, L) that
  // one class per prime can cover. Any omega primes cover omega positions.
  u64 length = primes.size() + 1;
  while (CoverSearch(primes, length).coverable()) ++length;
  return length;
}

std::optional<PigeonholeBound> jacobsthal_pigeonhole_bound(const FactoredInteger& n) {
  const u64 omega = n.omega();
  for (const auto& f : n.factors())
    if (f.prime <= omega) return std::nullopt;
  return PigeonholeBound{omega, omega + 1};
}

u64 min_avoiding(const ResidueConstraintSet& constraints, const JacobsthalOptions& options) {
  const auto cs = constraints.constraints();
  u64 m = 0;
  for (;; ++m) {
    bool avoids = true;
    for (const auto& c : cs)
      if (m % c.modulus == c.residue) {
        avoids = false;
        break;
      }
    if (avoids) break;
  }
  const auto moduli = constraints.moduli();
  u64 j = 0;
  if (constraints.empty()) {
    j = 1;
  } else {
    std::vector<u64> sorted = moduli;
    std::sort(sorted.begin(), sorted.end());
    std::vector<PrimePower> factors;
    for (u64 q : sorted) factors.push_back({q, 1});
    u128 product = 1;
    for (u64 q : sorted) product = std::min<u128>(product * q, u128{options.scan_limit} + 1);
    if (product <= options.scan_limit)
      j = jacobsthal_exact(FactoredInteger::from_trusted(static_cast<u64>(product), std::move(factors)), options);
    else
      j = jacobsthal_cover_search(moduli);
  }
  if (m + 1 > j)
    throw ContractError("min_avoiding: m = " + std::to_string(m) + " exceeds j(P(A)) - 1 = " +
                        std::to_string(j - 1));
  return m;
}

}  // namespace lpr
