#include "lpr/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lpr/errors.hpp"

namespace lpr {

namespace {

constexpr u64 kTrialBound = 1'000'000;
constexpr std::size_t kMaxDistinctPrimes = 16;  // 15 suffice below 2^64

u64 isqrt(u64 n) noexcept {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<u64> simple_sieve(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

const std::vector<u64>& trial_primes() {
  static const std::vector<u64> primes = simple_sieve(kTrialBound);
  return primes;
}

// Marks composites of [lo, lo + flags.size()) given all primes up to sqrt(hi).
void mark_segment(u64 lo, std::vector<char>& flags, std::span<const u64> base) {
  std::fill(flags.begin(), flags.end(), 1);
  const u64 hi = lo + flags.size();  // exclusive
  for (u64 q : base) {
    if (q * q >= hi) break;
    u64 start = std::max(q * q, (lo + q - 1) / q * q);
    for (u64 m = start; m < hi; m += q) flags[m - lo] = 0;
  }
  for (u64 n = lo; n < std::min<u64>(hi, 2); ++n) flags[n - lo] = 0;
}

u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
    constexpr u64 kBatch = 128;
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = gcd(q, n);
        k += kBatch;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_brent(n);
  split_into(d, out);
  split_into(n / d, out);
}

}  // namespace

FactoredInteger FactoredInteger::from_factors(std::vector<PrimePower> factors) {
  FactoredInteger result;
  u64 previous = 0;
  for (const auto& f : factors) {
    if (f.exponent == 0 || f.prime <= previous || !is_prime(f.prime))
      throw DomainError("factor list must hold strictly increasing primes with positive exponents");
    previous = f.prime;
    for (unsigned e = 0; e < f.exponent; ++e) {
      u128 next = static_cast<u128>(result.value_) * f.prime;
      if (next >= kMaxSupported) throw DomainError("factored value exceeds 2^62");
      result.value_ = static_cast<u64>(next);
    }
  }
  result.factors_ = std::move(factors);
  return result;
}

std::vector<u64> FactoredInteger::primes() const {
  std::vector<u64> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.prime);
  return out;
}

u64 FactoredInteger::radical() const noexcept {
  u64 r = 1;
  for (const auto& f : factors_) r *= f.prime;
  return r;
}

u64 FactoredInteger::totient() const noexcept {
  u64 t = 1;
  for (const auto& f : factors_) {
    t *= f.prime - 1;
    for (unsigned e = 1; e < f.exponent; ++e) t *= f.prime;
  }
  return t;
}

int FactoredInteger::mobius() const noexcept {
  for (const auto& f : factors_)
    if (f.exponent > 1) return 0;
  return factors_.size() % 2 == 0 ? 1 : -1;
}

bool FactoredInteger::divisible_by(u64 prime) const noexcept {
  return std::any_of(factors_.begin(), factors_.end(),
                     [prime](const PrimePower& f) { return f.prime == prime; });
}

std::vector<u64> sieve_primes(u64 limit, const SieveOptions& options) {
  if (limit < 2) throw DomainError("sieve_primes: limit must be at least 2");
  // pi(x) < 1.26 x / ln x for x > 1
  const double estimate = 1.26 * static_cast<double>(limit) / std::log(static_cast<double>(limit)) + 16;
  if (estimate * sizeof(u64) > static_cast<double>(options.memory_budget_bytes))
    throw CapacityError("sieve_primes: prime list up to " + std::to_string(limit) +
                        " exceeds the memory budget; use the segmented for_each_prime");
  std::vector<u64> primes;
  primes.reserve(static_cast<std::size_t>(estimate));
  for_each_prime(2, limit, [&](u64 p) { primes.push_back(p); }, options);
  return primes;
}

void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& visit,
                    const SieveOptions& options) {
  if (hi < 2 || lo > hi) return;
  if (hi >= kMaxSupported) throw DomainError("for_each_prime: bound exceeds 2^62");
  lo = std::max<u64>(lo, 2);
  const std::vector<u64> base = simple_sieve(isqrt(hi) + 1);
  const std::size_t seg = std::max<std::size_t>(options.segment_size, 64);
  std::vector<char> flags;
  for (u64 start = lo; start <= hi; start += seg) {
    const u64 len = std::min<u64>(seg, hi - start + 1);
    flags.assign(len, 1);
    mark_segment(start, flags, base);
    for (u64 i = 0; i < len; ++i)
      if (flags[i]) visit(start + i);
    if (hi - start < seg) break;
  }
}

void for_each_prime_with_pm1(u64 lo, u64 hi,
                             const std::function<void(u64, const FactoredInteger&)>& visit,
                             const SieveOptions& options) {
  if (hi < 2 || lo > hi) return;
  if (hi >= kMaxSupported) throw DomainError("for_each_prime_with_pm1: bound exceeds 2^62");
  lo = std::max<u64>(lo, 2);
  const std::vector<u64> base = simple_sieve(isqrt(hi) + 1);
  const std::size_t seg = std::clamp<std::size_t>(options.segment_size, 64, std::size_t{1} << 16);

  std::vector<char> flags;
  std::vector<u64> residual(seg);
  std::vector<std::uint8_t> count(seg);
  std::vector<PrimePower> slots(seg * kMaxDistinctPrimes);

  for (u64 start = lo; start <= hi; start += seg) {
    const u64 len = std::min<u64>(seg, hi - start + 1);
    flags.assign(len, 1);
    mark_segment(start, flags, base);
    // index i stands for p = start + i and n = p - 1
    for (u64 i = 0; i < len; ++i) {
      residual[i] = flags[i] ? start + i - 1 : 0;
      count[i] = 0;
    }
    const u64 n_lo = start - 1;
    const u64 n_hi = start + len - 1;  // exclusive
    for (u64 q : base) {
      if (q * q >= n_hi) break;
      for (u64 n = (n_lo + q - 1) / q * q; n < n_hi; n += q) {
        const u64 i = n - n_lo;
        if (!flags[i] || n == 0) continue;
        unsigned e = 0;
        do {
          residual[i] /= q;
          ++e;
        } while (residual[i] % q == 0);
        slots[i * kMaxDistinctPrimes + count[i]++] = {q, e};
      }
    }
    for (u64 i = 0; i < len; ++i) {
      if (!flags[i]) continue;
      if (residual[i] > 1) slots[i * kMaxDistinctPrimes + count[i]++] = {residual[i], 1};
      std::vector<PrimePower> factors(slots.begin() + i * kMaxDistinctPrimes,
                                      slots.begin() + i * kMaxDistinctPrimes + count[i]);
      visit(start + i, FactoredInteger::from_trusted(start + i - 1, std::move(factors)));
    }
    if (hi - start < seg) break;
  }
}

u64 mod_pow(u64 base, u64 exponent, u64 modulus) noexcept {
  if (modulus == 1) return 0;
  u64 result = 1;
  base %= modulus;
  while (exponent > 0) {
    if (exponent & 1) result = mul_mod(result, base, modulus);
    base = mul_mod(base, base, modulus);
    exponent >>= 1;
  }
  return result;
}

bool is_prime(u64 n) noexcept {
  if (n < 2) return false;
  static constexpr u64 kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 q : kSmall) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve witnesses are exact for n < 3.3 * 10^24.
  for (u64 a : kSmall) {
    u64 x = mod_pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactoredInteger factorize(u64 n) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  if (n >= (u64{1} << 63)) throw DomainError("factorize: n must be below 2^63");
  std::vector<PrimePower> factors;
  u64 rest = n;
  for (u64 q : trial_primes()) {
    if (q * q > rest) break;
    if (rest % q != 0) continue;
    unsigned e = 0;
    do {
      rest /= q;
      ++e;
    } while (rest % q == 0);
    factors.push_back({q, e});
  }
  if (rest > 1) {
    std::vector<u64> large;
    if (rest < kTrialBound * kTrialBound)
      large.push_back(rest);
    else
      split_into(rest, large);
    std::sort(large.begin(), large.end());
    for (u64 q : large) {
      if (!factors.empty() && factors.back().prime == q)
        ++factors.back().exponent;
      else
        factors.push_back({q, 1});
    }
  }
  return FactoredInteger::from_trusted(n, std::move(factors));
}

u64 multiplicative_order(u64 a, u64 p, const FactoredInteger& p_minus_1) {
  if (p < 2) throw DomainError("multiplicative_order: modulus must be prime");
  if (a % p == 0) throw DomainError("multiplicative_order: a must be coprime to p");
  u64 order = p - 1;
  for (const auto& f : p_minus_1.factors()) {
    for (unsigned e = 0; e < f.exponent; ++e) order /= f.prime;
    u64 x = mod_pow(a, order, p);
    while (x != 1) {
      x = mod_pow(x, f.prime, p);
      order *= f.prime;
    }
  }
  return order;
}

u64 multiplicative_order(u64 a, u64 p) { return multiplicative_order(a, p, factorize(p - 1)); }

bool is_primitive_root(u64 a, u64 p, const FactoredInteger& p_minus_1) {
  if (a % p == 0) return false;
  if (p == 2) return a % 2 == 1;
  for (u64 q : p_minus_1.primes())
    if (mod_pow(a, (p - 1) / q, p) == 1) return false;
  return true;
}

bool is_primitive_root(u64 a, u64 p) { return is_primitive_root(a, p, factorize(p - 1)); }

u64 least_primitive_root(u64 p, const FactoredInteger& p_minus_1) {
  if (p < 3 || !is_prime(p)) throw DomainError("least_primitive_root: p must be an odd prime");
  for (u64 a = 2;; ++a)
    if (is_primitive_root(a, p, p_minus_1)) return a;
}

u64 least_primitive_root(u64 p) {
  if (p < 3) throw DomainError("least_primitive_root: p must be an odd prime");
  return least_primitive_root(p, factorize(p - 1));
}

std::size_t omega_up_to(const FactoredInteger& n, double t) noexcept {
  std::size_t count = 0;
  for (const auto& f : n.factors())
    if (static_cast<double>(f.prime) < t) ++count;
  return count;
}

bool is_y_rough(const FactoredInteger& p_minus_1, double y) noexcept {
  return std::all_of(p_minus_1.factors().begin(), p_minus_1.factors().end(), [y](const PrimePower& f) {
    return f.prime == 2 || static_cast<double>(f.prime) >= y;
  });
}

u64 gcd(u64 a, u64 b) noexcept { return std::gcd(a, b); }

u64 inverse_mod(u64 a, u64 m) {
  // extended Euclid on signed 128-bit values
  __int128 old_r = a % m, r = m, old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    std::swap(old_r, r);
    r -= q * old_r;
    std::swap(old_s, s);
    s -= q * old_s;
  }
  if (old_r != 1) throw DomainError("inverse_mod: argument not invertible");
  __int128 result = old_s % static_cast<__int128>(m);
  if (result < 0) result += m;
  return static_cast<u64>(result);
}

PrimeRecord make_prime_record(u64 p, std::span<const double> thresholds) {
  if (!is_prime(p)) throw DomainError("make_prime_record: p must be prime");
  PrimeRecord record{p, factorize(p - 1), {}};
  for (double y : thresholds) record.is_rough_at[y] = is_y_rough(record.p_minus_1, y);
  return record;
}

}  // namespace lpr
