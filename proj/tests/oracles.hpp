#pragma once

// Deliberately naive reference implementations. Nothing here shares code
// with the library beyond the integer typedefs.

#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m); }

inline std::vector<std::pair<u64, unsigned>> trial_factor(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    unsigned e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    out.emplace_back(q, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool trial_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

inline u64 brute_order(u64 a, u64 p) {
  u64 x = a % p, k = 1;
  while (x != 1) {
    x = mulmod(x, a, p);
    ++k;
  }
  return k;
}

inline u64 brute_least_primitive_root(u64 p) {
  for (u64 g = 2;; ++g)
    if (brute_order(g, p) == p - 1) return g;
}

/// The set {x^d mod p : 1 <= x < p}.
inline std::set<u64> power_residues(u64 p, u64 d) {
  std::set<u64> out;
  for (u64 x = 1; x < p; ++x) {
    u64 v = 1;
    for (u64 i = 0; i < d; ++i) v = mulmod(v, x, p);
    out.insert(v);
  }
  return out;
}

inline u64 brute_least_nonresidue(u64 p, u64 d) {
  const auto residues = power_residues(p, d);
  for (u64 n = 2;; ++n)
    if (!residues.count(n % p)) return n;
}

/// Number of n <= x whose prime factors are all < y.
inline u64 brute_psi(u64 x, double y) {
  u64 count = 0;
  for (u64 n = 1; n <= x; ++n) {
    u64 largest = 1;
    for (const auto& f : trial_factor(n)) largest = f.first;
    if (n == 1 || static_cast<double>(largest) < y) ++count;
  }
  return count;
}

inline u64 gcd(u64 a, u64 b) {
  while (b) {
    const u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Least m such that every window of m consecutive integers contains one
/// coprime to n, checking every window start over a full period.
inline u64 brute_jacobsthal(u64 n) {
  u64 rad = 1;
  for (const auto& f : trial_factor(n)) rad *= f.first;
  for (u64 m = 1;; ++m) {
    bool all = true;
    for (u64 start = 0; start < rad && all; ++start) {
      bool hit = false;
      for (u64 k = 0; k < m && !hit; ++k) hit = gcd(start + k, rad) == 1;
      all = hit;
    }
    if (all) return m;
  }
}

/// Smallest x in [0, prod moduli) meeting every congruence.
inline u64 brute_crt(const std::vector<std::pair<u64, u64>>& constraints) {
  u64 modulus = 1;
  for (const auto& c : constraints) modulus *= c.first;
  for (u64 x = 0; x < modulus; ++x) {
    bool ok = true;
    for (const auto& c : constraints) ok = ok && x % c.first == c.second;
    if (ok) return x;
  }
  return modulus;
}

/// Smallest m >= 0 outside every forbidden class.
inline u64 brute_min_avoiding(const std::vector<std::pair<u64, u64>>& forbidden) {
  for (u64 m = 0;; ++m) {
    bool ok = true;
    for (const auto& c : forbidden) ok = ok && m % c.first != c.second;
    if (ok) return m;
  }
}

inline u64 brute_dlog(u64 g, u64 a, u64 p) {
  u64 x = 1;
  for (u64 e = 0; e < p - 1; ++e) {
    if (x == a % p) return e;
    x = mulmod(x, g, p);
  }
  return p;
}

/// Dickman rho from its power series on each [k-1, k] in xi = k - u.
///
/// u rho'(u) = -rho(u-1) becomes (k - xi) c'(xi) = c_prev(xi), i.e.
///   c_{i+1} = (c_prev_i + i c_i) / (k (i + 1)),
/// with c_0 fixed by continuity at u = k - 1 (xi = 1).
class RhoSeries {
 public:
  explicit RhoSeries(int k_max, int terms = 90) : terms_(terms) {
    coefficients_.push_back(std::vector<long double>(terms, 0.0L));
    coefficients_[0][0] = 1.0L;  // [0, 1]
    coefficients_.push_back(std::vector<long double>(terms, 0.0L));
    coefficients_[1][0] = 1.0L;  // [0, 1] again as interval k = 1
    for (int k = 2; k <= k_max; ++k) {
      const auto& prev = coefficients_[k - 1];
      std::vector<long double> c(terms, 0.0L);
      for (int i = 0; i + 1 < terms; ++i) c[i + 1] = (prev[i] + i * c[i]) / (static_cast<long double>(k) * (i + 1));
      // u rho(u) = integral of rho over [u - 1, u] at u = k; every term is positive
      long double window = 0;
      for (int i = 1; i < terms; ++i) window += c[i] / (i + 1);
      c[0] = window / (k - 1);
      coefficients_.push_back(std::move(c));
    }
  }

  long double operator()(long double u) const {
    if (u <= 1) return 1.0L;
    const int k = static_cast<int>(std::ceil(u));
    const long double xi = k - u;
    const auto& c = coefficients_.at(k);
    long double v = 0;
    for (int i = terms_ - 1; i >= 0; --i) v = v * xi + c[i];
    return v;
  }

 private:
  int terms_;
  std::vector<std::vector<long double>> coefficients_;
};

}  // namespace oracle
