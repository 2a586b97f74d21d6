#include "lpr/constructor.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json_util.hpp"
#include "lpr/errors.hpp"
#include "lpr/residues.hpp"

namespace lpr {

using detail::Json;
using detail::round12;

namespace {

bool is_nonresidue(u64 n, u64 p, u64 q) { return mod_pow(n % p, (p - 1) / q, p) != 1; }

std::string list(const std::vector<u64>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + "}";
}

}  // namespace

u64 Level::prime_product() const {
  u64 product = 1;
  for (u64 q : primes) product *= q;
  return product;
}

ResidueProfile residue_profile(u64 p) {
  if (p < 3 || !is_prime(p)) throw DomainError("residue_profile: p must be an odd prime");
  return residue_profile(p, factorize(p - 1));
}

ResidueProfile residue_profile(u64 p, const FactoredInteger& p_minus_1) {
  if (p < 3 || p_minus_1.value() != p - 1) throw DomainError("residue_profile: p must be an odd prime");
  ResidueProfile profile{p, p_minus_1, {}};
  for (u64 q : p_minus_1.primes()) profile.entries.push_back({q, least_power_nonresidue(p, q)});
  std::sort(profile.entries.begin(), profile.entries.end(), [](const ResidueEntry& a, const ResidueEntry& b) {
    return a.g_q != b.g_q ? a.g_q < b.g_q : a.q < b.q;
  });
  return profile;
}

Grouping group_levels(const ResidueProfile& profile) {
  Grouping grouping{profile.p, profile.p_minus_1, {}};
  for (const auto& e : profile.entries) {
    if (grouping.levels.empty() || grouping.levels.back().g != e.g_q)
      grouping.levels.push_back({{}, e.g_q, 0});
    grouping.levels.back().primes.push_back(e.q);
  }
  u64 divisor = profile.p_minus_1.radical();
  for (auto& level : grouping.levels) {
    std::sort(level.primes.begin(), level.primes.end());
    level.divisor = divisor;
    divisor /= level.prime_product();
  }
  return grouping;
}

bool verify_remark2(const Grouping& grouping, const DlogContext& ctx) {
  const auto& levels = grouping.levels;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const u64 log_g = ctx.log(levels[j].g);
    for (std::size_t i = j + 1; i < levels.size(); ++i)
      for (u64 q : levels[i].primes)
        if (log_g % q != 0) return false;
  }
  return true;
}

LiftResult lift_step(u64 y, u64 z, const std::vector<u64>& level_a, const std::vector<u64>& later_b,
                     const DlogContext& ctx) {
  if (level_a.empty()) throw DomainError("lift_step: level A must be nonempty");
  const u64 p = ctx.p();
  for (u64 q : level_a)
    if (!is_nonresidue(y, p, q))
      throw ContractError("lift_step: y = " + std::to_string(y) + " is a q-th power residue for q = " + std::to_string(q) + " in A");
  for (u64 q : later_b) {
    if (is_nonresidue(y, p, q))
      throw ContractError("lift_step: y = " + std::to_string(y) + " is not a q-th power residue for q = " + std::to_string(q) + " in B");
    if (!is_nonresidue(z, p, q))
      throw ContractError("lift_step: z = " + std::to_string(z) + " is a q-th power residue for q = " + std::to_string(q) + " in B");
  }

  // y^a z is a q-th power residue iff a log y + log z = 0 (mod q)
  const u64 log_y = ctx.log(y), log_z = ctx.log(z);
  std::vector<std::pair<u64, u64>> forbidden;
  for (u64 q : level_a) {
    const u64 inv = inverse_mod(log_y % q, q);
    forbidden.emplace_back(q, mul_mod((q - log_z % q) % q, inv, q));
  }
  auto admissible = [&](u64 m) {
    return std::none_of(forbidden.begin(), forbidden.end(),
                        [m](const auto& f) { return m % f.first == f.second; });
  };

  const u64 j = jacobsthal_cover_search(level_a);
  LiftResult result{0, 0, false, j};
  bool found = false;
  for (u64 m = 1; m < j; ++m)
    if (admissible(m)) {
      result.m = m;
      found = true;
      break;
    }
  if (!found) {
    if (!admissible(0))
      throw ContractError("lift_step: no admissible m in [0, j(P(A)) - 1] for A = " + list(level_a));
    result.zero_fallback = true;
  }
  result.product = mul_mod(mod_pow(y, result.m, p), z % p, p);

  for (const auto* set : {&level_a, &later_b})
    for (u64 q : *set)
      if (!is_nonresidue(result.product, p, q))
        throw ContractError("lift_step: product " + std::to_string(result.product) +
                            " is a q-th power residue for q = " + std::to_string(q));
  return result;
}

double loglog(double x, bool raw) {
  const double v = std::log(std::log(x));
  return raw ? v : std::max(1.0, v);
}

double condition2_sum(const FactoredInteger& p_minus_1, bool raw_loglog) {
  double sum = 0;
  for (u64 q : p_minus_1.primes())
    if (q != 2) sum += loglog(static_cast<double>(q), raw_loglog) / std::log(static_cast<double>(q));
  return sum;
}

BoundExponents bound_exponents(const Grouping& grouping,
                               const std::vector<std::optional<u64>>& jacobsthal, DickmanTable& table,
                               double epsilon) {
  BoundExponents bounds;
  double sum = 0, sum_minus_1 = 0;
  const auto& levels = grouping.levels;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    double j = 0;
    if (i < jacobsthal.size() && jacobsthal[i]) {
      j = static_cast<double>(*jacobsthal[i]);
    } else {
      // surrogate: the pigeonhole bound when it applies, else the condition-(1) ceiling
      const u64 omega = levels[i].primes.size();
      const bool pigeonhole = std::all_of(levels[i].primes.begin(), levels[i].primes.end(),
                                          [omega](u64 q) { return q > omega; });
      j = static_cast<double>(pigeonhole ? omega + 1 : 10 * omega);
      bounds.main1_surrogate = true;
    }
    const double u = u_of_extending(static_cast<double>(levels[i].divisor), table);
    sum += j / u;
    sum_minus_1 += (j - 1) / u;
  }
  bounds.main1 = kBurgessExponent + sum + epsilon;
  bounds.main1_j_minus_1 = kBurgessExponent + sum_minus_1 + epsilon;
  bounds.main3 = bound_exponent_main3(grouping.p_minus_1, table, epsilon);
  return bounds;
}

double bound_exponent_main1(const Grouping& grouping, DickmanTable& table, double epsilon) {
  std::vector<std::optional<u64>> js;
  for (const auto& level : grouping.levels) js.emplace_back(jacobsthal_cover_search(level.primes));
  return bound_exponents(grouping, js, table, epsilon).main1;
}

double bound_exponent_main3(const FactoredInteger& p_minus_1, DickmanTable& table, double epsilon) {
  double sum = 0;
  u64 b = 1;
  const auto primes = p_minus_1.primes();
  for (std::size_t j = 0; j < primes.size(); ++j) {
    b *= primes[j];
    if (j >= 1) sum += 10.0 / u_of_extending(static_cast<double>(b), table);
  }
  return kBurgessExponent + sum + epsilon;
}

ConstructionTrace construct_simultaneous_nonresidue(u64 p, DickmanTable& table, double epsilon) {
  if (p < 3 || !is_prime(p)) throw DomainError("construct_simultaneous_nonresidue: p must be an odd prime");
  return construct_simultaneous_nonresidue(p, factorize(p - 1), table, epsilon);
}

ConstructionTrace construct_simultaneous_nonresidue(u64 p, const FactoredInteger& p_minus_1,
                                                    DickmanTable& table, double epsilon) {
  if (p < 3 || p_minus_1.value() != p - 1)
    throw DomainError("construct_simultaneous_nonresidue: p must be an odd prime");
  ConstructionTrace trace;
  trace.epsilon = epsilon;
  trace.grouping = group_levels(residue_profile(p, p_minus_1));
  const auto& levels = trace.grouping.levels;
  const std::size_t s = levels.size();
  const DlogContext ctx(p, p_minus_1);

  auto fail = [&](const std::string& what) { throw ContractError(what, trace_json(trace, true)); };

  trace.remark2 = verify_remark2(trace.grouping, ctx);
  if (!trace.remark2) fail("construct: a least non-residue is not a residue for a later level");

  // the common g of a level is also the least simultaneous non-residue for the level
  for (const auto& level : levels) {
    u64 n = 2;
    while (!std::all_of(level.primes.begin(), level.primes.end(), [&](u64 q) { return is_nonresidue(n, p, q); }))
      ++n;
    if (n != level.g) fail("construct: level value differs from its least simultaneous non-residue");
  }

  trace.exponents.assign(s, 0);
  trace.partial_products.assign(s, 0);
  trace.jacobsthal.assign(s, std::nullopt);
  trace.exponents[s - 1] = 1;
  trace.partial_products[s - 1] = levels[s - 1].g % p;
  trace.jacobsthal[s - 1] = jacobsthal_cover_search(levels[s - 1].primes);

  std::vector<u64> later = levels[s - 1].primes;
  u64 z = trace.partial_products[s - 1];
  for (std::size_t t = s - 1; t-- > 0;) {
    const LiftResult lift = lift_step(levels[t].g, z, levels[t].primes, later, ctx);
    trace.exponents[t] = lift.m;
    trace.partial_products[t] = lift.product;
    trace.jacobsthal[t] = lift.jacobsthal;
    if (lift.zero_fallback) ++trace.zero_fallbacks;
    z = lift.product;
    later.insert(later.end(), levels[t].primes.begin(), levels[t].primes.end());
  }
  trace.result = z;

  u128 product = 1;
  bool fits = true;
  for (std::size_t i = 0; i < s; ++i) {
    trace.log_product += static_cast<double>(trace.exponents[i]) * std::log(static_cast<double>(levels[i].g));
    for (u64 e = 0; e < trace.exponents[i] && fits; ++e) {
      product *= levels[i].g;
      if (product > UINT64_MAX) fits = false;
    }
  }
  if (fits) trace.integer_product = static_cast<u64>(product);
  trace.realized_exponent = trace.log_product / std::log(static_cast<double>(p));
  trace.least_primitive_root = least_primitive_root(p, p_minus_1);

  if (!is_primitive_root(trace.result, p, p_minus_1)) fail("construct: result is not a primitive root");
  if (trace.integer_product && *trace.integer_product % p != trace.result)
    fail("construct: unreduced product disagrees with the modular result");

  trace.bounds = bound_exponents(trace.grouping, trace.jacobsthal, table, epsilon);
  return trace;
}

std::string trace_json(const ConstructionTrace& trace, bool full) {
  const auto& g = trace.grouping;
  Json out;
  out["p"] = g.p;
  Json factors = Json::array();
  for (const auto& f : g.p_minus_1.factors()) factors.push_back({f.prime, f.exponent});
  out["p_minus_1"] = factors;
  out["result"] = trace.result;
  out["least_primitive_root"] = trace.least_primitive_root;
  out["exponents"] = trace.exponents;
  out["realized_exponent"] = round12(trace.realized_exponent);
  out["epsilon"] = round12(trace.epsilon);
  out["bound_exponents"] = {{"main1", round12(trace.bounds.main1)},
                            {"main1_j_minus_1", round12(trace.bounds.main1_j_minus_1)},
                            {"main3", round12(trace.bounds.main3)},
                            {"main1_surrogate", trace.bounds.main1_surrogate}};
  out["remark2"] = trace.remark2;
  out["zero_fallbacks"] = trace.zero_fallbacks;
  if (full) {
    Json levels = Json::array();
    for (std::size_t i = 0; i < g.levels.size(); ++i) {
      Json level;
      level["primes"] = g.levels[i].primes;
      level["g"] = g.levels[i].g;
      level["divisor"] = g.levels[i].divisor;
      level["jacobsthal"] = i < trace.jacobsthal.size() && trace.jacobsthal[i] ? Json(*trace.jacobsthal[i]) : Json(nullptr);
      levels.push_back(level);
    }
    out["levels"] = levels;
    out["partial_products"] = trace.partial_products;
    out["integer_product"] = trace.integer_product ? Json(*trace.integer_product) : Json(nullptr);
    out["log_product"] = round12(trace.log_product);
  }
  return out.dump();
}

}  // namespace lpr
