#include "lpr/survey.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json_util.hpp"
#include "lpr/errors.hpp"
#include "lpr/structure.hpp"

namespace lpr {

using detail::Json;
using detail::round12;

namespace {

std::atomic<bool> g_stop{false};

struct Stopped {};

constexpr double kFixedPointScale = 1e12;

std::size_t bin_of(double v) {
  if (!(v > 0)) return 0;
  return std::min<std::size_t>(kHistogramBins - 1, static_cast<std::size_t>(std::floor(v / 0.05)));
}

std::string format12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<u64> odd_primes_up_to(double y) {
  std::vector<u64> out;
  if (y < 3) return out;
  for (u64 q : sieve_primes(static_cast<u64>(std::floor(y))))
    if (q != 2) out.push_back(q);
  return out;
}

}  // namespace

void request_survey_stop() noexcept { g_stop = true; }
void reset_survey_stop() noexcept { g_stop = false; }

const char* to_string(Condition1 c) noexcept {
  switch (c) {
    case Condition1::pass: return "pass";
    case Condition1::fail: return "fail";
    case Condition1::unknown: return "unknown";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Per-prime checks

Condition1 condition1_check(const FactoredInteger& p_minus_1, const Condition1Options& options) {
  const auto primes = p_minus_1.primes();
  const std::size_t w = primes.size();
  if (w > options.max_omega) return Condition1::unknown;
  std::vector<u64> subset;
  for (u64 mask = 1; mask < (u64{1} << w); ++mask) {
    subset.clear();
    for (std::size_t i = 0; i < w; ++i)
      if (mask >> i & 1) subset.push_back(primes[i]);
    // j(n) <= 2^omega(n), so small subsets cannot fail
    if ((u64{1} << subset.size()) <= options.jacobsthal_factor * subset.size()) continue;
    if (jacobsthal_cover_search(subset) > options.jacobsthal_factor * subset.size()) return Condition1::fail;
  }
  return Condition1::pass;
}

TotientRatio totient_ratio_check(const FactoredInteger& p_minus_1) {
  double ratio = 1;
  for (u64 q : p_minus_1.primes()) ratio *= static_cast<double>(q) / static_cast<double>(q - 1);
  return {ratio, ratio <= 5.0};
}

double technical_sum(const FactoredInteger& p_minus_1, double y, bool raw_loglog) {
  double sum = 0;
  for (u64 q : p_minus_1.primes())
    if (static_cast<double>(q) > y) sum += loglog(static_cast<double>(q), raw_loglog) / std::log(static_cast<double>(q));
  return sum;
}

bool no_odd_factor_up_to(const FactoredInteger& p_minus_1, double y) noexcept {
  for (const auto& f : p_minus_1.factors())
    if (f.prime != 2 && static_cast<double>(f.prime) <= y) return false;
  return true;
}

namespace {

bool sup_omega_violates(u64 p, const FactoredInteger& p_minus_1, double a) {
  for (int j = 1;; ++j) {
    const double t = std::exp(std::exp(static_cast<double>(j)));
    if (t >= static_cast<double>(p - 1)) return false;
    if (t <= a) continue;
    if (static_cast<double>(omega_up_to(p_minus_1, t)) > static_cast<double>(j) * j) return true;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Standalone sweeps (odd primes p <= x)

OmegaStatistics omega_statistics(u64 x, double t, std::vector<double> xi) {
  OmegaStatistics stats;
  stats.t = t;
  stats.loglog_t = loglog(t);
  stats.xi = std::move(xi);
  stats.within_reduction_range = x >= 3 && t <= std::pow(static_cast<double>(x), 0.24);
  std::array<u64, kOmegaBins> hist{};
  u64 sum = 0, sum_sq = 0;
  for_each_prime_with_pm1(3, x, [&](u64, const FactoredInteger& pm1) {
    const std::size_t w = std::min(omega_up_to(pm1, t), kOmegaBins - 1);
    ++hist[w];
    sum += w;
    sum_sq += w * w;
    ++stats.primes;
  });
  if (stats.primes > 0) {
    const double n = static_cast<double>(stats.primes);
    stats.mean = static_cast<double>(sum) / n;
    const u128 spread = static_cast<u128>(stats.primes) * sum_sq - static_cast<u128>(sum) * sum;
    stats.variance = static_cast<double>(spread) / (n * n);
  }
  for (double k : stats.xi) {
    u64 hits = 0;
    for (std::size_t w = 0; w < kOmegaBins; ++w)
      if (std::abs(static_cast<double>(w) - stats.loglog_t) >= k * std::sqrt(stats.loglog_t)) hits += hist[w];
    stats.tail.push_back(stats.primes ? static_cast<double>(hits) / static_cast<double>(stats.primes) : 0.0);
  }
  return stats;
}

SupOmegaResult sup_omega_check(u64 x, double a) {
  if (!(a >= 16)) throw DomainError("sup_omega_check: a must be at least 16");
  SupOmegaResult result{{0, 0}, 1.0 / std::pow(loglog(a), 2)};
  for_each_prime_with_pm1(3, x, [&](u64 p, const FactoredInteger& pm1) {
    ++result.violations.denominator;
    if (sup_omega_violates(p, pm1, a)) ++result.violations.numerator;
  });
  return result;
}

RoughDensity rough_density(u64 x, double y) {
  if (y > 200) throw DomainError("rough_density: y must be at most 200");
  const auto small = odd_primes_up_to(y);
  RoughDensity result{{0, 0}, 1.0, 0.0};
  for (u64 q : small) result.mertens_prediction *= 1.0 - 1.0 / static_cast<double>(q - 1);
  for_each_prime(3, x, [&](u64 p) {
    ++result.empirical.denominator;
    if (std::none_of(small.begin(), small.end(), [p](u64 q) { return (p - 1) % q == 0; }))
      ++result.empirical.numerator;
  });
  result.ratio = result.empirical.value() / result.mertens_prediction;
  return result;
}

TechnicalResult lemma_technical_check(u64 x, double y, double eps2, bool raw_loglog) {
  TechnicalResult result{0, {0, 0}};
  double total = 0;
  for_each_prime_with_pm1(3, x, [&](u64, const FactoredInteger& pm1) {
    const double s = technical_sum(pm1, y, raw_loglog);
    total += s;
    ++result.exceed.denominator;
    if (s > eps2) ++result.exceed.numerator;
  });
  if (result.exceed.denominator) result.mean = total / static_cast<double>(result.exceed.denominator);
  return result;
}

// ---------------------------------------------------------------------------
// Survey

void SurveyConfig::validate() const {
  if (!(y >= 3)) throw DomainError("survey: y must be at least 3");
  if (x_limit >= 3 && static_cast<double>(x_limit) < y) throw DomainError("survey: x must be at least y");
  if (!(epsilon > 0 && epsilon < 1)) throw DomainError("survey: epsilon must lie in (0, 1)");
  if (!(delta > 0 && delta < 1)) throw DomainError("survey: delta must lie in (0, 1)");
  if (x_limit > x_cap) throw CapacityError("survey: x exceeds the configured cap " + std::to_string(x_cap));
  if (!(sup_omega_a >= 16)) throw DomainError("survey: the sup-omega threshold must be at least 16");
  for (double t : t_list)
    if (!(t > 1)) throw DomainError("survey: every t must exceed 1");
  if (threads == 0) throw DomainError("survey: threads must be positive");
}

PrimeSurveyRecord survey_prime(u64 p, const FactoredInteger& p_minus_1, const SurveyConfig& config,
                               DickmanTable& table) {
  PrimeSurveyRecord r;
  r.p = p;
  r.p_minus_1 = p_minus_1;
  r.rough = is_y_rough(p_minus_1, config.y);

  const ConstructionTrace trace = construct_simultaneous_nonresidue(p, p_minus_1, table, config.epsilon);
  const double log_p = std::log(static_cast<double>(p));
  r.g_p = trace.least_primitive_root;
  r.constructed = trace.result;
  r.integer_product = trace.integer_product;
  r.realized_exponent = round12(trace.realized_exponent);
  r.log_gp_exponent = round12(std::log(static_cast<double>(r.g_p)) / log_p);
  r.main1_exp = round12(trace.bounds.main1);
  r.main1_j_minus_1_exp = round12(trace.bounds.main1_j_minus_1);
  r.main3_exp = round12(trace.bounds.main3);
  r.main1_surrogate = trace.bounds.main1_surrogate;
  r.zero_fallbacks = trace.zero_fallbacks;
  r.verified = is_primitive_root(r.constructed, p, p_minus_1) &&
               (!r.integer_product || *r.integer_product >= r.g_p);

  r.cond1 = condition1_check(p_minus_1);
  r.cond2_sum = round12(condition2_sum(p_minus_1, config.raw_loglog));
  r.cond2 = r.cond2_sum <= config.epsilon / 20;
  for (double t : config.t_list) r.omega_counts.push_back(omega_up_to(p_minus_1, t));
  const auto totient = totient_ratio_check(p_minus_1);
  r.totient_ratio = round12(totient.max_ratio);
  r.totient_holds = totient.holds;
  r.technical = round12(technical_sum(p_minus_1, config.y, config.raw_loglog));
  r.sup_omega_violation = sup_omega_violates(p, p_minus_1, config.sup_omega_a);
  return r;
}

std::string record_json(const PrimeSurveyRecord& r, const SurveyConfig&) {
  Json out;
  out["p"] = r.p;
  Json factors = Json::array();
  for (const auto& f : r.p_minus_1.factors()) factors.push_back({f.prime, f.exponent});
  out["p_minus_1"] = factors;
  out["rough"] = r.rough;
  out["g_p"] = r.g_p;
  out["constructed"] = r.constructed;
  out["integer_product"] = r.integer_product ? Json(*r.integer_product) : Json(nullptr);
  out["realized_exponent"] = r.realized_exponent;
  out["log_gp_exponent"] = r.log_gp_exponent;
  out["verified"] = r.verified;
  out["cond1"] = to_string(r.cond1);
  out["cond2_sum"] = r.cond2_sum;
  out["cond2"] = r.cond2;
  out["main1_exp"] = r.main1_exp;
  out["main1_j_minus_1_exp"] = r.main1_j_minus_1_exp;
  out["main3_exp"] = r.main3_exp;
  out["main1_surrogate"] = r.main1_surrogate;
  out["omega_counts"] = r.omega_counts;
  out["totient_ratio_max"] = r.totient_ratio;
  out["totient_holds"] = r.totient_holds;
  out["technical_sum"] = r.technical;
  out["sup_omega_violation"] = r.sup_omega_violation;
  out["zero_fallbacks"] = r.zero_fallbacks;
  return out.dump();
}

SurveyAggregate::SurveyAggregate(std::size_t t_count)
    : omega_sum(t_count, 0), omega_sum_sq(t_count, 0), omega_hist(t_count, std::array<u64, kOmegaBins>{}) {}

void SurveyAggregate::add(const PrimeSurveyRecord& r, const SurveyConfig& config) {
  ++primes;
  verified += r.verified;
  constructed_is_least += r.constructed == r.g_p;
  zero_fallback_primes += r.zero_fallbacks > 0;
  gp_within_theorem += r.log_gp_exponent <= kBurgessExponent + config.epsilon;
  gp_within_smoke += r.log_gp_exponent <= kBurgessExponent + 0.05;
  no_odd_factor_up_to_y += no_odd_factor_up_to(r.p_minus_1, config.y);
  sup_omega_violations += r.sup_omega_violation;
  technical_exceed += r.technical > config.technical_eps2;
  technical_sum_fixed += std::llround(r.technical * kFixedPointScale);
  for (std::size_t i = 0; i < omega_sum.size() && i < r.omega_counts.size(); ++i) {
    const u64 w = r.omega_counts[i];
    omega_sum[i] += w;
    omega_sum_sq[i] += w * w;
    ++omega_hist[i][std::min<std::size_t>(w, kOmegaBins - 1)];
  }
  ++realized_hist[bin_of(r.realized_exponent)];
  ++log_gp_hist[bin_of(r.log_gp_exponent)];
  if (!r.rough) return;
  ++rough;
  switch (r.cond1) {
    case Condition1::pass: ++rough_cond1_pass; break;
    case Condition1::fail: ++rough_cond1_fail; break;
    case Condition1::unknown: ++rough_cond1_unknown; break;
  }
  rough_cond2_pass += r.cond2;
  rough_both_pass += r.cond2 && r.cond1 == Condition1::pass;
  rough_totient_holds += r.totient_holds;
  rough_main1_violations += r.realized_exponent > r.main1_exp;
  if (r.cond1 == Condition1::pass) {
    ++rough_cond1_main3_checked;
    rough_cond1_main3_ge_main1 += r.main3_exp >= r.main1_exp;
  }
}

void SurveyAggregate::merge(const SurveyAggregate& o) {
  primes += o.primes;
  rough += o.rough;
  verified += o.verified;
  constructed_is_least += o.constructed_is_least;
  zero_fallback_primes += o.zero_fallback_primes;
  rough_cond1_pass += o.rough_cond1_pass;
  rough_cond1_fail += o.rough_cond1_fail;
  rough_cond1_unknown += o.rough_cond1_unknown;
  rough_cond2_pass += o.rough_cond2_pass;
  rough_both_pass += o.rough_both_pass;
  rough_totient_holds += o.rough_totient_holds;
  rough_main1_violations += o.rough_main1_violations;
  rough_cond1_main3_checked += o.rough_cond1_main3_checked;
  rough_cond1_main3_ge_main1 += o.rough_cond1_main3_ge_main1;
  gp_within_theorem += o.gp_within_theorem;
  gp_within_smoke += o.gp_within_smoke;
  no_odd_factor_up_to_y += o.no_odd_factor_up_to_y;
  sup_omega_violations += o.sup_omega_violations;
  technical_exceed += o.technical_exceed;
  technical_sum_fixed += o.technical_sum_fixed;
  if (omega_sum.size() < o.omega_sum.size()) {
    omega_sum.resize(o.omega_sum.size(), 0);
    omega_sum_sq.resize(o.omega_sum.size(), 0);
    omega_hist.resize(o.omega_sum.size(), std::array<u64, kOmegaBins>{});
  }
  for (std::size_t i = 0; i < o.omega_sum.size(); ++i) {
    omega_sum[i] += o.omega_sum[i];
    omega_sum_sq[i] += o.omega_sum_sq[i];
    for (std::size_t b = 0; b < kOmegaBins; ++b) omega_hist[i][b] += o.omega_hist[i][b];
  }
  for (std::size_t b = 0; b < kHistogramBins; ++b) {
    realized_hist[b] += o.realized_hist[b];
    log_gp_hist[b] += o.log_gp_hist[b];
  }
}

namespace {

struct Shard {
  u64 lo, hi;
  SurveyAggregate aggregate;
  std::vector<std::string> lines;  // in-memory mode
  std::string path;                // file mode
  bool stopped = false;
  std::string error;
};

void run_shard(Shard& shard, const SurveyConfig& config) {
  DickmanTable table;
  std::ofstream file;
  if (!shard.path.empty()) {
    file.open(shard.path, std::ios::binary | std::ios::trunc);
    if (!file) {
      shard.error = "cannot open " + shard.path;
      return;
    }
  }
  try {
    for_each_prime_with_pm1(shard.lo, shard.hi, [&](u64 p, const FactoredInteger& pm1) {
      if (g_stop.load(std::memory_order_relaxed)) throw Stopped{};
      const PrimeSurveyRecord record = survey_prime(p, pm1, config, table);
      shard.aggregate.add(record, config);
      if (file.is_open() || config.keep_records) {
        std::string line = record_json(record, config);
        if (file.is_open()) {
          file << line << '\n';
          if (!file) {
            shard.error = "write failed on " + shard.path;
            throw Stopped{};
          }
        }
        if (config.keep_records) shard.lines.push_back(std::move(line));
      }
    });
  } catch (const Stopped&) {
    shard.stopped = true;
  }
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& c : cells) out += (out.empty() ? "" : ",") + c;
  return out + "\n";
}

Json fraction_json(u64 num, u64 den) {
  Json f;
  f["numerator"] = num;
  f["denominator"] = den;
  f["value"] = round12(den ? static_cast<double>(num) / static_cast<double>(den) : 0.0);
  return f;
}

struct OmegaMoments {
  double mean = 0, variance = 0, loglog_t = 0;
  std::vector<double> tails;  // xi = 1, 2, 3
};

OmegaMoments moments(const SurveyAggregate& a, std::size_t i, double t, bool raw) {
  OmegaMoments m;
  m.loglog_t = loglog(t, raw);
  if (a.primes == 0) {
    m.tails.assign(3, 0.0);
    return m;
  }
  const double n = static_cast<double>(a.primes);
  m.mean = static_cast<double>(a.omega_sum[i]) / n;
  const u128 spread = static_cast<u128>(a.primes) * a.omega_sum_sq[i] - static_cast<u128>(a.omega_sum[i]) * a.omega_sum[i];
  m.variance = static_cast<double>(spread) / (n * n);
  for (double xi : {1.0, 2.0, 3.0}) {
    u64 hits = 0;
    for (std::size_t w = 0; w < kOmegaBins; ++w)
      if (std::abs(static_cast<double>(w) - m.loglog_t) >= xi * std::sqrt(std::max(m.loglog_t, 0.0))) hits += a.omega_hist[i][w];
    m.tails.push_back(static_cast<double>(hits) / n);
  }
  return m;
}

double mertens_prediction(double y) {
  double product = 1;
  for (u64 q : odd_primes_up_to(y)) product *= 1.0 - 1.0 / static_cast<double>(q - 1);
  return product;
}

void write_text(const std::filesystem::path& path, const std::string& text, std::string& error) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out && error.empty()) error = "write failed on " + path.string();
}

}  // namespace

std::vector<std::pair<std::string, std::string>> report_tables(const SurveyReport& report) {
  std::vector<std::pair<std::string, std::string>> tables;
  const auto& a = report.aggregate;
  const auto& c = report.config;
  auto frac = [](u64 num, u64 den) {
    return format12(den ? static_cast<double>(num) / static_cast<double>(den) : 0.0);
  };

  std::string omega = csv_line({"t", "primes", "mean", "variance", "loglog_t", "tail_xi1", "tail_xi2", "tail_xi3"});
  for (std::size_t i = 0; i < c.t_list.size(); ++i) {
    const auto m = moments(a, i, c.t_list[i], c.raw_loglog);
    omega += csv_line({format12(c.t_list[i]), std::to_string(a.primes), format12(m.mean), format12(m.variance),
                       format12(m.loglog_t), format12(m.tails[0]), format12(m.tails[1]), format12(m.tails[2])});
  }
  tables.emplace_back("omega_moments.csv", omega);

  const std::string header = csv_line({"statistic", "numerator", "denominator", "value"});
  auto row = [&](const char* name, u64 num, u64 den) {
    return csv_line({name, std::to_string(num), std::to_string(den), frac(num, den)});
  };
  tables.emplace_back("conditions.csv",
             header + row("cond1_pass_given_rough", a.rough_cond1_pass, a.rough) +
                 row("cond1_fail_given_rough", a.rough_cond1_fail, a.rough) +
                 row("cond1_unknown_given_rough", a.rough_cond1_unknown, a.rough) +
                 row("cond2_pass_given_rough", a.rough_cond2_pass, a.rough) +
                 row("both_pass_given_rough", a.rough_both_pass, a.rough) +
                 row("main3_ge_main1_given_rough_cond1", a.rough_cond1_main3_ge_main1, a.rough_cond1_main3_checked) +
                 row("realized_above_main1_given_rough", a.rough_main1_violations, a.rough));
  tables.emplace_back("totient.csv", header + row("totient_ratio_holds_given_rough", a.rough_totient_holds, a.rough));
  tables.emplace_back("sup_omega.csv",
             header + row("sup_omega_violation", a.sup_omega_violations, a.primes) +
                 csv_line({"loglog_a_scale", "", "", format12(1.0 / std::pow(loglog(c.sup_omega_a), 2))}));
  tables.emplace_back("technical.csv",
             header + row("technical_sum_exceeds_eps2", a.technical_exceed, a.primes) +
                 csv_line({"technical_sum_mean", "", "",
                           format12(a.primes ? static_cast<double>(a.technical_sum_fixed) / kFixedPointScale /
                                                   static_cast<double>(a.primes)
                                             : 0.0)}));
  const double prediction = mertens_prediction(c.y);
  tables.emplace_back("rough_density.csv",
             header + row("no_odd_factor_up_to_y", a.no_odd_factor_up_to_y, a.primes) +
                 row("rough_at_y", a.rough, a.primes) + csv_line({"mertens_prediction", "", "", format12(prediction)}));
  std::string hist = csv_line({"bin_lo", "bin_hi", "realized_exponent", "log_gp_exponent"});
  for (std::size_t b = 0; b < kHistogramBins; ++b)
    hist += csv_line({format12(0.05 * static_cast<double>(b)),
                      b + 1 == kHistogramBins ? "inf" : format12(0.05 * static_cast<double>(b + 1)),
                      std::to_string(a.realized_hist[b]), std::to_string(a.log_gp_hist[b])});
  tables.emplace_back("exponents.csv", hist);
  return tables;
}

SurveyAggregate aggregate_records(std::istream& in, const SurveyConfig& config) {
  SurveyAggregate aggregate(config.t_list.size());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json j = Json::parse(line);
    if (j.contains("truncated")) break;
    PrimeSurveyRecord r;
    r.p = j.at("p").get<u64>();
    std::vector<PrimePower> factors;
    for (const auto& f : j.at("p_minus_1")) factors.push_back({f.at(0).get<u64>(), f.at(1).get<unsigned>()});
    r.p_minus_1 = FactoredInteger::from_factors(std::move(factors));
    if (r.p_minus_1.value() != r.p - 1) throw ContractError("aggregate_records: stored factorization does not match p - 1", line);
    r.rough = j.at("rough").get<bool>();
    r.g_p = j.at("g_p").get<u64>();
    r.constructed = j.at("constructed").get<u64>();
    if (!j.at("integer_product").is_null()) r.integer_product = j.at("integer_product").get<u64>();
    r.realized_exponent = j.at("realized_exponent").get<double>();
    r.log_gp_exponent = j.at("log_gp_exponent").get<double>();
    r.verified = j.at("verified").get<bool>();
    const std::string cond1 = j.at("cond1").get<std::string>();
    r.cond1 = cond1 == "pass" ? Condition1::pass : cond1 == "fail" ? Condition1::fail : Condition1::unknown;
    r.cond2_sum = j.at("cond2_sum").get<double>();
    r.cond2 = j.at("cond2").get<bool>();
    r.main1_exp = j.at("main1_exp").get<double>();
    r.main1_j_minus_1_exp = j.at("main1_j_minus_1_exp").get<double>();
    r.main3_exp = j.at("main3_exp").get<double>();
    r.main1_surrogate = j.at("main1_surrogate").get<bool>();
    r.omega_counts = j.at("omega_counts").get<std::vector<std::size_t>>();
    r.totient_ratio = j.at("totient_ratio_max").get<double>();
    r.totient_holds = j.at("totient_holds").get<bool>();
    r.technical = j.at("technical_sum").get<double>();
    r.sup_omega_violation = j.at("sup_omega_violation").get<bool>();
    r.zero_fallbacks = j.at("zero_fallbacks").get<std::size_t>();

    // the condition flags must follow from the stored factorization alone
    const double cond2_sum = round12(condition2_sum(r.p_minus_1, config.raw_loglog));
    if (condition1_check(r.p_minus_1) != r.cond1 || cond2_sum != r.cond2_sum ||
        (cond2_sum <= config.epsilon / 20) != r.cond2 || is_y_rough(r.p_minus_1, config.y) != r.rough)
      throw ContractError("aggregate_records: flags disagree with the stored factorization", line);
    aggregate.add(r, config);
  }
  return aggregate;
}

std::string report_json(const SurveyReport& report) {
  const auto& a = report.aggregate;
  const auto& c = report.config;
  Json out;
  // threads and shards are left out: they do not affect any result
  out["config"] = {{"x", c.x_limit},
                   {"y", round12(c.y)},
                   {"epsilon", round12(c.epsilon)},
                   {"delta", round12(c.delta)},
                   {"t", c.t_list},
                   {"raw_loglog", c.raw_loglog},
                   {"sup_omega_a", round12(c.sup_omega_a)},
                   {"technical_eps2", round12(c.technical_eps2)}};
  out["truncated"] = report.truncated;
  if (!report.error.empty()) out["error"] = report.error;
  out["counts"] = {{"primes", a.primes},
                   {"rough", a.rough},
                   {"verified", a.verified},
                   {"constructed_is_least", a.constructed_is_least},
                   {"zero_fallback_primes", a.zero_fallback_primes},
                   {"cond1_fail_rough", a.rough_cond1_fail},
                   {"cond1_unknown_rough", a.rough_cond1_unknown},
                   {"cond2_fail_rough", a.rough - a.rough_cond2_pass},
                   {"realized_above_main1_rough", a.rough_main1_violations}};
  Json probabilities;
  probabilities["verified"] = fraction_json(a.verified, a.primes);
  probabilities["rough"] = fraction_json(a.rough, a.primes);
  probabilities["cond1_given_rough"] = fraction_json(a.rough_cond1_pass, a.rough);
  probabilities["cond2_given_rough"] = fraction_json(a.rough_cond2_pass, a.rough);
  probabilities["conditions_given_rough"] = fraction_json(a.rough_both_pass, a.rough);
  probabilities["totient_given_rough"] = fraction_json(a.rough_totient_holds, a.rough);
  probabilities["main3_ge_main1_given_rough_cond1"] =
      fraction_json(a.rough_cond1_main3_ge_main1, a.rough_cond1_main3_checked);
  probabilities["gp_within_burgess_plus_epsilon"] = fraction_json(a.gp_within_theorem, a.primes);
  probabilities["gp_within_burgess_plus_0.05"] = fraction_json(a.gp_within_smoke, a.primes);
  probabilities["sup_omega_violation"] = fraction_json(a.sup_omega_violations, a.primes);
  probabilities["technical_exceeds_eps2"] = fraction_json(a.technical_exceed, a.primes);
  out["probabilities"] = probabilities;
  const u64 exceptions = a.rough - a.rough_both_pass;
  out["exceptions_within_delta"] =
      a.rough == 0 || static_cast<double>(exceptions) <= c.delta * static_cast<double>(a.rough);
  out["burgess_plus_epsilon"] = round12(kBurgessExponent + c.epsilon);

  Json omega = Json::array();
  for (std::size_t i = 0; i < c.t_list.size(); ++i) {
    const auto m = moments(a, i, c.t_list[i], c.raw_loglog);
    omega.push_back({{"t", round12(c.t_list[i])},
                     {"mean", round12(m.mean)},
                     {"variance", round12(m.variance)},
                     {"loglog_t", round12(m.loglog_t)},
                     {"tail", {round12(m.tails[0]), round12(m.tails[1]), round12(m.tails[2])}},
                     {"histogram", a.omega_hist[i]}});
  }
  out["omega_moments"] = omega;
  const double prediction = mertens_prediction(c.y);
  out["rough_density"] = {{"empirical", fraction_json(a.no_odd_factor_up_to_y, a.primes)},
                          {"mertens_prediction", round12(prediction)},
                          {"ratio", round12(a.primes ? static_cast<double>(a.no_odd_factor_up_to_y) /
                                                           static_cast<double>(a.primes) / prediction
                                                     : 0.0)}};
  out["technical"] = {{"mean", round12(a.primes ? static_cast<double>(a.technical_sum_fixed) / kFixedPointScale /
                                                      static_cast<double>(a.primes)
                                                : 0.0)},
                      {"exceed", fraction_json(a.technical_exceed, a.primes)}};
  out["histograms"] = {{"bin_width", 0.05},
                       {"realized_exponent", a.realized_hist},
                       {"log_gp_exponent", a.log_gp_hist}};
  return out.dump(2);
}

SurveyReport run_survey(const SurveyConfig& config) {
  config.validate();
  SurveyReport report{config, SurveyAggregate(config.t_list.size()), false, {}, {}};
  const unsigned shard_count = std::max(1u, config.shards ? config.shards : config.threads);

  namespace fs = std::filesystem;
  std::string io_error;
  if (!config.out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) io_error = "cannot create " + config.out_dir + ": " + ec.message();
  }

  std::vector<Shard> shards;
  if (config.x_limit >= 3 && io_error.empty()) {
    const u64 span = config.x_limit - 2;  // odd primes live in [3, x]
    for (unsigned i = 0; i < shard_count; ++i) {
      const u64 lo = 3 + span * i / shard_count;
      const u64 hi = 3 + span * (i + 1) / shard_count;  // exclusive
      if (lo >= hi) continue;
      Shard s{lo, hi - 1, SurveyAggregate(config.t_list.size()), {}, {}, false, {}};
      if (!config.out_dir.empty()) {
        char name[48];
        std::snprintf(name, sizeof name, "records.shard-%04u.jsonl", i);
        s.path = (fs::path(config.out_dir) / name).string();
      }
      shards.push_back(std::move(s));
    }
  }

  // workers pull shards in order; each shard is self-contained
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < shards.size();) {
      try {
        run_shard(shards[i], config);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        request_survey_stop();
      }
    }
  };
  const unsigned thread_count = std::min<unsigned>(config.threads, std::max<std::size_t>(1, shards.size()));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) {
    reset_survey_stop();
    std::rethrow_exception(failure);
  }

  for (auto& s : shards) {
    report.aggregate.merge(s.aggregate);
    report.truncated = report.truncated || s.stopped || !s.error.empty();
    if (io_error.empty() && !s.error.empty()) io_error = s.error;
    for (auto& line : s.lines) report.records.push_back(std::move(line));
  }
  if (!io_error.empty()) report.truncated = true;

  if (!config.out_dir.empty() && fs::exists(config.out_dir)) {
    const fs::path dir(config.out_dir);
    {
      std::ofstream merged(dir / "records.jsonl", std::ios::binary | std::ios::trunc);
      for (const auto& s : shards) {
        std::ifstream in(s.path, std::ios::binary);
        if (in && in.peek() != std::ifstream::traits_type::eof()) merged << in.rdbuf();
        in.close();
        std::error_code ec;
        fs::remove(s.path, ec);
      }
      if (report.truncated) merged << "{\"truncated\":true}\n";
      if (!merged && io_error.empty()) io_error = "write failed on records.jsonl";
    }
    for (const auto& [name, text] : report_tables(report)) write_text(dir / name, text, io_error);
    write_text(dir / "report.json", report_json(report) + "\n", io_error);
    if (!io_error.empty()) report.truncated = true;
  }
  report.error = io_error;
  return report;
}

}  // namespace lpr
