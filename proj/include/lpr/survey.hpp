#pragma once

// Prime sweeps: per-prime construction records plus the statistics behind
// the roughness conditions (omega(p-1, t) moments, Jacobsthal and totient
// conditions, rough-prime densities, the log log q / log q sums).
//
// Aggregates hold integer counts only (fixed-point for the one real-valued
// sum), so merging shards in any order is exact.

#include <array>
#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpr/arith.hpp"
#include "lpr/constructor.hpp"

namespace lpr {

struct Fraction {
  u64 numerator = 0;
  u64 denominator = 0;
  double value() const noexcept {
    return denominator == 0 ? 0.0 : static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

// ---------------------------------------------------------------------------
// Per-prime checks

enum class Condition1 { pass, fail, unknown };
const char* to_string(Condition1 c) noexcept;

struct Condition1Options {
  std::size_t max_omega = 20;  // subset enumeration budget
  u64 jacobsthal_factor = 10;
};

/// j(d) <= 10 omega(d) for every squarefree d | p - 1 (enough, since j and
/// omega only see the radical). unknown when omega(p - 1) exceeds the budget.
Condition1 condition1_check(const FactoredInteger& p_minus_1, const Condition1Options& options = {});

struct TotientRatio {
  double max_ratio;  // max over squarefree d | p-1 of d / phi(d), attained at rad(p-1)
  bool holds;        // max_ratio <= 5
};

TotientRatio totient_ratio_check(const FactoredInteger& p_minus_1);

/// Sum over primes q | p - 1 with q > y of loglog(q) / log(q).
double technical_sum(const FactoredInteger& p_minus_1, double y, bool raw_loglog = false);

/// p - 1 has no odd prime factor q <= y (the event whose density is the
/// product over 2 < q <= y of 1 - 1/(q - 1)).
bool no_odd_factor_up_to(const FactoredInteger& p_minus_1, double y) noexcept;

// ---------------------------------------------------------------------------
// Standalone sweeps

struct OmegaStatistics {
  u64 primes = 0;
  double t = 0;
  double loglog_t = 0;
  double mean = 0;
  double variance = 0;
  std::vector<double> xi;    // tail thresholds
  std::vector<double> tail;  // P(|omega - loglog t| >= xi sqrt(loglog t))
  bool within_reduction_range = true;  // t <= x^0.24
};

OmegaStatistics omega_statistics(u64 x, double t, std::vector<double> xi = {1, 2, 3});

/// Fraction of primes p <= x for which some checkpoint t_j = exp(exp j) in
/// (a, p - 1) has omega(p - 1, t_j) > j^2.
struct SupOmegaResult {
  Fraction violations;
  double scale;  // (loglog a)^-2
};

SupOmegaResult sup_omega_check(u64 x, double a);

struct RoughDensity {
  Fraction empirical;
  double mertens_prediction;  // prod_{2 < q <= y} (1 - 1/(q - 1))
  double ratio;
};

RoughDensity rough_density(u64 x, double y);

struct TechnicalResult {
  double mean;
  Fraction exceed;  // sum > eps2
};

TechnicalResult lemma_technical_check(u64 x, double y, double eps2, bool raw_loglog = false);

// ---------------------------------------------------------------------------
// Full survey

struct SurveyConfig {
  u64 x_limit = 100'000;
  double y = 50;
  double epsilon = 0.01;
  double delta = 0.1;
  std::vector<double> t_list = {100, 1000};
  std::string out_dir;          // empty: keep everything in memory
  unsigned threads = 1;
  unsigned shards = 0;          // 0: one per thread
  bool raw_loglog = false;
  double sup_omega_a = 20;
  double technical_eps2 = 0.3;
  u64 x_cap = 100'000'000;
  bool keep_records = false;    // retain the JSON lines in the report

  void validate() const;
};

struct PrimeSurveyRecord {
  u64 p = 0;
  FactoredInteger p_minus_1;
  bool rough = false;
  u64 g_p = 0;
  u64 constructed = 0;
  std::optional<u64> integer_product;
  double realized_exponent = 0;
  double log_gp_exponent = 0;  // log g(p) / log p
  Condition1 cond1 = Condition1::unknown;
  double cond2_sum = 0;
  bool cond2 = false;
  double main1_exp = 0;
  double main1_j_minus_1_exp = 0;
  double main3_exp = 0;
  bool main1_surrogate = false;
  std::vector<std::size_t> omega_counts;  // per t in t_list
  double totient_ratio = 0;
  bool totient_holds = false;
  double technical = 0;
  bool sup_omega_violation = false;
  std::size_t zero_fallbacks = 0;
  bool verified = false;
};

PrimeSurveyRecord survey_prime(u64 p, const FactoredInteger& p_minus_1, const SurveyConfig& config,
                               DickmanTable& table);

/// One JSON object, fixed field order, no trailing newline.
std::string record_json(const PrimeSurveyRecord& record, const SurveyConfig& config);

inline constexpr std::size_t kHistogramBins = 41;  // width 0.05 over [0, 2), last bin open
inline constexpr std::size_t kOmegaBins = 16;

struct SurveyAggregate {
  u64 primes = 0;
  u64 rough = 0;
  u64 verified = 0;
  u64 constructed_is_least = 0;
  u64 zero_fallback_primes = 0;
  u64 rough_cond1_pass = 0, rough_cond1_fail = 0, rough_cond1_unknown = 0;
  u64 rough_cond2_pass = 0;
  u64 rough_both_pass = 0;
  u64 rough_totient_holds = 0;
  u64 rough_main1_violations = 0;        // realized exponent > main1
  u64 rough_cond1_main3_checked = 0;     // rough, condition (1) passes
  u64 rough_cond1_main3_ge_main1 = 0;
  u64 gp_within_theorem = 0;             // g(p) <= p^{1/(4 sqrt e) + eps}
  u64 gp_within_smoke = 0;               // g(p) <= p^{1/(4 sqrt e) + 0.05}
  u64 no_odd_factor_up_to_y = 0;
  u64 sup_omega_violations = 0;
  u64 technical_exceed = 0;
  std::int64_t technical_sum_fixed = 0;  // sum of technical sums in units of 1e-12
  std::vector<u64> omega_sum, omega_sum_sq;            // per t
  std::vector<std::array<u64, kOmegaBins>> omega_hist;  // per t
  std::array<u64, kHistogramBins> realized_hist{};
  std::array<u64, kHistogramBins> log_gp_hist{};

  explicit SurveyAggregate(std::size_t t_count = 0);
  void add(const PrimeSurveyRecord& record, const SurveyConfig& config);
  void merge(const SurveyAggregate& other);
  friend bool operator==(const SurveyAggregate&, const SurveyAggregate&) = default;
};

struct SurveyReport {
  SurveyConfig config;
  SurveyAggregate aggregate;
  bool truncated = false;
  std::vector<std::string> records;  // when keep_records
  std::string error;                 // first I/O failure, if any
};

/// Sweeps the odd primes p <= x_limit in contiguous shards (optionally in
/// parallel). With an out_dir it writes records.jsonl, report.json and one
/// CSV per statistic.
SurveyReport run_survey(const SurveyConfig& config);

/// Sets the flag that makes a running survey stop and mark its output truncated.
void request_survey_stop() noexcept;
void reset_survey_stop() noexcept;

std::string report_json(const SurveyReport& report);

/// The CSV tables written next to report.json, as (file name, contents).
std::vector<std::pair<std::string, std::string>> report_tables(const SurveyReport& report);

/// Recomputes the aggregate from a records.jsonl stream (stops at a
/// truncation marker). Every record's rough/cond1/cond2 flags are re-derived
/// from its stored factorization; a mismatch throws ContractError.
SurveyAggregate aggregate_records(std::istream& in, const SurveyConfig& config);

}  // namespace lpr
