#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpr/arith.hpp"
#include "lpr/constructor.hpp"
#include "lpr/dickman.hpp"
#include "lpr/errors.hpp"
#include "lpr/residues.hpp"
#include "lpr/structure.hpp"
#include "lpr/survey.hpp"

namespace lpr::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string dec(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double r12(double v) { return std::strtod(dec(v).c_str(), nullptr); }

using Rows = std::vector<std::pair<std::string, std::string>>;

void print_rows(std::ostream& out, const Rows& rows) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  for (const auto& [key, value] : rows) out << std::left << std::setw(static_cast<int>(width) + 2) << key << value << '\n';
}

std::string joined(const std::vector<u64>& v) {
  std::string s;
  for (u64 x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

struct Check {
  std::string name;
  bool pass;
};

std::vector<Check> selftest_checks() {
  std::vector<Check> checks;
  DickmanTable table;

  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double u = 1.0 + i / 99.0;
    worst = std::max(worst, std::abs(table.rho(u) - (1.0 - std::log(u))));
  }
  checks.push_back({"rho equals 1 - ln u on [1, 2]", worst <= 1e-10});
  bool inverse = true;
  for (double d : {2.0, 3.0, 5.0, 10.0, 100.0, 1e6}) inverse = inverse && std::abs(table.rho(table.u_of(d)) - 1 / d) <= 1e-8;
  checks.push_back({"rho(u(d)) = 1/d", inverse});
  checks.push_back({"u(2) = sqrt(e)", std::abs(table.u_of(2) - std::sqrt(std::exp(1.0))) <= 1e-6});

  bool counts = true;
  for_each_prime(3, 500, [&](u64 p) {
    const auto pm1 = factorize(p - 1);
    for (u64 d = 1; d < p; ++d) {
      if ((p - 1) % d) continue;
      u64 residues = 0;
      for (u64 n = 1; n < p; ++n) residues += is_dth_power_residue(n, p, d);
      counts = counts && residues == (p - 1) / d;
    }
  });
  checks.push_back({"(p-1)/d d-th power residues for p <= 500", counts});

  bool construction = true;
  for_each_prime_with_pm1(3, 10'000, [&](u64 p, const FactoredInteger& pm1) {
    const auto trace = construct_simultaneous_nonresidue(p, pm1, table);
    // order by direct multiplication
    u64 order = 1, power = trace.result % p;
    while (power != 1) {
      power = mul_mod(power, trace.result, p);
      ++order;
    }
    construction = construction && order == p - 1;
  });
  checks.push_back({"construction yields a primitive root for p <= 10^4", construction});

  checks.push_back({"construct p = 41 gives 6", construct_simultaneous_nonresidue(41, table).result == 6});
  checks.push_back({"j(30) = 6", jacobsthal_exact(factorize(30)) == 6});
  checks.push_back({"psi(10, 3) = 4", psi_count(10, 3) == 4});
  const auto crt = crt_combine({{3, 1}, {5, 2}});
  checks.push_back({"crt (1 mod 3, 2 mod 5) = 7 mod 15", crt.residue == 7 && crt.modulus == 15});
  return checks;
}

class Dispatcher {
 public:
  Dispatcher(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv);

 private:
  void setup();
  void require_no_csv() const {
    if (format_ == "csv") throw CLI::ValidationError("--format", "csv output is only available for rho-table and survey");
  }

  std::ostream& out_;
  std::ostream& err_;
  CLI::App app_{"Least primitive roots, power non-residues and related numerics", "lpr"};
  std::string format_ = "json";
  std::function<int()> action_;

  // flag storage
  double u_ = 0, d_real_ = 0, umax_ = 50, step_ = 1e-3, epsilon_ = 0.01, y_ = 50, delta_ = 0.1;
  u64 p_ = 0, d_ = 0, x_ = 0, h_ = 0, n_ = 0, a_ = 0;
  double psi_y_ = 0;
  bool check_bound_ = false, trace_ = false, raw_loglog_ = false;
  std::string out_path_;
  std::vector<double> t_list_ = {100, 1000};
  unsigned threads_ = 1, shards_ = 0;
  double sup_a_ = 20, eps2_ = 0.3;
  std::string method_ = "auto";
};

void Dispatcher::setup() {
  app_.set_help_flag("--help", "Print this help message and exit");  // -h is taken by char-sums --h
  app_.require_subcommand(1);
  app_.fallthrough();
  app_.add_option("--format", format_, "Output mode")
      ->envname("LPR_FORMAT")
      ->check(CLI::IsMember({"json", "human", "csv"}))
      ->capture_default_str();

  auto* rho = app_.add_subcommand("rho", "Dickman rho(u)");
  rho->add_option("--u", u_, "Argument u >= 0")->required();
  rho->add_option("--umax", umax_, "Table reach")->envname("LPR_UMAX")->capture_default_str();
  rho->callback([this] {
    action_ = [this] {
      require_no_csv();
      DickmanTable table({umax_, step_, 1e-12});
      out_ << dec(table.rho(u_)) << '\n';
      return kOk;
    };
  });

  auto* uod = app_.add_subcommand("u-of-d", "The u with rho(u) = 1/d");
  uod->add_option("--d", d_real_, "d >= 1")->required();
  uod->add_option("--umax", umax_, "Initial table reach")->envname("LPR_UMAX")->capture_default_str();
  uod->callback([this] {
    action_ = [this] {
      require_no_csv();
      DickmanTable table({umax_, step_, 1e-12});
      out_ << dec(u_of_extending(d_real_, table)) << '\n';
      return kOk;
    };
  });

  auto* rt = app_.add_subcommand("rho-table", "Write rho on a grid as CSV (u,rho)");
  rt->add_option("--umax", umax_, "Largest u")->envname("LPR_UMAX")->capture_default_str();
  rt->add_option("--step", step_, "Grid step (1/step integral)")->envname("LPR_STEP")->capture_default_str();
  rt->add_option("--out", out_path_, "Output file (default: stdout)");
  rt->callback([this] {
    action_ = [this] {
      // sampled from a fine table so coarse grids stay accurate
      if (!(step_ > 0)) throw DomainError("rho-table: step must be positive");
      DickmanTable::Options options;
      options.u_max = umax_;
      const double per_unit = 1 / step_;
      if (step_ < options.step && std::abs(per_unit - std::round(per_unit)) < 1e-9 * per_unit) options.step = step_;
      const DickmanTable table(options);
      if (out_path_.empty()) {
        write_rho_csv(out_, table, step_);
        return kOk;
      }
      std::ofstream file(out_path_, std::ios::binary | std::ios::trunc);
      write_rho_csv(file, table, step_);
      if (!file) {
        err_ << "error: cannot write " << out_path_ << '\n';
        return kUsage;
      }
      return kOk;
    };
  });

  auto* gd = app_.add_subcommand("gd", "Least d-th power non-residue mod p");
  gd->add_option("--p", p_, "Odd prime")->required();
  gd->add_option("--d", d_, "Divisor of p - 1, d >= 2")->required();
  gd->callback([this] {
    action_ = [this] {
      require_no_csv();
      const u64 g = least_power_nonresidue(p_, d_);
      if (format_ == "human") {
        print_rows(out_, {{"p", std::to_string(p_)}, {"d", std::to_string(d_)}, {"g", std::to_string(g)}});
      } else {
        Json j;
        j["p"] = p_;
        j["d"] = d_;
        j["g"] = g;
        out_ << j.dump() << '\n';
      }
      return kOk;
    };
  });

  auto* psi = app_.add_subcommand("psi", "Count y-smooth n <= x (prime factors < y)");
  psi->add_option("--x", x_, "Bound x")->required();
  psi->add_option("--y", psi_y_, "Smoothness bound y")->required();
  psi->add_flag("--check-bound", check_bound_, "Compare with x rho(log x / log y)");
  psi->callback([this] {
    action_ = [this] {
      require_no_csv();
      Json j;
      j["x"] = x_;
      j["y"] = r12(psi_y_);
      if (check_bound_) {
        DickmanTable table;
        const auto report = check_psi_lower_bound(x_, psi_y_, table);
        j["psi"] = report.psi;
        j["u"] = r12(report.u);
        j["x_rho_u"] = r12(report.x_rho_u);
        j["holds"] = report.holds;
        j["margin"] = r12(report.margin);
      } else {
        j["psi"] = psi_count(x_, psi_y_);
      }
      if (format_ == "human") {
        Rows rows;
        for (const auto& [k, v] : j.items()) rows.emplace_back(k, v.is_number_float() ? dec(v.get<double>()) : v.dump());
        print_rows(out_, rows);
      } else {
        out_ << j.dump() << '\n';
      }
      return kOk;
    };
  });

  auto* cs = app_.add_subcommand("char-sums", "Largest normalized partial sum of order-d characters");
  cs->add_option("--p", p_, "Prime")->required();
  cs->add_option("--d", d_, "Divisor of p - 1")->required();
  cs->add_option("--h", h_, "Sum length H < p")->required();
  cs->callback([this] {
    action_ = [this] {
      require_no_csv();
      const auto report = character_partial_sum_diagnostic(p_, d_, h_);
      if (format_ == "human") {
        print_rows(out_, {{"max_normalized_sum", dec(report.max_normalized_sum)},
                          {"argmax_k", std::to_string(report.argmax_k)}});
      } else {
        Json j;
        j["p"] = p_;
        j["d"] = d_;
        j["h"] = h_;
        j["max_normalized_sum"] = r12(report.max_normalized_sum);
        j["argmax_k"] = report.argmax_k;
        out_ << j.dump() << '\n';
      }
      return kOk;
    };
  });

  auto* jac = app_.add_subcommand("jacobsthal", "Jacobsthal function j(n)");
  jac->add_option("--n", n_, "n >= 1")->required();
  jac->add_option("--method", method_, "exact (period scan), cover (covering search) or auto")
      ->check(CLI::IsMember({"auto", "exact", "cover"}))
      ->capture_default_str();
  jac->callback([this] {
    action_ = [this] {
      require_no_csv();
      if (n_ == 0) throw DomainError("jacobsthal: n must be positive");
      const auto f = factorize(n_);
      const bool exact = method_ == "exact" || (method_ == "auto" && f.radical() <= JacobsthalOptions{}.scan_limit);
      const u64 j = exact ? jacobsthal_exact(f) : jacobsthal_cover_search(f.primes());
      if (format_ == "human") {
        print_rows(out_, {{"n", std::to_string(n_)}, {"radical", std::to_string(f.radical())},
                          {"j", std::to_string(j)}, {"method", exact ? "exact" : "cover"}});
      } else {
        Json out;
        out["n"] = n_;
        out["radical"] = f.radical();
        out["j"] = j;
        out["method"] = exact ? "exact" : "cover";
        out_ << out.dump() << '\n';
      }
      return kOk;
    };
  });

  auto* dlog = app_.add_subcommand("dlog", "Discrete log to the least primitive root");
  dlog->add_option("--p", p_, "Odd prime")->required();
  dlog->add_option("--a", a_, "Element, nonzero mod p")->required();
  dlog->callback([this] {
    action_ = [this] {
      require_no_csv();
      const DlogContext ctx(p_);
      const u64 e = ctx.log(a_);
      if (mod_pow(ctx.generator(), e, p_) != a_ % p_) throw ContractError("dlog: g^e does not reproduce a");
      if (format_ == "human") {
        print_rows(out_, {{"p", std::to_string(p_)}, {"a", std::to_string(a_)},
                          {"generator", std::to_string(ctx.generator())}, {"log", std::to_string(e)}});
      } else {
        Json j;
        j["p"] = p_;
        j["a"] = a_;
        j["generator"] = ctx.generator();
        j["log"] = e;
        out_ << j.dump() << '\n';
      }
      return kOk;
    };
  });

  auto* con = app_.add_subcommand("construct", "Build a primitive root from least non-residues");
  con->add_option("--p", p_, "Odd prime")->required();
  con->add_option("--epsilon", epsilon_, "Epsilon in the exponent bounds")->envname("LPR_EPSILON")->capture_default_str();
  con->add_flag("--trace", trace_, "Include levels, partial products and the unreduced product");
  con->callback([this] {
    action_ = [this] {
      require_no_csv();
      DickmanTable table;
      const auto trace = construct_simultaneous_nonresidue(p_, table, epsilon_);
      if (format_ != "human") {
        out_ << trace_json(trace, trace_) << '\n';
        return kOk;
      }
      Rows rows{{"p", std::to_string(p_)},
                {"result", std::to_string(trace.result)},
                {"least primitive root", std::to_string(trace.least_primitive_root)},
                {"exponents", joined(trace.exponents)},
                {"realized exponent", dec(trace.realized_exponent)},
                {"main1 exponent", dec(trace.bounds.main1)},
                {"main3 exponent", dec(trace.bounds.main3)},
                {"zero fallbacks", std::to_string(trace.zero_fallbacks)}};
      if (trace_) {
        for (std::size_t i = 0; i < trace.grouping.levels.size(); ++i) {
          const auto& level = trace.grouping.levels[i];
          rows.emplace_back("level " + std::to_string(i + 1),
                            "A = {" + joined(level.primes) + "}  g = " + std::to_string(level.g) +
                                "  d = " + std::to_string(level.divisor) + "  z = " +
                                std::to_string(trace.partial_products[i]));
        }
      }
      print_rows(out_, rows);
      return kOk;
    };
  });

  auto* sv = app_.add_subcommand("survey", "Sweep the odd primes up to x");
  sv->add_option("--x", x_, "Upper bound of the sweep")->required();
  sv->add_option("--y", y_, "Roughness threshold")->envname("LPR_Y")->capture_default_str();
  sv->add_option("--epsilon", epsilon_, "Epsilon")->envname("LPR_EPSILON")->capture_default_str();
  sv->add_option("--delta", delta_, "Exception budget")->envname("LPR_DELTA")->capture_default_str();
  sv->add_option("--t", t_list_, "Thresholds for omega(p - 1, t)")->delimiter(',')->envname("LPR_T");
  sv->add_option("--out", out_path_, "Output directory");
  sv->add_option("--threads", threads_, "Worker threads")->envname("LPR_THREADS")->capture_default_str();
  sv->add_option("--shards", shards_, "Shard count (0: one per thread)")->capture_default_str();
  sv->add_option("--a", sup_a_, "Lower end of the omega checkpoints")->capture_default_str();
  sv->add_option("--eps2", eps2_, "Threshold for the log log q / log q sums")->capture_default_str();
  sv->add_flag("--raw-loglog", raw_loglog_, "Use log log x without the max(1, .) floor");
  sv->callback([this] {
    action_ = [this] {
      SurveyConfig config;
      config.x_limit = x_;
      config.y = y_;
      config.epsilon = epsilon_;
      config.delta = delta_;
      config.t_list = t_list_;
      config.out_dir = out_path_;
      config.threads = threads_;
      config.shards = shards_;
      config.sup_omega_a = sup_a_;
      config.technical_eps2 = eps2_;
      config.raw_loglog = raw_loglog_;
      const SurveyReport report = run_survey(config);
      if (format_ == "json") {
        out_ << report_json(report) << '\n';
      } else if (format_ == "csv") {
        for (const auto& [name, text] : report_tables(report)) out_ << "# " << name << '\n' << text;
      } else {
        const auto& a = report.aggregate;
        auto frac = [](u64 n, u64 d) {
          return std::to_string(n) + "/" + std::to_string(d) + " = " + dec(d ? static_cast<double>(n) / d : 0.0);
        };
        print_rows(out_, {{"primes", std::to_string(a.primes)},
                          {"verified primitive roots", frac(a.verified, a.primes)},
                          {"rough at y", frac(a.rough, a.primes)},
                          {"condition 1 | rough", frac(a.rough_cond1_pass, a.rough)},
                          {"condition 2 | rough", frac(a.rough_cond2_pass, a.rough)},
                          {"both | rough", frac(a.rough_both_pass, a.rough)},
                          {"main3 >= main1 | rough, cond 1", frac(a.rough_cond1_main3_ge_main1, a.rough_cond1_main3_checked)},
                          {"g(p) <= p^(burgess + eps)", frac(a.gp_within_theorem, a.primes)},
                          {"truncated", report.truncated ? "yes" : "no"}});
      }
      if (!report.error.empty()) err_ << "error: " << report.error << '\n';
      return report.truncated ? kTruncated : kOk;
    };
  });

  auto* st = app_.add_subcommand("selftest", "Run the built-in oracle checks");
  st->callback([this] {
    action_ = [this] {
      require_no_csv();
      const auto checks = selftest_checks();
      const bool all = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
      if (format_ == "json") {
        Json j = Json::array();
        for (const auto& c : checks) j.push_back({{"check", c.name}, {"pass", c.pass}});
        out_ << Json{{"pass", all}, {"checks", j}}.dump() << '\n';
      } else {
        for (const auto& c : checks) out_ << (c.pass ? "PASS  " : "FAIL  ") << c.name << '\n';
      }
      return all ? kOk : kUsage;
    };
  });
}

int Dispatcher::run(int argc, const char* const* argv) {
  setup();
  try {
    app_.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream text, errors;
    const int code = app_.exit(e, text, errors);
    out_ << text.str();
    err_ << errors.str();
    return code == 0 ? kOk : kUsage;
  }
  try {
    return action_ ? action_() : kUsage;
  } catch (const CLI::ValidationError& e) {
    err_ << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ContractError& e) {
    err_ << "contract violation: " << e.what() << '\n';
    if (!e.trace().empty()) err_ << e.trace() << '\n';
    return kContract;
  } catch (const DomainError& e) {
    err_ << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const RangeError& e) {
    err_ << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapacityError& e) {
    err_ << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return Dispatcher(out, err).run(argc, argv);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"lpr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace lpr::cli
