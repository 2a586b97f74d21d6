#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = lpr::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("construct prints the trace") {
  const auto r = run({"construct", "--p", "41"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["result"] == 6);
  CHECK_FALSE(j.contains("levels"));
  const auto full = nlohmann::json::parse(run({"construct", "--p", "41", "--trace"}).out);
  CHECK(full["levels"].size() == 2);
  CHECK(run({"construct", "--p", "41", "--format", "human"}).out.find("result") != std::string::npos);
}

TEST_CASE("decimal outputs") {
  CHECK(run({"rho", "--u", "2"}).out == "0.30685281944\n");
  CHECK(run({"rho", "--u", "0.5"}).out == "1\n");
  CHECK(run({"u-of-d", "--d", "2"}).out == "1.6487212707\n");
  CHECK(run({"u-of-d", "--d", "1e40"}).code == 0);  // beyond the default table: extended on demand
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run({"rho", "--u", "-1"}).code == 1);
  CHECK(run({"rho"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"rho", "--u", "1", "--bogus"}).code == 1);
  CHECK(run({"nonsense"}).code == 1);
  CHECK(run({"gd", "--p", "41", "--d", "3"}).code == 1);
  CHECK(run({"construct", "--p", "15"}).code == 1);
  CHECK(run({"construct", "--p", "41", "--format", "csv"}).code == 1);
  CHECK(run({"survey", "--x", "1000", "--epsilon", "2"}).code == 1);
  CHECK(run({"--format", "xml", "rho", "--u", "1"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("single-line json subcommands") {
  CHECK(nlohmann::json::parse(run({"gd", "--p", "41", "--d", "5"}).out)["g"] == 2);
  CHECK(nlohmann::json::parse(run({"psi", "--x", "10", "--y", "3"}).out)["psi"] == 4);
  const auto bound = nlohmann::json::parse(run({"psi", "--x", "100000", "--y", "100", "--check-bound"}).out);
  CHECK(bound["holds"] == true);
  CHECK(nlohmann::json::parse(run({"jacobsthal", "--n", "30"}).out)["j"] == 6);
  CHECK(nlohmann::json::parse(run({"jacobsthal", "--n", "30", "--method", "cover"}).out)["j"] == 6);
  const auto dlog = nlohmann::json::parse(run({"dlog", "--p", "41", "--a", "6"}).out);
  CHECK(dlog["generator"] == 6);
  CHECK(dlog["log"] == 1);
  CHECK(nlohmann::json::parse(run({"char-sums", "--p", "101", "--d", "5", "--h", "40"}).out).contains("max_normalized_sum"));
  const auto out = run({"gd", "--p", "41", "--d", "5"}).out;
  CHECK(out.find('\n') == out.size() - 1);
}

TEST_CASE("rho table") {
  const auto r = run({"rho-table", "--umax", "2", "--step", "0.5"});
  CHECK(r.code == 0);
  CHECK(r.out == "u,rho\n0,1\n0.5,1\n1,1\n1.5,0.594534891892\n2,0.30685281944\n");
}

TEST_CASE("environment defaults sit below flags") {
  ::setenv("LPR_EPSILON", "0.2", 1);
  const auto from_env = nlohmann::json::parse(run({"construct", "--p", "41"}).out);
  const auto from_flag = nlohmann::json::parse(run({"construct", "--p", "41", "--epsilon", "0.05"}).out);
  ::unsetenv("LPR_EPSILON");
  const auto defaults = nlohmann::json::parse(run({"construct", "--p", "41"}).out);
  CHECK(from_env["epsilon"] == 0.2);
  CHECK(from_flag["epsilon"] == 0.05);
  CHECK(defaults["epsilon"] == 0.01);
}

TEST_CASE("survey subcommand") {
  const auto dir = std::filesystem::temp_directory_path() / ("lpr_cli_" + std::to_string(::getpid()));
  const auto r = run({"survey", "--x", "5000", "--y", "3", "--t", "10,100", "--threads", "2", "--out", dir.string()});
  CHECK(r.code == 0);
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report["counts"]["primes"] == 668);
  CHECK(report["config"]["t"].size() == 2);
  CHECK(std::filesystem::exists(dir / "records.jsonl"));
  std::filesystem::remove_all(dir);
  const auto csv = run({"survey", "--x", "5000", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.find("# conditions.csv\nstatistic,numerator,denominator,value\n") != std::string::npos);
}

TEST_CASE("identical invocations give identical bytes") {
  for (const std::vector<std::string>& args : {std::vector<std::string>{"construct", "--p", "1000003", "--trace"},
                                               {"survey", "--x", "3000"},
                                               {"psi", "--x", "50000", "--y", "30", "--check-bound"}})
    CHECK(run(args).out == run(args).out);
}

TEST_CASE("selftest") {
  const auto r = run({"selftest", "--format", "human"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
