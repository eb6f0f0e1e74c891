#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <regex>
#include <sstream>

#include "drd/cli.hpp"
#include "drd/io.hpp"
#include "drd/policies.hpp"

using namespace drd;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  Result r;
  r.code = run_cli(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "drd_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// Small clustered instance shared by the tests below.
std::string small_instance() {
  const std::string path = scratch("small.json").string();
  const auto r = cli({"generate", "clustered", "-o", path, "--points", "40", "--clusters", "5",
                      "--alpha", "2", "--tests", "30", "--seed", "3", "--quiet"});
  REQUIRE(r.code == 0);
  return path;
}

}  // namespace

TEST_CASE("seed ranges and truth sampling") {
  CHECK(parse_seed_range("3..7").begin == 3);
  CHECK(parse_seed_range("3..7").end == 7);
  CHECK(parse_seed_range("5").size() == 1);
  CHECK_THROWS(parse_seed_range("7..3"));
  CHECK_THROWS(parse_seed_range("x"));

  const auto instance = load_instance(small_instance());
  const auto a = sample_truths(instance, 50, 1);
  CHECK(a == sample_truths(instance, 50, 1));
  CHECK(a != sample_truths(instance, 50, 2));
  for (HypothesisId h : a) CHECK(h < instance.num_hypotheses());
}

TEST_CASE("generate clustered prints a summary") {
  const std::string path = scratch("gen.json").string();
  const auto r = cli({"generate", "clustered", "-o", path, "--seed", "7"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("wrote " + path + ": |H|=200 |T|=100 |R|=12", 0) == 0);
  CHECK(r.out.find("k=3") != std::string::npos);
  CHECK(fs::exists(path));

  const auto missing = cli({"generate", "clustered"});
  CHECK(missing.code == 2);
  const auto bad = cli({"generate", "clustered", "-o", path, "--alpha", "20"});
  CHECK(bad.code == 2);
  CHECK(cli({"generate", "nonsense", "-o", path}).code == 2);
}

TEST_CASE("generate localization2d") {
  const std::string path = scratch("loc.json").string();
  const auto r = cli({"generate", "localization2d", "-o", path, "--hypotheses", "300",
                      "--decisions", "15", "--moves", "40", "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("|H|=300 |T|=40") != std::string::npos);
  const auto doc = load_instance_document(path);
  CHECK(doc.coverage == CoverageMode::kWrap);
}

TEST_CASE("run writes one row per trial and policy") {
  const std::string instance = small_instance();
  const std::string csv = scratch("run.csv").string();
  const auto r = cli({"run", instance, "--policies", "hec,gbs-hec,ec2-hec,voi", "--trials", "100",
                      "-o", csv});
  CHECK(r.code == 0);
  const std::string text = read_file(csv);
  CHECK(count_lines(text) == 401);
  CHECK(text.rfind(std::string(kResultsHeader) + "\n", 0) == 0);
  // Rows come in (trial, policy) order.
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  CHECK(line.find(",hec,") != std::string::npos);
  std::getline(lines, line);
  CHECK(line.find(",gbs-hec,") != std::string::npos);
  for (const char* name : {"hec:", "gbs-hec:", "ec2-hec:", "voi:"}) {
    CHECK(r.out.find(name) != std::string::npos);
  }
  // Without --timing the wall time column is zero, so reruns are identical.
  CHECK(text.find(",0.000\n") != std::string::npos);
  CHECK(cli({"run", instance, "--policies", "hec,gbs-hec,ec2-hec,voi", "-o", csv}).code == 0);
  CHECK(read_file(csv) == text);

  CHECK(cli({"run", instance, "--policies", "bogus", "-o", csv}).code == 2);
  CHECK(cli({"run", scratch("nope.json").string(), "-o", csv}).code == 1);
}

TEST_CASE("run on an instance that needs no test") {
  const std::string path = scratch("all.json").string();
  REQUIRE(cli({"generate", "clustered", "-o", path, "--points", "30", "--clusters", "4",
               "--alpha", "4", "--tests", "10", "--quiet"})
              .code == 0);
  const auto r = cli({"run", path, "--policies", "hec", "--trials", "10", "-o",
                      scratch("all.csv").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("hec: mean_queries=0.000 solved=10/10") != std::string::npos);
}

TEST_CASE("exhaustive run reports the library expected cost exactly") {
  const std::string path = small_instance();
  const auto r = cli({"run", path, "--policies", "hec", "--exhaustive", "-o",
                      scratch("ex.csv").string()});
  CHECK(r.code == 0);
  const auto instance = load_instance(path);
  const double expected = expected_cost(Policy(PolicyKind::kHec, instance)).expected_cost;
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "expected_cost=%.17g", expected);
  CHECK(r.out.find(buffer) != std::string::npos);
}

TEST_CASE("validate") {
  const auto quick = cli({"validate", "--seeds", "0..10", "--quick"});
  CHECK(quick.code == 0);
  CHECK(quick.out.find("validate: PASS") != std::string::npos);
  const auto rational = cli({"validate", "--seeds", "0..5", "--quick", "--arith", "rational",
                             "--k", "4", "--quiet"});
  CHECK(rational.code == 0);
  CHECK(cli({"validate", "--k", "1"}).code == 2);
  CHECK(cli({"validate", "--seeds", "9..3"}).code == 2);
}

TEST_CASE("validate with default ranges") {
  const auto r = cli({"validate", "--quiet"});
  CHECK(r.code == 0);
  CHECK(r.out.find("validate: PASS") != std::string::npos);
}

TEST_CASE("interactive follows the HEC trace") {
  const std::string path = small_instance();
  const auto instance = load_instance(path);
  const Policy policy(PolicyKind::kHec, instance);
  for (HypothesisId h : {HypothesisId{0}, HypothesisId{17}, HypothesisId{33}}) {
    const auto trace = run_policy(policy, h);
    std::string answers;
    for (const auto& step : trace.steps) answers += std::to_string(step.outcome) + "\n";
    const auto r = cli({"interactive", path}, answers);
    CHECK(r.code == 0);
    std::vector<TestId> asked;
    const std::regex question(R"(Q: \[t(\d+)\])");
    for (auto it = std::sregex_iterator(r.out.begin(), r.out.end(), question);
         it != std::sregex_iterator(); ++it) {
      asked.push_back(std::stoul((*it)[1]));
    }
    std::vector<TestId> expected;
    for (const auto& step : trace.steps) expected.push_back(step.test);
    CHECK(asked == expected);
    CHECK(r.out.find("DECISION: region " + std::to_string(*trace.terminal_region) + " after " +
                     std::to_string(trace.num_queries())) != std::string::npos);
  }
}

TEST_CASE("interactive commands") {
  const std::string path = scratch("all2.json").string();
  REQUIRE(cli({"generate", "clustered", "-o", path, "--points", "20", "--clusters", "3",
               "--alpha", "3", "--tests", "5", "--quiet"})
              .code == 0);
  const auto solved = cli({"interactive", path});
  CHECK(solved.code == 0);
  CHECK(solved.out.find("DECISION: region 0 after 0 question(s)") != std::string::npos);

  const std::string small = small_instance();
  const auto r = cli({"interactive", small}, "status\nmaybe\n0\nundo\nundo\nstatus\nquit\n");
  CHECK(r.code == 0);
  CHECK(r.out.find("status: questions=0 consistent=40") != std::string::npos);
  CHECK(r.out.find("unrecognized answer 'maybe'") != std::string::npos);
  CHECK(r.out.find("undo: removed t") != std::string::npos);
  CHECK(r.out.find("undo: nothing to undo") != std::string::npos);
  // Status after undoing is back to the start.
  const auto first = r.out.find("status: questions=0");
  CHECK(r.out.find("status: questions=0", first + 1) != std::string::npos);

  const auto eof = cli({"interactive", small}, "");
  CHECK(eof.code == 1);
  CHECK(eof.out.find("input ended before a decision") != std::string::npos);
}
