#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nsdp/error.hpp"
#include "nsdp/problems.hpp"
#include "nsdp/tools/cli.hpp"
#include "nsdp/tools/report.hpp"

namespace nsdp::tools {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Report text with the wall-time line removed.
std::string without_wall_time(const std::string& text) {
  std::istringstream in(text);
  std::string out;
  for (std::string line; std::getline(in, line);) {
    if (line.find("\"wall_time_seconds\"") != std::string::npos) continue;
    out += line;
    out += '\n';
  }
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("nsdp_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SolveScalarBoundSucceeds) {
  const CliRun r = run({"solve", "--problem", "scalar-bound", "--report", path("r.json")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const ReportDocument doc = report_from_json(Json::parse(read_file(path("r.json"))));
  EXPECT_EQ(doc.status, "FeasOptReached");
  EXPECT_EQ(doc.problem, "scalar-bound");
  EXPECT_FALSE(fs::exists(path("r.json.tmp")));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"solve", "--problem", "nope"}).code, kExitUnknownProblem);
  EXPECT_EQ(run({"solve", "--problem", "scalar-bound", "--eta", "1.5"}).code, kExitUsage);
  EXPECT_EQ(run({"solve", "--problem", "scalar-bound", "--max-outer", "1"}).code, kExitMaxOuter);
  EXPECT_EQ(run({"solve", "--problem", "scalar-bound", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"solve"}).code, kExitUsage);
  EXPECT_EQ(run({"solve", "--problem", "scalar-bound", "--gamma0", "abc"}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(CliTest, UsageErrorsPrintUsage) {
  const CliRun r = run({"solve", "--problem", "scalar-bound", "--bogus"});
  EXPECT_NE(r.err.find("--problem"), std::string::npos);
}

TEST_F(CliTest, UnwritableReportIsAnIoError) {
  const CliRun r = run({"solve", "--problem", "scalar-bound", "--report",
                        path("missing-dir/r.json")});
  EXPECT_NE(r.code, kExitOk);
  EXPECT_FALSE(fs::exists(path("missing-dir/r.json")));
}

TEST_F(CliTest, GoldenReportMatchesByteForByte) {
  const CliRun r = run({"solve", "--problem", "scalar-bound", "--report", path("r.json")});
  ASSERT_EQ(r.code, kExitOk);
  const std::string golden = read_file(fs::path(NSDP_GOLDEN_DIR) / "scalar_bound_report.json");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(without_wall_time(read_file(path("r.json"))), without_wall_time(golden));
}

TEST_F(CliTest, ConsecutiveRunsAreByteIdentical) {
  for (const std::string& name : list_problems()) {
    ASSERT_EQ(run({"solve", "--problem", name, "--report", path("a.json"), "--trace",
                   path("a.jsonl")})
                  .code,
              kExitOk);
    ASSERT_EQ(run({"solve", "--problem", name, "--report", path("b.json"), "--trace",
                   path("b.jsonl")})
                  .code,
              kExitOk);
    EXPECT_EQ(without_wall_time(read_file(path("a.json"))),
              without_wall_time(read_file(path("b.json"))))
        << name;
    EXPECT_EQ(read_file(path("a.jsonl")), read_file(path("b.jsonl"))) << name;
  }
}

TEST_F(CliTest, TraceHasOneLinePerIterate) {
  ASSERT_EQ(run({"solve", "--problem", "nearest-psd", "--report", path("r.json"), "--trace",
                 path("t.jsonl")})
                .code,
            kExitOk);
  const ReportDocument doc = report_from_json(Json::parse(read_file(path("r.json"))));
  std::ifstream in(path("t.jsonl"));
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line); ++lines) {
    const ReportRecord rec = record_from_json(Json::parse(line));
    ASSERT_LT(lines, doc.iterations.size());
    EXPECT_EQ(rec.k, doc.iterations[lines].k);
    EXPECT_EQ(rec.x, doc.iterations[lines].x);
  }
  EXPECT_EQ(lines, doc.iterations.size());
}

TEST_F(CliTest, ReportRoundTripsExactly) {
  ASSERT_EQ(run({"solve", "--problem", "corr-matrix", "--report", path("r.json")}).code, kExitOk);
  const std::string text = read_file(path("r.json"));
  const ReportDocument doc = report_from_json(Json::parse(text));
  EXPECT_EQ(serialize(doc), text);
  const ReportDocument again = report_from_json(Json::parse(serialize(doc)));
  ASSERT_EQ(again.iterations.size(), doc.iterations.size());
  for (std::size_t i = 0; i < doc.iterations.size(); ++i) {
    EXPECT_EQ(again.iterations[i].gamma, doc.iterations[i].gamma);
    EXPECT_EQ(again.iterations[i].x, doc.iterations[i].x);
    EXPECT_EQ(again.iterations[i].Z.matrix(), doc.iterations[i].Z.matrix());
  }
}

TEST_F(CliTest, ReportedResidualsReValidate) {
  for (const std::string& name : list_problems()) {
    ASSERT_EQ(run({"solve", "--problem", name, "--report", path("r.json")}).code, kExitOk);
    const ReportDocument doc = report_from_json(Json::parse(read_file(path("r.json"))));
    const NsdpProblem& prob = get_problem(name).problem;
    for (const ReportRecord& rec : doc.iterations) {
      const OptimalityResiduals res =
          evaluate_residuals(prob, rec.x, rec.gamma, doc.b_count, rec.epsilon);
      const auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
      };
      EXPECT_TRUE(close(res.stationarity, rec.stationarity)) << name << " k=" << rec.k;
      EXPECT_TRUE(close(res.complementarity, rec.complementarity)) << name << " k=" << rec.k;
      EXPECT_TRUE(close(res.second_order, rec.second_order)) << name << " k=" << rec.k;
      EXPECT_TRUE(close(res.feasibility_u, rec.u)) << name << " k=" << rec.k;
      EXPECT_EQ(res.subspace_dim, rec.subspace_dim);
      const MultiplierPair mp = recover_multipliers(prob, rec.x, rec.gamma);
      EXPECT_LE((mp.Z.matrix() - rec.Z.matrix()).norm(), 1e-12 * std::max(1.0, mp.Z.norm()));
      EXPECT_LE((mp.y - rec.y).norm(), 1e-12 * std::max(1.0, mp.y.norm()));
    }
  }
}

TEST_F(CliTest, ConfigFlagsAreEchoed) {
  ASSERT_EQ(run({"solve", "--problem", "scalar-bound", "--gamma0", "2", "--theta", "4", "--seed",
                 "17", "--b-count", "1", "--report", path("r.json")})
                .code,
            kExitOk);
  const Json j = Json::parse(read_file(path("r.json")));
  EXPECT_EQ(j["config"]["gamma0"].get<double>(), 2.0);
  EXPECT_EQ(j["config"]["theta"].get<double>(), 4.0);
  EXPECT_EQ(j["config"]["seed"].get<std::uint64_t>(), 17u);
  EXPECT_EQ(j["config"]["b_count"].get<int>(), 1);
  EXPECT_EQ(j["iterations"][0]["gamma"].get<double>(), 2.0);
}

TEST_F(CliTest, SchemaMismatchIsRejected) {
  const ReportDocument doc;
  Json j = to_json(doc);
  j["schema_version"] = "2";
  EXPECT_THROW(report_from_json(j), nsdp::Error);
  EXPECT_THROW(report_from_json(Json::parse("{}")), nsdp::Error);
}

TEST_F(CliTest, CheckNearestPsdAtStartPasses) {
  const CliRun r = run({"check", "--problem", "nearest-psd", "--at", "start"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST_F(CliTest, CheckScalarBoundAtZero) {
  const CliRun r = run({"check", "--problem", "scalar-bound", "--at", "0", "--gamma", "100",
                        "--json", path("c.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(read_file(path("c.json")));
  EXPECT_EQ(j["residuals"]["stationarity"].get<double>(), 2.0);
  EXPECT_EQ(j["residuals"]["complementarity"].get<double>(), 0.0);
  EXPECT_TRUE(j["audit"]["passed"].get<bool>());
}

TEST_F(CliTest, CheckRejectsBadPoints) {
  EXPECT_EQ(run({"check", "--problem", "scalar-bound", "--at", "1,2"}).code, kExitUsage);
  EXPECT_EQ(run({"check", "--problem", "scalar-bound", "--at", "x"}).code, kExitUsage);
  EXPECT_EQ(run({"check", "--problem", "scalar-bound", "--gamma", "0"}).code, kExitUsage);
  EXPECT_EQ(run({"check", "--problem", "nope"}).code, kExitUnknownProblem);
}

}  // namespace
}  // namespace nsdp::tools
