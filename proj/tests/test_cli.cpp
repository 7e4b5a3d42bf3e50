#include <qcd_cli.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct CliRun {
  int code = -1;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "qcd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = qcd::cli::run_cli(int(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::path(::testing::TempDir()) / name;
  std::ofstream(p, std::ios::binary) << content;
  return p.string();
}

qcd::io::json parse(const CliRun& r) { return qcd::io::json::parse(r.out); }

TEST(Cli, WorkedPairVerdict) {
  const CliRun r = run({"example", "cndu", "--n", "64", "--k", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["verdict"], "same curvature: true; quaternion unitarily equivalent: false");
  EXPECT_EQ(j["equivalence"]["complex_rep"], false);
  // quaternions as 4-arrays, matrices as nested arrays
  EXPECT_EQ(j["canonical_T"]["N"][0][0].size(), 4u);
}

TEST(Cli, WorkedPairCsvHeader) {
  const CliRun r = run({"example", "cndu", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(first_line(r.out), "re,im,K_T,K_T_tilde,gap_T,gap_T_tilde");
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
  EXPECT_EQ(r.out.back(), '\n');
}

TEST(Cli, TwoRegionShiftVerdict) {
  const CliRun r = run({"example", "tci", "--n", "32", "--k", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_EQ(j["verdict"], "n=1 on Omega1; n=2 on Omega2");
  EXPECT_EQ(j["reproduces"], true);
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"rigidity", "--operator", "cndu-T", "--n", "32", "--k", "4", "--seed", "7"};
  const CliRun a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(parse(a)["congruent"], true);
}

TEST(Cli, TimingsStayOffStdout) {
  ::setenv("QCD_LOG", "info", 1);
  const CliRun r = run({"canonical", "--operator", "cndu-T", "--n", "32", "--k", "4"});
  ::unsetenv("QCD_LOG");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("finished in"), std::string::npos);
  EXPECT_EQ(r.out.find("finished in"), std::string::npos);
  const CliRun quiet = run({"canonical", "--operator", "cndu-T", "--n", "32", "--k", "4"});
  EXPECT_EQ(quiet.out, r.out);
  EXPECT_TRUE(quiet.err.empty());
}

TEST(Cli, BadLogLevel) {
  ::setenv("QCD_LOG", "loud", 1);
  const CliRun r = run({"canonical"});
  ::unsetenv("QCD_LOG");
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, TruncationGuard) {
  const CliRun r = run({"suite", "--n", "4"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--n must be at least 4 * --k"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(run({"canonical", "--tol", "0"}).code, 2);
  EXPECT_EQ(run({"canonical", "--tol", "-1e-8"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"example", "nope"}).code, 2);
  EXPECT_EQ(run({"canonical", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"canonical", "--w0", "1 + q"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, CorruptedOperatorJson) {
  const std::string path = temp_file("broken_op.json", "{\"kind\": \"banded\", \"diag\": [0, 1, 0");
  const CliRun r = run({"spectrum", "--op-file", path});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("parse"), std::string::npos) << r.err;
  EXPECT_EQ(run({"spectrum", "--op-file", temp_file("wrong_shape.json", "{\"kind\": \"banded\", \"diag\": [0, 1]}")}).code, 2);
  EXPECT_EQ(run({"spectrum", "--op-file", "/nonexistent/op.json"}).code, 2);
}

TEST(Cli, OperatorFileMatchesBuiltIn) {
  const std::string path = temp_file(
      "cndu_t.json",
      R"({"kind": "banded", "diag": [0, 1, 0, 0], "weights": "const:1",
          "patch": [[0, 1, [1, 0, 0, -2]], [0, 2, [1, 0, 1, 0]]]})");
  const CliRun a = run({"canonical", "--op-file", path, "--n", "32", "--k", "4"});
  const CliRun b = run({"canonical", "--operator", "cndu-T", "--n", "32", "--k", "4"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(parse(a)["canonical"], parse(b)["canonical"]);
}

TEST(Cli, ShiftWeightsDsl) {
  CliRun r = run({"shift", "--weights", "const:2", "--format", "csv", "--nmax", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "n,root_product\n1,2\n2,2\n3,2\n4,2\n5,2\n6,2\n7,2\n8,2\n9,2\n10,2\n");

  r = run({"shift", "--weights", "ratio", "--nmax", "1000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(double(parse(r)["rsp"]["estimate"]), 1.0, 1e-2);

  const std::string path = temp_file("weights.json", "[2, 1.5, 3, 2.5]");
  r = run({"shift", "--weights", "custom:" + path, "--nmax", "4", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(first_line(r.out), "n,root_product");
  EXPECT_NE(r.out.find("\n1,2\n"), std::string::npos);

  EXPECT_EQ(run({"shift", "--weights", "const:"}).code, 2);
  EXPECT_EQ(run({"shift", "--weights", "geometric"}).code, 2);
  EXPECT_EQ(run({"shift", "--weights", "custom:" + temp_file("empty.json", "[]")}).code, 2);
}

TEST(Cli, ShiftProbe) {
  const CliRun r = run({"shift", "--weights", "const:1", "--n", "32", "--k", "4", "--s", "0.3i", "--s", "0.1 + 0.2i"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse(r)["probe"]["n"], 2);
}

TEST(Cli, CsvHeaders) {
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
      {{"spectrum", "--n", "32", "--k", "4"}, "s_a0,s_a1,s_a2,s_a3,N,sigma_min,kernel_dim_H"},
      {{"frame", "--n", "32", "--k", "2"}, "section,order,index,a0,a1,a2,a3"},
      {{"rigidity", "--n", "32", "--k", "2"}, "m,k,i,j,a0,a1,a2,a3,b0,b1,b2,b3"},
      {{"canonical", "--n", "32", "--k", "2"}, "row,col,a0,a1,a2,a3"},
      {{"curvature", "--section", "szego", "--steps", "3", "--radius", "0.2"}, "re,im,K,gap"},
      {{"equiv", "--n", "32", "--k", "4"}, "route,equivalent,residual"},
  };
  for (auto [args, header] : cases) {
    args.push_back("--format");
    args.push_back("csv");
    const CliRun r = run(args);
    ASSERT_EQ(r.code, 0) << args[0] << ": " << r.err;
    EXPECT_EQ(first_line(r.out), header) << args[0];
  }
}

TEST(Cli, EquivalenceOfTheWorkedPair) {
  const CliRun r = run({"equiv", "--operator", "cndu-T", "--other", "cndu-T-tilde", "--n", "32", "--k", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_EQ(j["jet_frames"]["equivalent"], false);
  EXPECT_EQ(j["ad_theta"]["equivalent"], false);
  EXPECT_EQ(j["complex_rep"]["equivalent"], false);
}

TEST(Cli, NumericalFailureExitCode) {
  // i is not in the point spectrum of the plain backward shift.
  const CliRun r = run({"frame", "--operator", "shift", "--w0", "2i", "--n", "32", "--k", "2"});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_NE(r.err.find("EmptyKernel"), std::string::npos);
}

TEST(Cli, WritesOutFile) {
  const auto path = (std::filesystem::path(::testing::TempDir()) / "canonical.csv").string();
  const CliRun r = run({"canonical", "--n", "32", "--k", "2", "--format", "csv", "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "row,col,a0,a1,a2,a3");
}

}  // namespace
