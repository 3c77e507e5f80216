#include <gtest/gtest.h>

#include <unistd.h>

#include <nlfrac/cli.hpp>

using namespace nlfrac;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string log;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "nlfrac");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream log;
  int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), log);
  return {code, log.str()};
}

fs::path tmpdir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("nlfrac_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Io, ConfigReaderPointerDiagnostics) {
  ConfigReader r(json::parse(R"({"a": {"b": "x", "n": [1, 2]}})"));
  EXPECT_EQ(r.string("/a/b"), "x");
  EXPECT_EQ(r.numbers("/a/n"), (std::vector<double>{1, 2}));
  try {
    r.number("/a/b");
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("/a/b"), std::string::npos);
  }
  EXPECT_THROW(r.number("/a/missing"), UsageError);
  EXPECT_EQ(r.number("/a/missing", 2.5), 2.5);
}

TEST(Io, ExitCodesByClass) {
  EXPECT_EQ(exit_code(ErrorClass::usage), 2);
  EXPECT_EQ(exit_code(ErrorClass::domain), 2);
  EXPECT_EQ(exit_code(ErrorClass::resolution), 3);
  EXPECT_EQ(exit_code(ErrorClass::cutoff), 3);
  EXPECT_EQ(exit_code(ErrorClass::resource), 4);
  EXPECT_EQ(exit_code(ErrorClass::inconsistency), 5);
}

TEST(Io, ArtifactHashAndTimestamp) {
  json cfg{{"q", {1, 2}}};
  auto a = make_artifact("x", cfg, 7, json{{"v", 1}});
  EXPECT_EQ(a["seed"], 7);
  EXPECT_EQ(a["config_hash"], hex64(fnv1a64(cfg.dump())));
  EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
  const std::string t1 = dump_artifact(a, "2020-01-01T00:00:00Z"), t2 = dump_artifact(a, "2031-05-05T12:00:00Z");
  EXPECT_NE(t1, t2);
  EXPECT_EQ(strip_timestamp(t1), strip_timestamp(t2));
}

TEST(Cli, MissingRequiredFlagWritesNothing) {
  auto dir = tmpdir("missing");
  auto r = run({"verify-counterexample", "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.log.find("--q"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir));
  EXPECT_EQ(run({"build-domain", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"no-such-command"}).code, 2);
  EXPECT_FALSE(fs::exists(dir));
}

TEST(Cli, MalformedConfigNamesThePointer) {
  auto dir = tmpdir("malformed");
  auto r = run({"eval-seminorm", "--config", R"({"u": {"kind": "linear", "ax": "one"}})", "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.log.find("/u/ax"), std::string::npos) << r.log;
  EXPECT_EQ(run({"build-domain", "--kind", "prickly", "--H", "0.2", "--out", dir.string()}).code, 2);
  EXPECT_FALSE(fs::exists(dir));
}

TEST(Cli, BuildDomainEmitsDimension) {
  auto dir = tmpdir("build");
  auto r = run({"build-domain", "--kind", "prickly", "--theta0", "2", "--H", "0.6", "--depth", "6", "--out",
                dir.string()});
  ASSERT_EQ(r.code, 0) << r.log;
  auto j = json::parse(slurp(dir / "build-domain.json"));
  const double L = j["result"]["L"], t = j["result"]["t"];
  EXPECT_NEAR(t, hausdorff_dimension(L), 1e-15);
  EXPECT_EQ(j["seed"], 1);
  EXPECT_EQ(j["config_hash"], hex64(fnv1a64(j["config"].dump())));
  EXPECT_TRUE(fs::exists(dir / "boundary.csv"));
  fs::remove_all(dir);
}

TEST(Cli, CounterexampleVerdictPair) {
  auto dir = tmpdir("cx");
  auto r = run({"verify-counterexample", "--p", "1", "--s0", "1", "--q", "1", "--q", "2", "--quadrature", "false",
                "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.log;
  auto j = json::parse(slurp(dir / "verify-counterexample.json"));
  EXPECT_EQ(j["result"]["verdicts"][0]["verdict"], "convergent");
  EXPECT_EQ(j["result"]["verdicts"][1]["verdict"], "divergent");
  // with the quadrature comparison the sandwich inconsistency exits with its own code
  EXPECT_EQ(run({"verify-counterexample", "--q", "1", "--quad-J", "4", "--quad-J", "8", "--quad-J", "12", "--out",
                 dir.string()})
                .code,
            5);
  fs::remove_all(dir);
}

TEST(Cli, JobsAndRepeatsAreByteIdentical) {
  auto a = tmpdir("ja"), b = tmpdir("jb");
  const std::vector<std::string> cmd{"check-hypotheses", "--samples", "6", "--only", "H1", "--only", "H2", "--seed", "4"};
  auto with = [&](const fs::path& dir, const char* jobs) {
    auto args = cmd;
    args.insert(args.end(), {"--jobs", jobs, "--out", dir.string()});
    return run(args).code;
  };
  ASSERT_EQ(with(a, "1"), 0);
  ASSERT_EQ(with(b, "3"), 0);
  EXPECT_EQ(strip_timestamp(slurp(a / "check-hypotheses.json")), strip_timestamp(slurp(b / "check-hypotheses.json")));
  EXPECT_EQ(slurp(a / "h1_evidence.csv"), slurp(b / "h1_evidence.csv"));
  EXPECT_EQ(slurp(a / "h2_evidence.csv"), slurp(b / "h2_evidence.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  auto dir = tmpdir("env");
  ::setenv("NLFRAC_OUT_DIR", dir.c_str(), 1);
  auto r = run({"emit-region-plot", "--resolution", "32"});
  ::unsetenv("NLFRAC_OUT_DIR");
  ASSERT_EQ(r.code, 0) << r.log;
  EXPECT_TRUE(fs::exists(dir / "emit-region-plot.json"));
  EXPECT_TRUE(fs::exists(dir / "region_trace_mask.csv"));
  fs::remove_all(dir);
}
