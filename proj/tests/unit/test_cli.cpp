#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "hofa/hofa.hpp"
#include "json.hpp"

namespace hofa::cli {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) / ("hofa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    saved_cap_ = enumeration_cap();
  }
  void TearDown() override {
    set_enumeration_cap(saved_cap_);
    fs::remove_all(dir_);
  }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  static CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "hofa-lab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_command(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  fs::path dir_;
  std::uint64_t saved_cap_ = 0;
};

TEST_F(CliTest, GowersOfConstantOne) {
  const std::string in = write("f.json", R"({"p": 2, "n": 3, "values": [1,1,1,1,1,1,1,1]})");
  const CliRun r = run({"gowers", "--in", in, "--d", "2", "--mode", "exact"});
  ASSERT_EQ(r.code, exit_ok) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["report"]["value"].get<double>(), 1.0);
  EXPECT_EQ(j["manifest"]["subcommand"], "gowers");
  EXPECT_TRUE(j["manifest"]["seed"].is_null());
  EXPECT_EQ(j["manifest"]["input_digests"].size(), 1u);
}

TEST_F(CliTest, TesterRateMatchesExactValue) {
  const std::string in = write("f.json", R"({"p": 2, "n": 2, "colors": 2, "values": [0,0,0,1]})");
  const CliRun sampled = run({"test", "--in", in, "--property", "linearity", "--d", "2", "--trials", "10000", "--seed", "7"});
  ASSERT_EQ(sampled.code, exit_ok) << sampled.err;
  const CliRun exact = run({"test", "--in", in, "--property", "linearity", "--d", "2", "--mode", "exact"});
  ASSERT_EQ(exact.code, exit_ok) << exact.err;
  const auto s = nlohmann::json::parse(sampled.out);
  const auto e = nlohmann::json::parse(exact.out);
  const double truth = e["report"]["rate"].get<double>();
  EXPECT_DOUBLE_EQ(truth, 1.0);
  EXPECT_LE(s["report"]["ci"][0].get<double>(), truth);
  EXPECT_GE(s["report"]["ci"][1].get<double>(), truth);
  EXPECT_EQ(s["manifest"]["seed"], 7);
}

TEST_F(CliTest, SampledRunWithoutSeedPrintsOne) {
  const std::string in = write("f.json", R"({"p": 2, "n": 2, "colors": 2, "values": [0,1,1,0]})");
  const CliRun r = run({"test", "--in", in, "--property", "linearity", "--trials", "50"});
  ASSERT_EQ(r.code, exit_ok) << r.err;
  EXPECT_NE(r.err.find("seed: "), std::string::npos);
  EXPECT_FALSE(nlohmann::json::parse(r.out)["manifest"]["seed"].is_null());
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  const std::string in = write("f.json", R"({"p": 2, "n": 4, "values": [0,1,1,0,1,0,0,1,0,0,1,1,0,1,0,0]})");
  const CliRun a = run({"regularize", "--in", in, "--engine", "weak", "--d", "1", "--eta", "0.1", "--seed", "1"});
  const CliRun b = run({"regularize", "--in", in, "--engine", "weak", "--d", "1", "--eta", "0.1", "--seed", "1"});
  ASSERT_EQ(a.code, exit_ok) << a.err;
  EXPECT_EQ(a.out, b.out);
  const CliRun csv = run({"regularize", "--in", in, "--engine", "weak", "--format", "csv"});
  ASSERT_EQ(csv.code, exit_ok) << csv.err;
  EXPECT_EQ(csv.out.rfind("# manifest: ", 0), 0u);
}

TEST_F(CliTest, MalformedJsonIsADomainError) {
  const std::string in = write("bad.json", "{\n  \"p\": 2,\n  \"n\": \n}");
  const CliRun r = run({"gowers", "--in", in});
  EXPECT_EQ(r.code, exit_domain_error);
  EXPECT_NE(r.err.find("line 4"), std::string::npos) << r.err;
}

TEST_F(CliTest, ShortValueArrayNamesTheField) {
  const std::string in = write("short.json", R"({"p": 2, "n": 3, "values": [1,1]})");
  const CliRun r = run({"gowers", "--in", in});
  EXPECT_EQ(r.code, exit_domain_error);
  EXPECT_NE(r.err.find("values"), std::string::npos) << r.err;
}

TEST_F(CliTest, CapExceededHasItsOwnExitCode) {
  const std::string in = write("f.json", R"({"p": 2, "n": 3, "values": [1,0,1,0,1,0,1,0]})");
  const CliRun r = run({"gowers", "--in", in, "--d", "3", "--cap", "10"});
  EXPECT_EQ(r.code, exit_cap_exceeded) << r.err;
}

TEST_F(CliTest, ComplexityAndConsistencyReports) {
  const std::string in = write("sys.json", R"({"p": 2, "vars": 2, "rows": [[1,0],[0,1],[1,1]]})");
  const CliRun c = run({"complexity", "--in", in});
  ASSERT_EQ(c.code, exit_ok) << c.err;
  EXPECT_NE(c.out.find("\"complexity\": 1"), std::string::npos) << c.out;
  const CliRun s = run({"consistency", "--in", in, "--type", "1,0"});
  ASSERT_EQ(s.code, exit_ok) << s.err;
  EXPECT_NE(s.out.find("\"size\": 4"), std::string::npos) << s.out;
}

TEST_F(CliTest, SelftestSubsetPasses) {
  const CliRun r = run({"selftest", "--criteria", "1"});
  EXPECT_EQ(r.code, exit_ok) << r.err;
  EXPECT_NE(r.err.find("PASS 1"), std::string::npos) << r.err;
}

}  // namespace
}  // namespace hofa::cli
