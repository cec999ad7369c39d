#include "invforge/harness.hpp"

#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace invforge {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("invforge_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const fs::path path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::vector<std::string>& args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(Cli, ReduceSatBinary) {
  const std::string in = file("f.cnf", "p cnf 2 2\n1 2 0\n-1 2 0\n");
  ASSERT_EQ(run({"reduce", "--from", "sat", "--in", in, "--out", path("a.json")}), 0) << err_.str();
  EXPECT_NE(out_.str().find("sat-exact-binary"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("a.json")));
  EXPECT_EQ(run({"invert", "--query", path("a.json"), "--oracle", "brute"}), 0);
  EXPECT_NE(out_.str().find("\"YES\""), std::string::npos);
}

TEST_F(Cli, UnsatisfiableArtifactExitsOne) {
  const std::string in = file("f.cnf", "p cnf 1 2\n1 0\n-1 0\n");
  ASSERT_EQ(run({"reduce", "--from", "sat", "--in", in, "--out", path("a.json")}), 0);
  EXPECT_EQ(run({"invert", "--query", path("a.json"), "--oracle", "brute"}), 1);
}

TEST_F(Cli, GraphReductionRejectsOddP) {
  const std::string in = file("g.txt", "graph 4\n1 2 1\n");
  EXPECT_EQ(run({"reduce", "--from", "halfclique", "--p", "3", "--bound", "1", "--in", in, "--out", path("a.json")}), 2);
  EXPECT_FALSE(err_.str().empty());
}

TEST_F(Cli, CvpRealUsesQuarterGadget) {
  const std::string in = file("c.txt", "cvp 1 2 1\n1 1\n2\n1/8\n");
  ASSERT_EQ(run({"reduce", "--from", "cvp", "--latent", "real", "--p", "1", "--in", in, "--out", path("a.json")}), 0)
      << err_.str();
  EXPECT_NE(out_.str().find("depth: 5"), std::string::npos);
  EXPECT_NE(out_.str().find("quarter"), std::string::npos);
  EXPECT_EQ(run({"invert", "--query", path("a.json"), "--oracle", "falsify", "--restarts", "16"}), 0);
}

TEST_F(Cli, BruteOnRealQueryIsAnInputError) {
  const std::string in = file("f.cnf", "p cnf 1 1\n1 0\n");
  ASSERT_EQ(run({"reduce", "--from", "sat", "--latent", "real", "--in", in, "--out", path("a.json")}), 0);
  EXPECT_EQ(run({"invert", "--query", path("a.json"), "--oracle", "brute"}), 2);
  EXPECT_EQ(run({"invert", "--query", path("a.json"), "--oracle", "pattern"}), 0);
}

TEST_F(Cli, FalsifierWithoutRestartsIsNonCertifying) {
  const InversionQuery query{ReluNetwork(1, {Layer{RationalMatrix::Identity(1, 1), RationalVector::Zero(1)}}),
                             RationalVector::Constant(1, Rational(-1)), 1, Rational(0), Comparison::kAtMost,
                             LatentDomain{DomainKind::kReal, 1}};
  const std::string q = file("q.json", query_to_json(query).dump());
  const int code = run({"invert", "--query", q, "--oracle", "falsify", "--restarts", "0"});
  EXPECT_EQ(code, 1) << err_.str();
  EXPECT_NE(out_.str().find("falsifier-only"), std::string::npos);
}

TEST_F(Cli, VerifyIsDeterministic) {
  ASSERT_EQ(run({"verify", "--family", "sat", "--n-max", "3", "--trials", "30", "--seed", "9"}), 0);
  auto strip = [](std::string s) {
    nlohmann::json j = nlohmann::json::parse(s);
    j.erase("wall_ms");
    return j;
  };
  const nlohmann::json first = strip(out_.str());
  ASSERT_EQ(run({"verify", "--family", "sat", "--n-max", "3", "--trials", "30", "--seed", "9"}), 0);
  EXPECT_EQ(strip(out_.str()), first);
}

TEST_F(Cli, BenchWritesCsv) {
  ASSERT_EQ(run({"bench", "--family", "sat", "--n-from", "3", "--n-to", "4", "--trials", "1", "--out", path("b.csv")}), 0);
  std::ifstream in(path("b.csv"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "family,n,trials,median_ms,states");
}

TEST_F(Cli, CapExceededExitsThree) {
  const std::string in = file("f.cnf", "p cnf 3 1\n1 2 3 0\n");
  ASSERT_EQ(run({"reduce", "--from", "sat", "--in", in, "--out", path("a.json")}), 0);
  ::setenv("INVFORGE_CAP", "2", 1);
  const int code = run({"invert", "--query", path("a.json"), "--oracle", "brute"});
  ::unsetenv("INVFORGE_CAP");
  EXPECT_EQ(code, 3);
}

TEST_F(Cli, ParseErrors) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"invert", "--oracle", "brute"}), 2);
  EXPECT_EQ(run({"reduce", "--from", "sat", "--in", path("missing.cnf"), "--out", path("a.json")}), 2);
}

}  // namespace
}  // namespace invforge
