#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "surfimp/baselines.hpp"
#include "surfimp/io.hpp"

using namespace surfimp;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("surfimp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  CmdResult run(const std::string& args) const {
    const std::string cmd = std::string(SURFIMP_CLI) + " " + args + " >" + path("stdout.txt") + " 2>" + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(path("stdout.txt")), slurp(path("stderr.txt"))};
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateIsDeterministic) {
  ASSERT_EQ(run("simulate turned --seed 1 --out " + path("a.csv")).code, 0);
  ASSERT_EQ(run("simulate turned --seed 1 --out " + path("b.csv")).code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  ASSERT_EQ(run("simulate turned --seed 2 --out " + path("c.csv")).code, 0);
  EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
}

TEST_F(Cli, ChirpDefaultRowCount) {
  ASSERT_EQ(run("simulate chirp --seed 1 --out " + path("c.csv")).code, 0);
  const std::string s = slurp(path("c.csv"));
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 5001);
}

TEST_F(Cli, MalformedConfigKey) {
  write("bad.cfg", "variance = 10\nperiodd = 0.1\n");
  const CmdResult r = run("simulate turned --config " + path("bad.cfg") + " --seed 1 --out " + path("x.csv"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("periodd"), std::string::npos);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("x.csv")));
}

TEST_F(Cli, ConfigOverridesGrid) {
  write("small.cfg", "# short profile\nn = 300\ndx = 0.001\n");
  ASSERT_EQ(run("simulate turned --config " + path("small.cfg") + " --seed 4 --out " + path("t.csv")).code, 0);
  const Profile p = read_profile_csv(path("t.csv"));
  EXPECT_EQ(p.size(), 300u);
  EXPECT_DOUBLE_EQ(p.grid().dx(), 0.001);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("simulate cone --seed 1 --out " + path("x.csv")).code, 2);
  EXPECT_EQ(run("simulate turned --out " + path("x.csv")).code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, MaskCountMatchesFile) {
  ASSERT_EQ(run("simulate turned --seed 1 --out " + path("t.csv")).code, 0);
  const CmdResult r = run("mask dales --count 5 --volume-threshold 0.03 --in " + path("t.csv") + " --out " + path("m.csv"));
  ASSERT_EQ(r.code, 0);
  const Profile m = read_profile_csv(path("m.csv"));
  EXPECT_EQ(r.out, "masked " + std::to_string(m.invalid_count()) + "\n");
  const std::string s = slurp(path("m.csv"));
  std::size_t rows_invalid = 0;
  for (std::size_t pos = s.find(",0\n"); pos != std::string::npos; pos = s.find(",0\n", pos + 1)) ++rows_invalid;
  EXPECT_EQ(rows_invalid, m.invalid_count());
  // heights of masked rows are kept
  EXPECT_EQ(m.z(), read_profile_csv(path("t.csv")).z());

  std::size_t runs = 0;
  for (std::size_t i = 0; i < m.size(); ++i) runs += (!m.is_valid(i) && (i == 0 || m.is_valid(i - 1))) ? 1 : 0;
  EXPECT_EQ(runs, 5u);
}

TEST_F(Cli, GradientMaskInfinityMasksNothing) {
  ASSERT_EQ(run("simulate chirp --seed 1 --out " + path("c.csv")).code, 0);
  const CmdResult r = run("mask gradient --threshold inf --in " + path("c.csv") + " --out " + path("m.csv"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "masked 0\n");
}

TEST_F(Cli, MeanOnToyMatchesLibrary) {
  write("toy.csv", "x_mm,z_um,valid\n0,1,1\n0.5,nan,0\n1,3,1\n");
  ASSERT_EQ(run("impute mean --in " + path("toy.csv") + " --out " + path("o.csv")).code, 0);
  const Profile got = read_profile_csv(path("o.csv"));
  const Profile want = impute_constant(read_profile_csv(path("toy.csv")), Statistic::mean);
  EXPECT_EQ(got.z(), want.z());
  EXPECT_TRUE(got.fully_valid());
}

TEST_F(Cli, ImputeRejectsCompleteProfile) {
  write("full.csv", "x_mm,z_um,valid\n0,1,1\n1,3,1\n");
  EXPECT_EQ(run("impute nn --in " + path("full.csv") + " --out " + path("o.csv")).code, 1);
}

TEST_F(Cli, StochasticModelsNeedSeed) {
  write("toy.csv", "x_mm,z_um,valid\n0,1,1\n0.5,nan,0\n1,3,1\n");
  const CmdResult r = run("impute sm --in " + path("toy.csv") + " --out " + path("o.csv"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--seed"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("o.csv")));
}

TEST_F(Cli, SmImputationDeterministicAndKeepsValidRows) {
  write("small.cfg", "n = 240\ndx = 0.002\n");
  ASSERT_EQ(run("simulate turned --config " + path("small.cfg") + " --seed 3 --out " + path("t.csv")).code, 0);
  ASSERT_EQ(run("mask dales --count 1 --volume-threshold 0.03 --in " + path("t.csv") + " --out " + path("m.csv")).code, 0);
  const std::string flags = " --seed 5 --init-rsm 0.1 --max-iterations 20 --restarts 1 --in " + path("m.csv");
  ASSERT_EQ(run("impute sm" + flags + " --out " + path("a.csv")).code, 0);
  ASSERT_EQ(run("impute sm" + flags + " --out " + path("b.csv") + " --posterior " + path("b_post.csv")).code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a_posterior.csv")), slurp(path("b_post.csv")));

  const Profile in = read_profile_csv(path("m.csv"));
  const Profile out = read_profile_csv(path("a.csv"));
  EXPECT_TRUE(out.fully_valid());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in.is_valid(i)) {
      EXPECT_EQ(out.z()[i], in.z()[i]);
    }
  }
  EXPECT_EQ(read_posterior_csv(path("a_posterior.csv")).size(), in.invalid_count());

  const CmdResult e = run("eval --truth " + path("t.csv") + " --imputed " + path("a.csv") + " --masked " + path("m.csv") +
                    " --posterior " + path("a_posterior.csv") + " --out " + path("e.csv"));
  EXPECT_EQ(e.code, 0);
  EXPECT_NE(e.out.find("coverage"), std::string::npos);
  EXPECT_EQ(slurp(path("e.csv")).rfind("rmse_um,", 0), 0u);

  ASSERT_EQ(run("plot --measured " + path("m.csv") + " --truth " + path("t.csv") + " --imputed " + path("a.csv") +
                " --posterior " + path("a_posterior.csv") + " --out " + path("p.svg"))
                .code,
            0);
  const std::string svg = slurp(path("p.svg"));
  EXPECT_NE(svg.find("<polygon class=\"band\""), std::string::npos);
  EXPECT_NE(svg.find("<rect class=\"masked\""), std::string::npos);
}

TEST_F(Cli, EvalOfTruthIsZero) {
  write("t.csv", "x_mm,z_um,valid\n0,1,1\n0.5,2,1\n1,3,1\n");
  write("m.csv", "x_mm,z_um,valid\n0,1,1\n0.5,nan,0\n1,3,1\n");
  const CmdResult r = run("eval --truth " + path("t.csv") + " --imputed " + path("t.csv") + " --masked " + path("m.csv"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rmse      0 um"), std::string::npos);
}

TEST_F(Cli, EvalGridMismatch) {
  write("t.csv", "x_mm,z_um,valid\n0,1,1\n0.5,2,1\n1,3,1\n");
  write("m.csv", "x_mm,z_um,valid\n0,1,1\n1,nan,0\n2,3,1\n");
  EXPECT_EQ(run("eval --truth " + path("t.csv") + " --imputed " + path("t.csv") + " --masked " + path("m.csv")).code, 1);
}

TEST_F(Cli, GsmFromSavedModel) {
  write("small.cfg", "n = 200\ndx = 0.000125\n");
  ASSERT_EQ(run("simulate chirp --config " + path("small.cfg") + " --seed 1 --out " + path("c.csv")).code, 0);
  ASSERT_EQ(run("mask gradient --fraction 0.2 --in " + path("c.csv") + " --out " + path("m.csv")).code, 0);
  const std::string common = " --seed 2 --in " + path("m.csv");
  ASSERT_EQ(run("impute gsm" + common +
                " --wavelength-start 0.01 --wavelength-end 0.012 --representatives 10 --max-iterations 5 --save-model " +
                path("model.txt") + " --out " + path("a.csv"))
                .code,
            0);
  ASSERT_EQ(run("impute gsm" + common + " --load-model " + path("model.txt") + " --out " + path("b.csv")).code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(run("impute gsm" + common + " --out " + path("c.csv")).code, 1);
}
