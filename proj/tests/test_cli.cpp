#include "cli_app.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

using namespace sto;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("sto_cli_test_" + std::to_string(std::random_device{}()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args, const fs::path& out_dir)
  {
    args.push_back("--out");
    args.push_back(out_dir.string());
    out_.str("");
    err_.str("");
    return cli::run(std::move(args), out_, err_);
  }

  int run_raw(std::vector<std::string> args)
  {
    out_.str("");
    err_.str("");
    return cli::run(std::move(args), out_, err_);
  }

  static std::string slurp(const fs::path& p)
  {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
  }

  static std::vector<std::string> lines(const fs::path& p)
  {
    std::vector<std::string> out;
    std::ifstream is(p);
    for (std::string l; std::getline(is, l);)
      out.push_back(l);
    return out;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

} // namespace

TEST(FormatDouble, RoundTrips)
{
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 20);
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
}

TEST_F(CliTest, RunWritesResultTraceAndManifest)
{
  ASSERT_EQ(run({"run", "--function", "beale", "--algorithm", "sto", "--k1", "random", "--pop", "40",
                 "--iters", "100", "--seed", "1"},
                dir_),
            0)
      << err_.str();
  ASSERT_TRUE(fs::exists(dir_ / "run.json"));
  ASSERT_TRUE(fs::exists(dir_ / "trace.csv"));
  ASSERT_TRUE(fs::exists(dir_ / "manifest.json"));
  const auto trace = lines(dir_ / "trace.csv");
  EXPECT_EQ(trace.front(), "iteration,best_cost");
  EXPECT_EQ(trace.size(), 101u);
  const auto j = io::json::parse(slurp(dir_ / "run.json"));
  EXPECT_EQ(j["result"]["total_evaluations"], 40 + 100 * 39);
  const auto m = io::json::parse(slurp(dir_ / "manifest.json"));
  EXPECT_EQ(m["subcommand"], "run");
  EXPECT_EQ(m["resolved"]["population"], 40);
  EXPECT_TRUE(m.contains("created_at"));
}

TEST_F(CliTest, UnknownNamesAreUsageErrors)
{
  EXPECT_EQ(run({"run", "--function", "sphere"}, dir_), 2);
  EXPECT_NE(err_.str().find("eggholder"), std::string::npos);
  EXPECT_NE(err_.str().find("rastrigin"), std::string::npos);
  EXPECT_EQ(run({"run", "--algorithm", "de"}, dir_), 2);
  EXPECT_NE(err_.str().find("tlbo"), std::string::npos);
  EXPECT_EQ(run({"run", "--k1", "40"}, dir_), 2);
  EXPECT_EQ(run({"run", "--k1", "abc"}, dir_), 2);
  EXPECT_EQ(run({"run", "--function", "beale", "--dim", "3"}, dir_), 2);
  EXPECT_EQ(run({"run", "--algorithm", "pso", "--trace-particles"}, dir_), 2);
  EXPECT_EQ(run({"table", "--preset", "fast"}, dir_), 2);
  EXPECT_EQ(run({"dim-sweep", "--dims", "2,x"}, dir_), 2);
  EXPECT_EQ(run({"dim-sweep", "--trials", "0"}, dir_), 2);
  EXPECT_EQ(run_raw({"bogus"}), 2);
  EXPECT_EQ(run_raw({}), 2);
  EXPECT_EQ(run_raw({"run", "--pop", "-3"}), 2);
}

TEST_F(CliTest, SweepDiameterHasOneRowPerK1)
{
  ASSERT_EQ(run({"sweep-diameter", "--function", "eggholder", "--pop", "40", "--trials", "2", "--iters",
                 "10", "--seed", "3"},
                dir_),
            0)
      << err_.str();
  const auto rows = lines(dir_ / "sweep.csv");
  ASSERT_EQ(rows.size(), 40u);
  EXPECT_EQ(rows[0], "k1,algorithm,success");
  EXPECT_EQ(rows[1].substr(0, 6), "1,sto,");
  EXPECT_EQ(rows[39].substr(0, 7), "39,sto,");
}

TEST_F(CliTest, TableMirrorsComparisonLayout)
{
  ASSERT_EQ(run({"table", "--preset", "paper", "--trials", "2", "--tune-trials", "1", "--seed", "7"}, dir_),
            0)
      << err_.str();
  const auto j = io::json::parse(slurp(dir_ / "table.json"));
  ASSERT_EQ(j["columns"].size(), 5u);
  ASSERT_EQ(j["rows"].size(), 5u);
  EXPECT_EQ(j["rows"][0]["algorithm"], "sto_tuned");
  EXPECT_TRUE(j["rows"][0]["success"][4].is_null());
  EXPECT_EQ(j["rows"][1]["algorithm"], "sto");
  EXPECT_EQ(j["rows"][4]["algorithm"], "tlbo");
  EXPECT_EQ(j["tuned_k1"]["rosenbrock_modified"], 35);
  EXPECT_EQ(j["population"], 40);
  EXPECT_EQ(j["iterations"], 100);
}

TEST_F(CliTest, TraceEmitsFramesWithOneColdestEach)
{
  ASSERT_EQ(run({"trace", "--function", "eggholder", "--pop", "12", "--iters", "15", "--seed", "2"}, dir_), 0)
      << err_.str();
  const auto rows = lines(dir_ / "trajectory.csv");
  EXPECT_EQ(rows[0], "iteration,particle,current_type,x1,x2,cost");
  ASSERT_EQ(rows.size(), 1u + 16u * 12u);
  std::map<int, int> coldest, frame0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int it = std::stoi(rows[i]);
    if (it == 0)
      ++frame0[0];
    if (rows[i].find(",coldest,") != std::string::npos)
      ++coldest[it];
  }
  EXPECT_EQ(frame0[0], 12);
  ASSERT_EQ(coldest.size(), 16u);
  for (auto [it, n] : coldest)
    EXPECT_EQ(n, 1) << it;
}

TEST_F(CliTest, TraceWarnsOutsideTwoDimensions)
{
  ASSERT_EQ(run({"trace", "--function", "rastrigin", "--dim", "3", "--pop", "6", "--iters", "3"}, dir_), 0);
  EXPECT_NE(err_.str().find("warning"), std::string::npos);
  EXPECT_EQ(lines(dir_ / "trajectory.csv")[0], "iteration,particle,current_type,x1,x2,x3,cost");
}

TEST_F(CliTest, ReplayReproducesDataFilesByteForByte)
{
  ASSERT_EQ(run({"curves", "--function", "beale", "--runs", "3", "--iters", "20", "--seed", "4"}, dir_ / "a"),
            0)
      << err_.str();
  ASSERT_EQ(run_raw({"replay", "--manifest", (dir_ / "a" / "manifest.json").string(), "--out",
                     (dir_ / "b").string()}),
            0)
      << err_.str();
  for (const char* f : {"convergence.csv", "convergence_runs.csv"})
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  EXPECT_EQ(lines(dir_ / "a" / "convergence.csv").size(), 1u + 4u * 20u);
  EXPECT_EQ(run_raw({"replay", "--manifest", (dir_ / "missing.json").string()}), 2);
}

TEST_F(CliTest, SuccessReportIndependentOfWorkerCount)
{
  ASSERT_EQ(run({"success", "--function", "ripple25", "--trials", "12", "--iters", "30", "--serial"}, dir_ / "s"),
            0);
  ASSERT_EQ(run({"success", "--function", "ripple25", "--trials", "12", "--iters", "30", "--workers", "3"},
                dir_ / "p"),
            0);
  EXPECT_EQ(slurp(dir_ / "s" / "report.json"), slurp(dir_ / "p" / "report.json"));
  const auto j = io::json::parse(slurp(dir_ / "s" / "report.json"));
  EXPECT_EQ(j["report"]["per_trial"].size(), 12u);
  EXPECT_EQ(j["spec"]["criterion"]["kind"], "distortion");
}

TEST_F(CliTest, DimSweepAndRuntimeOutputs)
{
  ASSERT_EQ(run({"dim-sweep", "--dims", "2,3", "--trials", "2", "--iters", "20", "--pop", "10"}, dir_), 0)
      << err_.str();
  EXPECT_EQ(lines(dir_ / "dim_sweep.csv").size(), 1u + 8u);
  ASSERT_EQ(run({"runtime", "--runs", "1", "--iters", "5"}, dir_), 0) << err_.str();
  const auto rows = lines(dir_ / "runtime.csv");
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[1], "sto,39,235");
  EXPECT_EQ(rows[4], "tlbo,80,440");
  EXPECT_TRUE(fs::exists(dir_ / "runtime_timing.json"));
}

TEST_F(CliTest, OutputDirectoryFromEnvironment)
{
  ::setenv(cli::out_dir_env, (dir_ / "env").string().c_str(), 1);
  const int code = run_raw({"run", "--iters", "3"});
  ::unsetenv(cli::out_dir_env);
  ASSERT_EQ(code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "env" / "run.json"));
}
