#include "horizon_probe/cli.hpp"
#include "horizon_probe/errors.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace hp = horizon_probe;
using hp::testing::read_file;
using hp::testing::TempDir;
using hp::testing::write_file;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "horizon-probe");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = hp::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string config_in(const TempDir& dir, const std::string& body) {
    const auto path = dir / "config.json";
    write_file(path, body);
    return path.string();
}

}  // namespace

TEST(Cli, MissingPriceFileIsDataError) {
    TempDir dir("cli");
    const auto cfg = config_in(dir, R"({"price_csv": "nowhere/prices.csv"})");
    const auto r = run_cli({"global", "--config", cfg});
    EXPECT_EQ(r.code, hp::kExitData);
    EXPECT_NE(r.err.find("nowhere/prices.csv"), std::string::npos);
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, MalformedPriceFileNamesPathAndLine) {
    TempDir dir("cli");
    write_file(dir / "p.csv", "timestamp,price_eur_mwh\n2024-01-01T00:00:00Z,1\n2024-01-01T01:00:00Z,oops\n");
    const auto cfg = config_in(dir, R"({"price_csv": "p.csv"})");
    const auto r = run_cli({"global", "--config", cfg});
    EXPECT_EQ(r.code, hp::kExitData);
    EXPECT_NE(r.err.find("p.csv"), std::string::npos);
    EXPECT_NE(r.err.find("line 3"), std::string::npos);
}

TEST(Cli, GlobalFromCsvWritesTrajectory) {
    TempDir dir("cli");
    write_file(dir / "p.csv", "timestamp,price_eur_mwh\n2024-01-01T00:00:00Z,10\n2024-01-01T01:00:00Z,50\n");
    const auto cfg = config_in(dir, R"({"price_csv": "p.csv", "output_dir": "res"})");
    const auto r = run_cli({"global", "--config", cfg});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "global profit = 60 EUR over 2 steps\n");
    EXPECT_TRUE(std::filesystem::exists(dir / "res/global_trajectory.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "res/global_trajectory.json"));
}

TEST(Cli, ConfigErrorsNameTheKey) {
    TempDir dir("cli");
    auto r = run_cli({"global", "--config", config_in(dir, R"({"synthetic": {"kind": "constant", "length": 5}, "speed": 1})")});
    EXPECT_EQ(r.code, hp::kExitUsage);
    EXPECT_NE(r.err.find("config.speed"), std::string::npos);

    r = run_cli({"global", "--config", config_in(dir, R"({"synthetic": {"kind": "constant", "length": 5}, "ess": {"eta_c": "high"}})")});
    EXPECT_EQ(r.code, hp::kExitUsage);
    EXPECT_NE(r.err.find("config.ess.eta_c"), std::string::npos);

    r = run_cli({"global", "--config", config_in(dir, R"({"synthetic": {"kind": "walk", "length": 5}})")});
    EXPECT_EQ(r.code, hp::kExitUsage);
    EXPECT_NE(r.err.find("config.synthetic.kind"), std::string::npos);

    r = run_cli({"global", "--config", config_in(dir, R"({"synthetic": {"kind": "constant", "length": 5}, "t_range": [9, 4]})")});
    EXPECT_EQ(r.code, hp::kExitUsage);
    EXPECT_NE(r.err.find("config.t_range"), std::string::npos);

    r = run_cli({"global", "--config", config_in(dir, "{not json")});
    EXPECT_EQ(r.code, hp::kExitUsage);

    r = run_cli({"global", "--config", (dir / "absent.json").string()});
    EXPECT_EQ(r.code, hp::kExitUsage);
}

TEST(Cli, UsageErrors) {
    TempDir dir("cli");
    const auto cfg = config_in(dir, R"({"synthetic": {"kind": "constant", "length": 10}})");
    EXPECT_EQ(run_cli({}).code, hp::kExitUsage);
    EXPECT_EQ(run_cli({"launch", "--config", cfg}).code, hp::kExitUsage);
    EXPECT_EQ(run_cli({"global"}).code, hp::kExitUsage);
    EXPECT_EQ(run_cli({"rolling", "--config", cfg}).code, hp::kExitUsage);
    EXPECT_EQ(run_cli({"rolling", "--config", cfg, "--T", "11"}).code, hp::kExitUsage);
    EXPECT_EQ(run_cli({"sweep", "--config", cfg, "--parallel", "0"}).code, hp::kExitUsage);
    // default t_range upper bound 88 exceeds the 10-step series
    EXPECT_EQ(run_cli({"sweep", "--config", cfg}).code, hp::kExitUsage);
}

TEST(Cli, SeedOnlyForSyntheticPrices) {
    TempDir dir("cli");
    write_file(dir / "p.csv", "timestamp,price_eur_mwh\n2024-01-01T00:00:00Z,10\n2024-01-01T01:00:00Z,50\n");
    const auto r = run_cli({"global", "--config", config_in(dir, R"({"price_csv": "p.csv"})"), "--seed", "3"});
    EXPECT_EQ(r.code, hp::kExitUsage);
}

TEST(Cli, SolverFailureExitCode) {
    TempDir dir("cli");
    const auto cfg = config_in(dir, R"({"synthetic": {"kind": "constant", "length": 6},
        "ess": {"soc_min": 9.95, "soc_init": 9.95, "p_charge_max": 0.01}})");
    const auto r = run_cli({"global", "--config", cfg});
    EXPECT_EQ(r.code, hp::kExitSolver);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, FindHorizonConstantPrices) {
    TempDir dir("cli");
    const auto cfg = config_in(dir, R"({"synthetic": {"kind": "constant", "length": 48}, "t_range": [2, 10]})");
    const auto r = run_cli({"find-horizon", "--config", cfg});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "T* = 2\n");
    EXPECT_TRUE(std::filesystem::exists(dir / "out/horizon_search.json"));
}

TEST(Cli, FindHorizonReportsAbsence) {
    TempDir dir("cli");
    const auto cfg =
        config_in(dir, R"({"synthetic": {"kind": "spiky-random", "length": 240, "seed": 7}, "t_range": [2, 5]})");
    const auto r = run_cli({"find-horizon", "--config", cfg});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "no forecast horizon found up to 5\n");
}

TEST(Cli, RollingWritesTrajectory) {
    TempDir dir("cli");
    const auto cfg = config_in(dir, R"({"synthetic": {"kind": "sinusoid", "length": 48}})");
    const auto r = run_cli({"rolling", "--config", cfg, "--T", "6", "--out", (dir / "r").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(std::filesystem::exists(dir / "r/rolling_T6.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "r/rolling_T6.json"));
    EXPECT_NE(read_file(dir / "r/run_log.txt").find("rolling_T6.csv command=rolling"), std::string::npos);
}

TEST(Cli, SweepIsDeterministicAndParallelSafe) {
    TempDir dir("cli");
    const auto cfg = config_in(
        dir, R"({"synthetic": {"kind": "spiky-random", "length": 120, "seed": 1}, "t_range": [2, 20]})");
    ASSERT_EQ(run_cli({"sweep", "--config", cfg, "--out", (dir / "a").string()}).code, 0);
    ASSERT_EQ(run_cli({"sweep", "--config", cfg, "--out", (dir / "b").string(), "--parallel", "4"}).code, 0);
    for (const char* f : {"match_matrix.csv", "match_pct.csv", "profit_by_T.csv", "global_trajectory.csv",
                          "global_trajectory.json", "run_log.txt"}) {
        EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "b" / f)) << f;
    }
}

TEST(Cli, SeedOverrideChangesData) {
    TempDir dir("cli");
    const auto cfg = config_in(dir, R"({"synthetic": {"kind": "spiky-random", "length": 30, "seed": 1}})");
    ASSERT_EQ(run_cli({"global", "--config", cfg, "--out", (dir / "a").string()}).code, 0);
    ASSERT_EQ(run_cli({"global", "--config", cfg, "--out", (dir / "b").string(), "--seed", "2"}).code, 0);
    EXPECT_NE(read_file(dir / "a/prices.csv"), read_file(dir / "b/prices.csv"));
}

TEST(Cli, ReportWritesFigureData) {
    TempDir dir("cli");
    const auto cfg = config_in(dir, R"({"synthetic": {"kind": "spiky-random", "length": 100, "seed": 3},
        "t_range": [2, 12], "report": {"profit_curve_horizons": [4, 8, 30]}})");
    const auto r = run_cli({"report", "--config", cfg});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto out = dir / "out";
    for (const char* f : {"prices.csv", "global_trajectory.csv", "match_matrix.csv", "match_pct.csv",
                          "profit_by_T.csv", "rolling_vs_global.csv", "profit_curves.csv", "summary.json"}) {
        EXPECT_TRUE(std::filesystem::exists(out / f)) << f;
    }
    const auto curves = read_file(out / "profit_curves.csv");
    EXPECT_EQ(curves.substr(0, curves.find('\n')), "t,global,T4,T8,T30");
    EXPECT_EQ(std::count(curves.begin(), curves.end(), '\n'), 101);
    const auto log = read_file(out / "run_log.txt");
    EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 9);
    EXPECT_NE(log.find("version=" + std::string(hp::kVersion)), std::string::npos);
}

TEST(Config, HashIgnoresExecutionSettings) {
    const auto base = hp::parse_config(nlohmann::json::parse(R"({"synthetic": {"kind": "constant", "length": 5}})"), "");
    auto other = base;
    other.parallelism = 8;
    other.output_dir = "/elsewhere";
    EXPECT_EQ(hp::config_hash(base), hp::config_hash(other));
    other.epsilon = 1e-3;
    EXPECT_NE(hp::config_hash(base), hp::config_hash(other));
    EXPECT_EQ(hp::config_hash(base).size(), 16u);
}

TEST(Config, DefaultsAndRelativePaths) {
    const auto c = hp::parse_config(nlohmann::json::parse(R"({"price_csv": "data/p.csv", "output_dir": "o"})"), "/cfg");
    EXPECT_EQ(*c.prices.csv, std::filesystem::path("/cfg/data/p.csv"));
    EXPECT_EQ(c.output_dir, std::filesystem::path("/cfg/o"));
    EXPECT_EQ(c.t_lo, 2u);
    EXPECT_EQ(c.t_hi, 88u);
    EXPECT_EQ(c.epsilon, 1e-4);
    EXPECT_EQ(c.parallelism, 1u);
    EXPECT_EQ(c.ess, hp::reference_params());
    EXPECT_THROW((void)hp::parse_config(nlohmann::json::parse(R"({})"), ""), hp::ConfigError);
    EXPECT_THROW((void)hp::parse_config(
                     nlohmann::json::parse(R"({"price_csv": "a", "synthetic": {"kind": "constant", "length": 5}})"), ""),
                 hp::ConfigError);
}
