#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace rfpe::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        root_ = fs::temp_directory_path() /
                ("rfpe_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(root_);
        fs::create_directories(root_);
    }
    void TearDown() override { fs::remove_all(root_); }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), {"rfpe", "run"});
        out_.str("");
        err_.str("");
        return run_command(args, out_, err_);
    }

    std::string dir(const std::string& name) const { return (root_ / name).string(); }

    static std::string slurp(const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
    }

    fs::path root_;
    std::ostringstream out_, err_;
};

const std::vector<std::string> kSmall{"--preset", "fig1", "--trials", "6", "--n-experiments", "25", "--seed", "7"};

std::vector<std::string> with(std::vector<std::string> base, const std::vector<std::string>& extra) {
    base.insert(base.end(), extra.begin(), extra.end());
    return base;
}

TEST_F(CliTest, WritesCsvAndManifest) {
    ASSERT_EQ(run(with(kSmall, {"--out", dir("a")})), kSuccess) << err_.str();
    for (const char* f : {"aggregate.csv", "traces.csv", "trials.csv", "cdf.csv", "manifest.txt"})
        EXPECT_TRUE(fs::exists(root_ / "a" / f)) << f;
    std::ifstream agg(root_ / "a" / "aggregate.csv");
    std::string header, row;
    std::getline(agg, header);
    EXPECT_EQ(header.rfind("n,median_error,", 0), 0u);
    std::getline(agg, row);
    EXPECT_EQ(row.rfind("1,", 0), 0u);
    const std::string traces = slurp(root_ / "a" / "traces.csv");
    EXPECT_EQ(std::count(traces.begin(), traces.end(), '\n'), 1 + 6 * 25);
    const std::string manifest = slurp(root_ / "a" / "manifest.txt");
    EXPECT_NE(manifest.find("preset=fig1\n"), std::string::npos);
    EXPECT_NE(manifest.find("seed=7\n"), std::string::npos);
    EXPECT_NE(manifest.find("tau=0.10000000000000001\n"), std::string::npos);
}

TEST_F(CliTest, ManifestReplayIsByteIdentical) {
    ASSERT_EQ(run(with(kSmall, {"--restart", "on", "--update", "circular", "--out", dir("a")})), kSuccess);
    ASSERT_EQ(run({"--manifest", dir("a") + "/manifest.txt", "--out", dir("b")}), kSuccess) << err_.str();
    for (const char* f : {"aggregate.csv", "traces.csv", "trials.csv", "cdf.csv", "manifest.txt"})
        EXPECT_EQ(slurp(root_ / "a" / f), slurp(root_ / "b" / f)) << f;
}

TEST_F(CliTest, FlagsOverrideManifest) {
    ASSERT_EQ(run(with(kSmall, {"--out", dir("a")})), kSuccess);
    ASSERT_EQ(run({"--manifest", dir("a") + "/manifest.txt", "--seed", "8", "--out", dir("b")}), kSuccess);
    EXPECT_NE(slurp(root_ / "b" / "manifest.txt").find("seed=8\n"), std::string::npos);
    EXPECT_NE(slurp(root_ / "a" / "traces.csv"), slurp(root_ / "b" / "traces.csv"));
}

TEST_F(CliTest, ThreadCountDoesNotChangeOutput) {
    ASSERT_EQ(run(with(kSmall, {"--threads", "1", "--out", dir("a")})), kSuccess);
    ASSERT_EQ(run(with(kSmall, {"--threads", "3", "--out", dir("b")})), kSuccess);
    EXPECT_EQ(slurp(root_ / "a" / "traces.csv"), slurp(root_ / "b" / "traces.csv"));
}

TEST_F(CliTest, ConfigErrors) {
    EXPECT_EQ(run({"--preset", "nope"}), kConfigError);
    EXPECT_EQ(run(with(kSmall, {"--tau", "2", "--out", dir("a")})), kConfigError);
    EXPECT_EQ(run(with(kSmall, {"--update", "magic"})), kConfigError);
    EXPECT_EQ(run({"--no-such-flag"}), kConfigError);
    EXPECT_EQ(run({"--manifest", dir("missing.txt")}), kConfigError);
    EXPECT_NE(err_.str().find("manifest"), std::string::npos);
    EXPECT_FALSE(fs::exists(root_ / "a"));
}

TEST_F(CliTest, HelpIsNotAnError) { EXPECT_EQ(run({"--help"}), kSuccess); }

TEST_F(CliTest, CheckPassesOnHealthyRun) {
    EXPECT_EQ(run({"--preset", "fig1", "--trials", "30", "--check", "--no-traces", "--out", dir("a")}), kSuccess)
        << out_.str();
    EXPECT_NE(out_.str().find("PASS decay_exponent"), std::string::npos);
    EXPECT_FALSE(fs::exists(root_ / "a" / "traces.csv"));
}

TEST_F(CliTest, CheckFailureHasItsOwnExitCode) {
    EXPECT_EQ(run({"--preset", "fig1", "--trials", "20", "--gamma", "0.5", "--check", "--no-traces", "--out",
                   dir("a")}),
              kCheckFailed)
        << out_.str();
    EXPECT_NE(out_.str().find("FAIL "), std::string::npos);
}

TEST(Presets, MatchScenarios) {
    EXPECT_EQ(preset_scenario("fig1").run.filter.samples, 200u);
    EXPECT_EQ(preset_scenario("t2").run.noise.t2, 1000.0);
    const Scenario tracking = preset_scenario("tracking");
    EXPECT_EQ(tracking.run.eigenphases, 16u);
    EXPECT_EQ(tracking.run.noise.t2, 1e4);
    EXPECT_TRUE(tracking.run.tracking);
    EXPECT_TRUE(preset_scenario("restart").run.restarts);
    EXPECT_GT(preset_scenario("gamma").run.noise.gamma, 0.0);
    EXPECT_THROW(preset_scenario("fig2"), std::invalid_argument);
}

}  // namespace
}  // namespace rfpe::cli
