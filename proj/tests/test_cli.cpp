#include <bubblerad/cli.hpp>

#include <json.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

using namespace bubblerad;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("bubblerad_test_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) {
        const auto p = dir_ / name;
        write_text_file(p, text);
        return p.string();
    }

    std::string lorentzian(double r0_um, double rmin_um, double gamma_ns, double period_us) {
        return write("run.conf", "model = lorentzian\nr0_um = " + format_double(r0_um) + "\nrmin_um = " + format_double(rmin_um) +
                                     "\ngamma_ns = " + format_double(gamma_ns) + "\nperiod_us = " + format_double(period_us) + "\n");
    }

    std::string constant_trace() {
        std::vector<Sample> s;
        for (int i = 0; i < 32; ++i) s.push_back({i * 1e-9, 2e-6});
        write("flat.csv", trajectory_csv_text(s));
        return write("flat.conf", "model = tabulated\ntrajectory_csv = flat.csv\n");
    }

    fs::path dir_;
};

std::vector<std::vector<std::string>> csv_cells(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_F(CliTest, YieldPrintsJson) {
    const auto r = run({"yield", "--config", BUBBLERAD_CONFIG_DIR "/lorentzian.conf"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["photon_number"].get<double>() / lorentzian_photon_number(1e-4, 5.77749960463941e-6), 1.0, 1e-6);
    EXPECT_FALSE(j["supraluminal"].get<bool>());
    EXPECT_NE(r.err.find("verdict: subluminal trajectory, fewer than one photon per pulse"), std::string::npos);
}

TEST_F(CliTest, YieldAt1500MetresPerSecond) {
    const auto p = lorentzian_with_peak_speed(1500.0, 0.5, 1e-9);
    const auto r = run({"yield", "--config", lorentzian(p.r0() * 1e6, p.rmin() * 1e6, 1.0, 0.1), "--quiet"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    const double n = j["photon_number"].get<double>();
    EXPECT_GE(n, 1e-25);
    EXPECT_LE(n, 1e-22);
    EXPECT_NEAR(j["v_max_m_s"].get<double>(), 1500.0, 1e-6);
    EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, YieldToFile) {
    const auto out = (dir_ / "result.json").string();
    const auto r = run({"yield", "--config", BUBBLERAD_CONFIG_DIR "/lorentzian.conf", "--out", out, "--quiet"});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    const auto first = read_text_file(out);
    run({"yield", "--config", BUBBLERAD_CONFIG_DIR "/lorentzian.conf", "--out", out, "--quiet"});
    EXPECT_EQ(read_text_file(out), first);
}

TEST_F(CliTest, MissingConfigIsDataError) {
    const auto missing = (dir_ / "nope.conf").string();
    const auto r = run({"yield", "--config", missing});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find(missing), std::string::npos);
}

TEST_F(CliTest, BadConfigIsDataError) {
    const auto r = run({"yield", "--config", write("bad.conf", "model = lorentzian\nr0_um = 1\nrmin_um = 2\ngamma_ns = 1\nperiod_us = 1\n")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("config:3"), std::string::npos);
}

TEST_F(CliTest, ConstantTraceYieldsZero) {
    const auto r = run({"yield", "--config", constant_trace(), "--quiet"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["photon_number"].get<double>(), 0.0);
    EXPECT_NE(r.out.find("\"photon_number\": 0,"), std::string::npos);
}

TEST_F(CliTest, SupraluminalWarning) {
    const auto r = run({"yield", "--config", lorentzian(1.0, 0.5, 1e-6, 1e-7)});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(nlohmann::json::parse(r.out)["supraluminal"].get<bool>());
    EXPECT_NE(r.err.find("supraluminal velocities"), std::string::npos);
    // The warning survives --quiet.
    EXPECT_NE(run({"yield", "--config", lorentzian(1.0, 0.5, 1e-6, 1e-7), "--quiet"}).err.find("supraluminal velocities"),
              std::string::npos);
}

TEST_F(CliTest, UndersampledTraceIsNumericalError) {
    std::vector<Sample> s;
    const LorentzianPulse p(2e-6, 1e-6, 1e-9, 100e-9);
    for (int i = 0; i < 129; ++i) {
        const double t = 1e-9 + 98e-9 * i / 128.0;
        s.push_back({t, p.radius_at(t)});
    }
    write("coarse.csv", trajectory_csv_text(s));
    const auto r = run({"yield", "--config", write("coarse.conf", "model = tabulated\ntrajectory_csv = coarse.csv\n")});
    EXPECT_EQ(r.code, 3);
}

TEST_F(CliTest, SpectrumPeak) {
    const auto out = (dir_ / "spectrum.csv").string();
    const auto r = run({"spectrum", "--config", BUBBLERAD_CONFIG_DIR "/lorentzian.conf", "--points", "101", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("peak_omega_rad_s 2.500000e+09"), std::string::npos) << r.out;
    const auto rows = csv_cells(read_text_file(out));
    ASSERT_EQ(rows.size(), 102u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"omega_rad_s", "dN_dOmega_s"}));
    EXPECT_EQ(std::stod(rows.back()[0]), 20e9);
}

TEST_F(CliTest, SpectrumNeedsTwoPoints) {
    EXPECT_EQ(run({"spectrum", "--config", BUBBLERAD_CONFIG_DIR "/lorentzian.conf", "--points", "1"}).code, 1);
}

TEST_F(CliTest, SpectrumOfConstantTraceIsZero) {
    const auto r = run({"spectrum", "--config", constant_trace(), "--points", "6", "--omega-max", "1e10"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_cells(r.out);
    ASSERT_EQ(rows.size(), 7u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][1], "0");
}

TEST_F(CliTest, BetaSweepIsQuartic) {
    const auto r = run({"sweep", "--config", BUBBLERAD_CONFIG_DIR "/lorentzian.conf", "--param", "beta", "--from", "1e-6", "--to",
                        "1e-2", "--points", "5", "--scale", "log"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_cells(r.out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0][0], "beta");
    for (std::size_t i = 2; i < rows.size(); ++i) {
        EXPECT_NEAR(std::stod(rows[i][1]) / std::stod(rows[i - 1][1]) / 1e4, 1.0, 1e-6);
        EXPECT_EQ(rows[i][5], "ok");
    }
}

TEST_F(CliTest, RatioSweepAtFixedBeta) {
    const auto r = run({"sweep", "--config", BUBBLERAD_CONFIG_DIR "/lorentzian.conf", "--param", "rmin_over_r0", "--from", "0.1",
                        "--to", "0.9", "--points", "9"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_cells(r.out);
    const double n0 = std::stod(rows[1][1]);
    for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][1]) / n0, 1.0, 1e-6);
}

TEST_F(CliTest, SpeedAndGammaSweeps) {
    const auto v = run({"sweep", "--config", BUBBLERAD_CONFIG_DIR "/lorentzian.conf", "--param", "v_max_m_s", "--from", "500",
                        "--to", "1500", "--points", "3"});
    ASSERT_EQ(v.code, 0) << v.err;
    const auto rows = csv_cells(v.out);
    EXPECT_NEAR(std::stod(rows[3][2]), 1500.0, 1e-6);
    EXPECT_NEAR(std::stod(rows[3][1]) / std::stod(rows[1][1]), 81.0, 1e-5);
    const auto g = run({"sweep", "--config", BUBBLERAD_CONFIG_DIR "/lorentzian.conf", "--param", "gamma_ns", "--from", "1",
                        "--to", "2", "--points", "2"});
    ASSERT_EQ(g.code, 0);
    const auto grows = csv_cells(g.out);
    EXPECT_NEAR(std::stod(grows[1][1]) / std::stod(grows[2][1]), 16.0, 1e-6);
}

TEST_F(CliTest, MinimalSweepHasThreeLines) {
    const auto r = run({"sweep", "--config", BUBBLERAD_CONFIG_DIR "/lorentzian.conf", "--param", "beta", "--from", "1e-4", "--to",
                        "1e-3", "--points", "2"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
}

TEST_F(CliTest, SweepRowOrderIndependentOfJobs) {
    std::vector<std::string> args{"sweep",  "--config", BUBBLERAD_CONFIG_DIR "/lorentzian.conf", "--param", "rmin_over_r0",
                                  "--from", "0.05",     "--to",                                 "0.95",    "--points",
                                  "24",     "--quiet"};
    auto a1 = args;
    a1.insert(a1.end(), {"--jobs", "1"});
    auto a4 = args;
    a4.insert(a4.end(), {"--jobs", "4"});
    EXPECT_EQ(run(a1).out, run(a4).out);
}

TEST_F(CliTest, SweepFailuresStayInRow) {
    const auto r = run({"sweep", "--config", BUBBLERAD_CONFIG_DIR "/lorentzian.conf", "--param", "rmin_over_r0", "--from", "0.5",
                        "--to", "1.5", "--points", "3"});
    ASSERT_EQ(r.code, 0);
    const auto rows = csv_cells(r.out);
    EXPECT_EQ(rows[1][5], "ok");
    EXPECT_EQ(rows[2][5], "invalid");
    EXPECT_EQ(rows[3][5], "invalid");
}

TEST_F(CliTest, SweepUsageErrors) {
    const std::string cfg = BUBBLERAD_CONFIG_DIR "/lorentzian.conf";
    EXPECT_EQ(run({"sweep", "--config", cfg, "--param", "alpha", "--from", "1", "--to", "2"}).code, 1);
    EXPECT_EQ(run({"sweep", "--config", cfg, "--param", "beta", "--from", "2", "--to", "1"}).code, 1);
    EXPECT_EQ(run({"sweep", "--config", cfg, "--param", "beta", "--from", "-1", "--to", "1", "--scale", "log"}).code, 1);
    EXPECT_EQ(run({"sweep", "--config", cfg, "--param", "beta", "--from", "1e-4", "--to", "1e-3", "--points", "1"}).code, 1);
    EXPECT_EQ(run({"sweep", "--config", constant_trace(), "--param", "beta", "--from", "1e-4", "--to", "1e-3"}).code, 2);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({"yield"}).code, 1);
    EXPECT_EQ(run({"spectrum", "--config", BUBBLERAD_CONFIG_DIR "/lorentzian.conf", "--jobs", "0"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, JobsEnvironmentVariable) {
    const std::string cfg = BUBBLERAD_CONFIG_DIR "/lorentzian.conf";
    ::setenv("BUBBLERAD_JOBS", "banana", 1);
    EXPECT_EQ(run({"spectrum", "--config", cfg, "--points", "4"}).code, 1);
    ::setenv("BUBBLERAD_JOBS", "2", 1);
    EXPECT_EQ(run({"spectrum", "--config", cfg, "--points", "4"}).code, 0);
    EXPECT_EQ(cli::resolve_jobs(std::nullopt), 2u);
    EXPECT_EQ(cli::resolve_jobs(3), 3u);
    ::unsetenv("BUBBLERAD_JOBS");
}

// Everything except the velocity-bound grid passes; that row reports the
// shallow-dip violations of the bound.
TEST_F(CliTest, VerifyDefault) {
    const auto r = run({"verify"});
    EXPECT_EQ(r.code, 3);
    std::istringstream in(r.out);
    std::string line;
    int pass = 0, fail = 0;
    while (std::getline(in, line)) {
        if (line.rfind("PASS", 0) == 0)
            ++pass;
        if (line.rfind("FAIL", 0) == 0) {
            ++fail;
            EXPECT_NE(line.find("bound N <= 0.1 (v/c)^4"), std::string::npos) << line;
            EXPECT_NE(line.find("sup N/(v/c)^4"), std::string::npos);
        }
    }
    EXPECT_EQ(fail, 1);
    EXPECT_GE(pass, 14);
    EXPECT_NE(r.out.find("15pi^2/16"), std::string::npos);
    EXPECT_NE(r.out.find("deficit factor"), std::string::npos);
}

TEST_F(CliTest, VerifyImpossibleToleranceFails) {
    const auto r = run({"verify", "--rel-tol", "1e-15", "--quiet"});
    EXPECT_EQ(r.code, 3);
    std::size_t failures = 0;
    for (std::size_t pos = r.out.find("FAIL"); pos != std::string::npos; pos = r.out.find("FAIL", pos + 1)) ++failures;
    EXPECT_GE(failures, 3u);
    EXPECT_NE(r.out.find("FAIL  form factor |F(1/gamma)|"), std::string::npos);
}
