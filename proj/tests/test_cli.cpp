#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

using nlohmann::json;

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(PAULTRAP_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf{};
    while (auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string run_stderr(const std::string& args) {
    const std::string cmd = std::string(PAULTRAP_CLI) + " " + args + " 2>&1 >/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf{};
    while (auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    pclose(pipe);
    return out;
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + "/" + name; }

}  // namespace

TEST(Cli, Table1) {
    const auto r = run("table1");
    ASSERT_EQ(r.status, 0);
    const auto j = json::parse(r.out);
    ASSERT_EQ(j.size(), 4u);
    EXPECT_EQ(j[0]["l"], 1);
    EXPECT_EQ(j[0]["nprime"], 4);
    EXPECT_NEAR(j[0]["omega_tau"].get<double>(), 3.14159, 1e-5);
    EXPECT_NEAR(j[3]["omega_tau"].get<double>(), 3.48328, 1e-5);
}

TEST(Cli, CisRow) {
    const auto r = run("cis --l 1 --nprime 3");
    ASSERT_EQ(r.status, 0);
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["omega_tau"].get<double>(), 2.63690, 1e-5);
    EXPECT_EQ(j["epsilon"], 1);
    EXPECT_EQ(j["rule"], "b");
}

TEST(Cli, CisNoRoot) {
    EXPECT_EQ(run("cis --l 1 --nprime 99999").status, 1);
    EXPECT_NE(run_stderr("cis --l 1 --nprime 99999").find("no root"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("cis --l 1").status, 2);
    EXPECT_EQ(run("cis --l 1 --nprime 4 --bogus").status, 2);
    EXPECT_EQ(run("stability --omega1 1:2").status, 2);
    EXPECT_EQ(run("interfere --config /nonexistent/file.json").status, 2);
    EXPECT_EQ(run("estimate --D -1").status, 2);
    EXPECT_EQ(run("nosuchcommand").status, 2);
}

TEST(Cli, GMinusTraceIsTwoPeriodic) {
    const auto path = temp_path("trace.csv");
    ASSERT_EQ(run("gminus --l 1 --nprime 4 --periods 4 -o " + path).status, 0);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,g_minus,g_zero,g_plus");
    std::vector<double> g;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string t, gm;
        std::getline(ls, t, ',');
        std::getline(ls, gm, ',');
        g.push_back(std::stod(gm));
    }
    ASSERT_EQ(g.size(), 801u);
    // 200 samples per period, so a shift of 400 rows is 2 tau
    for (std::size_t i = 0; i + 400 < g.size(); ++i) EXPECT_NEAR(g[i + 400], g[i], 1e-8 * std::abs(g[i]) + 1e-12);
    // and not 1 tau periodic
    double diff = 0;
    for (std::size_t i = 0; i + 200 < g.size(); ++i) diff = std::max(diff, std::abs(g[i + 200] - g[i]));
    EXPECT_GT(diff, 1e-2);
}

TEST(Cli, StabilityCsv) {
    const auto path = temp_path("map.csv");
    ASSERT_EQ(run("stability --omega1 0:6.3:0.5 --omega2 0:6.3:0.5 -o " + path).status, 0);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "omega1_tau,omega2_tau,lambda_x,lambda_y,x_stable,y_stable");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 12 * 12);
}

TEST(Cli, ByteIdenticalOutput) {
    const auto a = run("stability --omega1 0.1:3:0.1 --omega2 0.1:3:0.1");
    const auto b = run("stability --omega1 0.1:3:0.1 --omega2 0.1:3:0.1 --threads 3");
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(run("table1").out, run("table1").out);
}

TEST(Cli, Berry) {
    const auto r = run("berry --n 2 --l 1 --nprime 4");
    ASSERT_EQ(r.status, 0);
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["berry_phase_over_pi"].get<double>(), -2.5, 1e-8);
}

TEST(Cli, InterfereSamples) {
    const auto m1 = run(std::string("interfere --config ") + PAULTRAP_SAMPLES + "/method1.json");
    ASSERT_EQ(m1.status, 0);
    const auto j1 = json::parse(m1.out);
    EXPECT_EQ(j1["classification"], "destructive");
    EXPECT_NEAR(std::abs(j1["difference"].get<double>()), 3.14159265, 1e-7);
    const auto m2 = run(std::string("interfere --config ") + PAULTRAP_SAMPLES + "/method2.json");
    ASSERT_EQ(m2.status, 0);
    EXPECT_EQ(json::parse(m2.out)["classification"], "destructive");
}

TEST(Cli, Estimate) {
    const auto r = run("estimate --D 0.06 --d 0.001 --v 5e6 --l 1 --nprime 4");
    ASSERT_EQ(r.status, 0);
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["tau_s"].get<double>(), 6e-9, 1e-17);
    EXPECT_NEAR(j["omega_per_s"].get<double>(), 5.23598776e8, 1e1);
}

TEST(Cli, FloquetProfile) {
    const auto r = run(std::string("floquet --profile ") + PAULTRAP_SAMPLES + "/row_a_profile.json");
    ASSERT_EQ(r.status, 0);
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["lambda"].get<double>(), 0.0, 1e-7);
    EXPECT_TRUE(j["stable"].get<bool>());
}

TEST(Cli, Density) {
    const auto r = run("density --n 1 --l 1 --nprime 4 --t 0.1 --samples 5");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.substr(0, 13), "q,re,im,abs2\n");
}
