// Copyright 2026 The tcqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = tcqkd::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

double field(const std::string& text, const std::string& key) {
    std::smatch m;
    const std::regex re(key + "=([-0-9.eE+]+)");
    if (!std::regex_search(text, m, re)) throw std::runtime_error("no field " + key + " in: " + text);
    return std::stod(m[1]);
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("tcqkd_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

TEST_F(CliTest, TablesGhzText) {
    const auto r = run({"tables", "ghz", "text"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find('*'), std::string::npos);
}

TEST_F(CliTest, TablesBellCsv) {
    const auto r = run({"tables", "--scenario", "bell", "--format", "csv"});
    EXPECT_EQ(r.code, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 17u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].back(), "true");
}

TEST_F(CliTest, TablesMixedAndAll) {
    EXPECT_EQ(run({"tables", "mixed"}).code, 0);
    const auto r = run({"tables", "all", "csv"});
    EXPECT_EQ(csv_rows(r.out).size(), 49u);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({"tables", "nosuch"}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"run", "GHZ7"}).code, 1);
    EXPECT_EQ(run({"run", "GHZ1", "--loss", "2"}).code, 1);
    EXPECT_EQ(run({"attack", "BELL4", "cheating-center-x"}).code, 1);
    EXPECT_EQ(run({"network"}).code, 1);
}

TEST_F(CliTest, RunGhz3) {
    const auto r = run({"run", "GHZ3", "10000", "0.0", "42"});
    EXPECT_EQ(r.code, 0);
    EXPECT_DOUBLE_EQ(field(r.out, "kept_fraction"), 1.0);
    EXPECT_DOUBLE_EQ(field(r.out, "bound"), 1.0);
}

TEST_F(CliTest, RunBell5) {
    const auto r = run({"run", "BELL5", "10000", "0.0", "42"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NEAR(field(r.out, "kept_fraction"), 0.5, 0.02);
}

TEST_F(CliTest, RunZeroStatesRejected) {
    const auto r = run({"run", "GHZ1", "0"});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, RunUnwritablePath) {
    EXPECT_EQ(run({"run", "GHZ1", "100", "--out", path("missing/dir/t.json")}).code, 1);
}

TEST_F(CliTest, RunTranscriptByteIdentical) {
    ASSERT_EQ(run({"run", "--protocol", "BELL4", "--num-states", "800", "--seed", "9", "--out", path("a.json")}).code,
              0);
    ASSERT_EQ(run({"run", "--protocol", "BELL4", "--num-states", "800", "--seed", "9", "--out", path("b.json")}).code,
              0);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    EXPECT_NE(slurp(path("a.json")).find("\"schema_version\": 1"), std::string::npos);
}

TEST_F(CliTest, SummaryCsvAppends) {
    for (int i = 0; i < 2; ++i) run({"run", "GHZ2", "300", "0", std::to_string(i), "--summary-csv", path("s.csv")});
    const auto rows = csv_rows(slurp(path("s.csv")));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0][0], "protocol");
    EXPECT_EQ(rows[2][0], "GHZ2");
}

TEST_F(CliTest, ConfigFileDefaultsAndOverride) {
    {
        std::ofstream f(path("c.conf"));
        f << "# defaults\nprotocol = GHZ2\nnum_states=500\nseed=3\n";
    }
    ASSERT_EQ(run({"--config", path("c.conf"), "run", "--out", path("a.json")}).code, 0);
    const auto a = slurp(path("a.json"));
    EXPECT_NE(a.find("\"protocol\": \"GHZ2\""), std::string::npos);
    EXPECT_NE(a.find("\"num_states\": 500"), std::string::npos);
    ASSERT_EQ(run({"run", "--config", path("c.conf"), "--num-states", "600", "--out", path("b.json")}).code, 0);
    EXPECT_NE(slurp(path("b.json")).find("\"num_states\": 600"), std::string::npos);

    {
        std::ofstream f(path("bad.conf"));
        f << "num_states\n";
    }
    EXPECT_EQ(run({"run", "--config", path("bad.conf")}).code, 1);
    EXPECT_EQ(run({"run", "--config", path("nope.conf")}).code, 1);
}

TEST_F(CliTest, AttackInterceptResendAborts) {
    const auto r = run({"attack", "GHZ1", "intercept-resend", "--num-states", "10000", "--seed", "3", "--threshold",
                        "0.05"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("aborted=yes"), std::string::npos);
    const double predicted = field(r.out, "predicted");
    const double observed = field(r.out, "observed");
    const double sigma = field(r.out, "sigma");
    EXPECT_NEAR(predicted, 0.25, 1e-6);
    EXPECT_NEAR(observed, predicted, 3 * sigma + 1e-6);
}

TEST_F(CliTest, AttackCheatingCenter) {
    const auto r = run({"attack", "GHZ1", "cheating-center-x", "--num-states", "10000", "--check-fraction", "0.3"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("check_error_rate bases=yy"), std::string::npos);
    EXPECT_NE(r.out.find("check_error_rate bases=xx checked="), std::string::npos);
}

TEST_F(CliTest, AttackAncillaZeroCoupling) {
    const auto r = run({"attack", "GHZ1", "ancilla", "--coupling", "0"});
    EXPECT_EQ(r.code, 0);
    EXPECT_DOUBLE_EQ(field(r.out, "observed"), 0.0);
    EXPECT_DOUBLE_EQ(field(r.out, "ancilla_guess_probability"), 0.5);
}

TEST_F(CliTest, BenchAllProtocols) {
    const auto r = run({"bench", "--protocols", "all", "--loss-grid", "0", "--num-states", "4000"});
    ASSERT_EQ(r.code, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 6u);
    const auto col = std::find(rows[0].begin(), rows[0].end(), "efficiency_measured") - rows[0].begin();
    double ghz3 = 0.0;
    double best_other = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double eff = std::stod(rows[i][col]);
        EXPECT_GT(eff, 0.125) << rows[i][0];
        if (rows[i][0] == "GHZ3") {
            ghz3 = eff;
        } else {
            best_other = std::max(best_other, eff);
        }
    }
    EXPECT_GT(ghz3, best_other);
}

TEST_F(CliTest, BenchMonotoneInLoss) {
    const auto r = run({"bench", "--protocols", "GHZ1", "--loss-grid", "0,0.1,0.5", "--num-states", "4000"});
    ASSERT_EQ(r.code, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 4u);
    const auto col = std::find(rows[0].begin(), rows[0].end(), "efficiency_measured") - rows[0].begin();
    EXPECT_GT(std::stod(rows[1][col]), std::stod(rows[2][col]));
    EXPECT_GT(std::stod(rows[2][col]), std::stod(rows[3][col]));
}

TEST_F(CliTest, BenchEmptyProtocolSet) {
    const auto r = run({"bench", "--protocols", "", "--loss-grid", "0"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(csv_rows(r.out).size(), 1u);
    EXPECT_EQ(run({"bench", "--loss-grid", "zero"}).code, 1);
}

TEST_F(CliTest, NetworkReportsByteIdentical) {
    {
        std::ofstream f(path("net.json"));
        f << R"({"seed": 4, "users": ["u1", "u2", "u3"],
                 "sessions": [{"requester": "u1", "responder": "u2", "config": {"protocol": "GHZ3", "num_states": 500}},
                              {"requester": "u2", "responder": "u3", "config": {"protocol": "BELL5", "num_states": 500}}]})";
    }
    ASSERT_EQ(run({"network", path("net.json"), "--out", path("r1.json"), "--csv", path("r1.csv")}).code, 0);
    ASSERT_EQ(run({"network", "--scenario", path("net.json"), "--parallel", "--out", path("r2.json"), "--csv",
                   path("r2.csv")})
                  .code,
              0);
    EXPECT_EQ(slurp(path("r1.json")), slurp(path("r2.json")));
    EXPECT_EQ(slurp(path("r1.csv")), slurp(path("r2.csv")));
    EXPECT_EQ(csv_rows(slurp(path("r1.csv"))).size(), 3u);
}

TEST_F(CliTest, NetworkAbortExitCode) {
    {
        std::ofstream f(path("net.json"));
        f << R"({"users": ["u1", "u2"],
                 "sessions": [{"requester": "u1", "responder": "u2",
                               "config": {"protocol": "GHZ1", "num_states": 2000,
                                          "attack": {"kind": "InterceptResend", "target": "alice"}}}]})";
    }
    EXPECT_EQ(run({"network", path("net.json")}).code, 2);
}

}  // namespace
