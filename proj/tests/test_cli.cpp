// Copyright 2026 The wgqed Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace wgqed;
using nlohmann::json;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "wgqed");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

json manifest_of(const std::string& csv) {
    const std::string first = lines(csv).front();
    EXPECT_EQ(first.rfind("# ", 0), 0u);
    return json::parse(first.substr(2));
}

std::vector<double> row(const std::string& line) {
    std::vector<double> v;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) v.push_back(std::stod(cell));
    return v;
}

}  // namespace

TEST(ParseAngle, Forms) {
    EXPECT_EQ(cli::parse_angle("0.5pi"), 0.5 * pi);
    EXPECT_EQ(cli::parse_angle("pi"), pi);
    EXPECT_EQ(cli::parse_angle("-pi"), -pi);
    EXPECT_EQ(cli::parse_angle("pi/2"), pi / 2.0);
    EXPECT_EQ(cli::parse_angle("1.25"), 1.25);
    EXPECT_THROW(cli::parse_angle(""), Error);
    EXPECT_THROW(cli::parse_angle("0.5pix"), Error);
    EXPECT_THROW(cli::parse_angle("pi/0"), Error);
}

TEST(Cli, SpectrumAtUnitDetuning) {
    const Outcome o = invoke({"spectrum", "--klt", "0.5pi", "--delta-min", "1", "--delta-max", "2",
                              "--points", "2"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto ls = lines(o.out);
    ASSERT_EQ(ls.size(), 4u);
    EXPECT_EQ(ls[1], "delta,t2_d0,t2_dplus,t2_dminus");
    const auto r = row(ls[2]);
    EXPECT_NEAR(r[1], 0.2, 1e-14);
    EXPECT_NEAR(r[2], 0.2, 1e-14);
    EXPECT_NEAR(r[3], 0.2, 1e-14);
    const json m = manifest_of(o.out);
    EXPECT_EQ(m["schema_version"], 1);
    EXPECT_EQ(m["command"], "spectrum");
    EXPECT_EQ(m["seedless"], true);
    EXPECT_EQ(m["params"]["points"], 2);
}

TEST(Cli, ProbeNoSuperposition) {
    const double d0 = transmission2({2.2, pi});
    const Outcome o = invoke({"probe", "--p-trans", cli::fmt(d0), "--delta", "2.2"});
    ASSERT_EQ(o.code, 0) << o.err;
    const json j = json::parse(o.out);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_NEAR(j["product"].get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(j["weights"][0].get<double>(), 0.0, 1e-6);
    EXPECT_NEAR(j["weights"][1].get<double>(), 1.0, 1e-6);
}

TEST(Cli, DegenerateProbeIsNumericalFailure) {
    const Outcome o = invoke({"probe", "--p-trans", "0.2", "--delta", "1"});
    EXPECT_EQ(o.code, 3);
    const json e = json::parse(o.err);
    EXPECT_EQ(e["error"], "degenerate_probe");
    EXPECT_EQ(e["exit_code"], 3);
    EXPECT_TRUE(o.out.empty());
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"nonsense"}).code, 2);
    EXPECT_EQ(invoke({"probe"}).code, 2);
    EXPECT_EQ(invoke({"spectrum", "--klt", "x"}).code, 2);
    EXPECT_EQ(invoke({"spectrum", "--points", "1"}).code, 2);
    EXPECT_EQ(invoke({"reproduce", "--figure", "9"}).code, 2);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, Phase) {
    const Outcome o = invoke({"phase", "--product-before", "0.25", "--product-after", "0"});
    ASSERT_EQ(o.code, 0) << o.err;
    const json j = json::parse(o.out);
    EXPECT_NEAR(j["abs_cos"].get<double>(), 1.0, 1e-12);
    ASSERT_EQ(j["candidates"].size(), 2u);
    EXPECT_EQ(invoke({"phase", "--product-before", "0.3", "--product-after", "0"}).code, 3);
}

TEST(Cli, PulseColumnsAndOracle) {
    const Outcome o = invoke({"pulse", "--ratio", "2", "--delta", "0.25", "--theta", "1.2", "--oracle"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto ls = lines(o.out);
    EXPECT_EQ(ls[1], "t,re_ceg,im_ceg,re_cge,im_cge,n_ref");
    const json m = manifest_of(o.out);
    const double rel = m["params"]["oracle"]["relative_difference"].get<double>();
    EXPECT_LT(std::abs(rel), 0.01);
    EXPECT_LE(m["params"]["oracle"]["max_norm_drift"].get<double>(), 1e-6);
    const auto last = row(ls.back());
    EXPECT_NEAR(1.0 - last[5], m["params"]["t2"].get<double>(), 1e-12);
}

TEST(Cli, HeraldRows) {
    const Outcome o = invoke({"herald", "--delta", "0.25", "--n", "1", "--branch", "1", "--ratios", "0.3",
                              "1", "3"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto ls = lines(o.out);
    ASSERT_EQ(ls.size(), 5u);
    EXPECT_EQ(ls[1], "omega_ratio,fidelity,fidelity_initial,p_reflect");
    const auto r1 = row(ls[3]);
    EXPECT_NEAR(r1[1], 1.0 / std::sqrt(2.0), 0.02);
    EXPECT_EQ(invoke({"herald", "--delta", "0"}).code, 3);
}

TEST(Cli, SensitivityLongFormat) {
    const Outcome o = invoke({"sensitivity", "--n", "2", "--eps-max", "0.05", "--steps", "3", "--p-steps", "6"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto ls = lines(o.out);
    ASSERT_EQ(ls.size(), 2u + 18u);
    EXPECT_EQ(ls[1], "epsilon,true_product,inferred_product");
    for (std::size_t k = 8; k < 14; ++k) {
        const auto r = row(ls[k]);
        EXPECT_EQ(r[0], 0.0);
        EXPECT_NEAR(r[2], r[1], 1e-10);
    }
}

TEST(Cli, ReproduceFigure3) {
    const auto dir = std::filesystem::temp_directory_path() / "wgqed_cli_fig3";
    std::filesystem::remove_all(dir);
    const Outcome o = invoke({"reproduce", "--figure", "3", "--out-dir", dir.string()});
    ASSERT_EQ(o.code, 0) << o.err;
    std::ifstream f(dir / "fig3_spectrum.csv");
    ASSERT_TRUE(f);
    std::stringstream ss;
    ss << f.rdbuf();
    const auto ls = lines(ss.str());
    ASSERT_EQ(ls.size(), 2u + 401u);
    const auto peak = row(ls[2 + 225]);
    EXPECT_NEAR(peak[0], 0.25, 1e-12);
    EXPECT_NEAR(peak[1], 1.0, 1e-12);
    EXPECT_LT(peak[2], 0.05);
    EXPECT_LT(peak[3], 0.05);
}

TEST(Cli, OutputIsDeterministicAcrossThreadCounts) {
    const std::vector<std::string> args{"herald", "--ratios", "0.1", "0.5", "1", "2", "4"};
    ::setenv("WGQED_THREADS", "1", 1);
    const Outcome a = invoke(args);
    ::setenv("WGQED_THREADS", "3", 1);
    const Outcome b = invoke(args);
    ::unsetenv("WGQED_THREADS");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, WritesToFile) {
    const auto path = std::filesystem::temp_directory_path() / "wgqed_cli_out.csv";
    const Outcome o = invoke({"--out", path.string(), "spectrum", "--points", "5"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_TRUE(o.out.empty());
    std::ifstream f(path);
    std::string first;
    std::getline(f, first);
    EXPECT_EQ(first.rfind("# {", 0), 0u);
}
