// Copyright 2026 The upb-locc Authors
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

#include "commands.hpp"
#include "upb/protocols.hpp"
#include "upb/render.hpp"
#include "upb/serialize.hpp"

using namespace upb;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "upb");
    std::vector<char *> argv;
    for (auto &a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("upb_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }
    std::string path(const std::string &name) const { return (dir_ / name).string(); }
    std::filesystem::path dir_;
};

}  // namespace

TEST_F(CliTest, BuildWritesFiveMembers) {
    auto r = invoke({"build", "tiles", "-o", path("tiles.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = Json::parse(slurp(path("tiles.json")));
    EXPECT_EQ(j["members"].size(), 5u);
    EXPECT_EQ(j["schema"], "upb-locc/stateset/1");
}

TEST_F(CliTest, StateSetRoundTripIsByteIdentical) {
    for (const auto &s : {tiles(), gentiles2(4, 6), niset_cerf({3, 3, 3, 3}), random_3x3_upb(4, {true})}) {
        std::string a = dump(to_json(s));
        std::string b = dump(to_json(state_set_from_json(Json::parse(a))));
        EXPECT_EQ(a, b) << s.family().name;
    }
}

TEST_F(CliTest, ProtocolRoundTripIsByteIdentical) {
    for (const auto &p : {tiles_protocol(), upb3x3_protocol(random_3x3_upb(2)), gentiles1_protocol(4)}) {
        std::string a = dump(to_json(p));
        std::string b = dump(to_json(protocol_from_json(Json::parse(a))));
        EXPECT_EQ(a, b) << p.name;
    }
}

TEST_F(CliTest, BuildGenTiles2Counts) {
    auto r = invoke({"build", "gentiles2", "--m", "4", "--n", "6"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(Json::parse(r.out)["members"].size(), 17u);
    auto r3 = invoke({"build", "gentiles2", "--m", "3", "--n", "4"});
    ASSERT_EQ(r3.code, 0) << r3.err;
    auto tags = Json::parse(r3.out)["family"]["tags"];
    EXPECT_NE(std::find(tags.begin(), tags.end(), "no shipped protocol"), tags.end());
    EXPECT_EQ(invoke({"run", "gentiles2", "--m", "3", "--n", "4"}).code, 2);
}

TEST_F(CliTest, VerifyExitCodes) {
    ASSERT_EQ(invoke({"build", "tiles", "-o", path("t.json")}).code, 0);
    EXPECT_EQ(invoke({"verify", path("t.json")}).code, 0);
    EXPECT_EQ(invoke({"verify", path("t.json"), "--unextendible"}).code, 0);
    auto j = Json::parse(slurp(path("t.json")));
    j["members"][0]["parts"]["A"] = Json::array({Json::array({1.0, 0.0}), Json::array({0.0, 0.0}),
                                                 Json::array({0.0, 0.0})});
    j["members"][0]["parts"]["B"] = j["members"][0]["parts"]["A"];
    std::ofstream(path("bad.json")) << dump(j);
    EXPECT_EQ(invoke({"verify", path("bad.json")}).code, 1);
    EXPECT_EQ(invoke({"verify", path("missing.json")}).code, 2);
}

TEST_F(CliTest, VerifyUnextendibleLongTier) {
    ASSERT_EQ(invoke({"build", "gentiles1", "--m", "6", "-o", path("g.json")}).code, 0);
    EXPECT_EQ(invoke({"verify", path("g.json"), "--unextendible"}).code, 2);
    EXPECT_EQ(invoke({"verify", path("g.json"), "--unextendible", "--long"}).code, 0);
}

TEST_F(CliTest, RunTiles) {
    auto r = invoke({"run", "tiles"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
    for (const char *m : {"Psi1", "Psi2", "Psi3", "Psi4", "F"}) EXPECT_NE(r.out.find(m), std::string::npos);
}

TEST_F(CliTest, RunPartialResourceFails) {
    auto r = invoke({"run", "tiles", "--resource", "0.6,0.4"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("0.200000"), std::string::npos);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
    EXPECT_EQ(invoke({"run", "tiles", "--resource", "0.6,0.6"}).code, 2);
}

TEST_F(CliTest, RunNisetCerf) {
    EXPECT_EQ(invoke({"run", "niset_cerf", "--dims", "3,3,3,3"}).code, 0);
}

TEST_F(CliTest, SepTiles) {
    EXPECT_EQ(invoke({"sep", "tiles"}).code, 0);
    EXPECT_EQ(invoke({"sep", "tiles", "--removed", "nobody"}).code, 2);
}

TEST_F(CliTest, RenderTilesGrid) {
    ASSERT_EQ(invoke({"build", "tiles", "-o", path("t.json")}).code, 0);
    auto r = invoke({"render", path("t.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    // Rows are B values, columns A values.
    EXPECT_NE(r.out.find("1 1 2"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("4 . 2"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("4 3 3"), std::string::npos) << r.out;
}

TEST_F(CliTest, RenderGenTiles1Grid) {
    std::string g = render_state_set(gentiles1(6));
    for (int id = 1; id <= 12; id++) {
        EXPECT_NE(g.find(std::to_string(id)), std::string::npos) << id;
    }
}

TEST_F(CliTest, RenderTraceAfterSlide) {
    ASSERT_EQ(invoke({"run", "tiles", "--trace", path("tr.json")}).code, 0);
    auto r = invoke({"render", path("tr.json"), "--steps", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("|00>_ab"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("|11>_ab"), std::string::npos) << r.out;
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({"build", "nope"}).code, 2);
    EXPECT_EQ(invoke({"build", "gentiles1", "--m", "5"}).code, 2);
}

TEST(Tolerance, EnvOverride) {
    setenv("LOCC_TOL", "1e-7", 1);
    EXPECT_DOUBLE_EQ(cli::tolerance_from_env().compare, 1e-7);
    unsetenv("LOCC_TOL");
    EXPECT_DOUBLE_EQ(cli::tolerance_from_env().compare, 1e-9);
}
