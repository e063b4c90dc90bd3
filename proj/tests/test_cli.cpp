#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "framekit/cli.hpp"
#include "framekit/error.hpp"
#include "framekit/io.hpp"
#include "framekit/version.hpp"
#include "test_support.hpp"

using namespace framekit;
using namespace framekit::testing;
using io::Json;

namespace {

namespace fs = std::filesystem;

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "framekit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("framekit_cli_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    std::string gen(const std::vector<std::string>& extra, const std::string& name = "sys.json") const {
        std::vector<std::string> args{"gen"};
        args.insert(args.end(), extra.begin(), extra.end());
        const CliRun r = cli(args);
        EXPECT_EQ(r.code, kExitOk) << r.err;
        return write(name, r.out);
    }

    fs::path dir_;
};

const char* kSingleAtomPair = R"({
  "fiber_dim": 2,
  "atoms": [{"id": "x", "weight": 1.0,
             "A": {"dim": 2, "vectors": [[[1, 0], [0, 0]]]},
             "B": {"dim": 2, "vectors": [[[0.7071067811865476, 0], [0.7071067811865476, 0]]]}}]
})";

} // namespace

TEST(Io, MatrixAndSystemRoundTrip) {
    Rng rng(901);
    const ComplexMatrix m = random_matrix(3, 2, rng);
    EXPECT_EQ(io::matrix_from_json(Json::parse(io::matrix_to_json(m).dump())), m);

    std::vector<FiberSystem> fa;
    std::vector<FiberSystem> fb;
    for (int k = 0; k < 3; ++k) {
        fa.emplace_back(random_matrix(4, 2, rng));
        fb.emplace_back(random_matrix(4, 3, rng));
    }
    const MeasureModel meas({"p", "q", "r"}, {0.5, 1.0, 2.0});
    const FiberedSystem a(meas, 4, fa);
    const FiberedSystem b(meas, 4, fb);
    const std::string text = io::system_file_to_json(a, &b).dump();
    const io::SystemFile back = io::system_file_from_json(Json::parse(text));
    ASSERT_TRUE(back.b.has_value());
    EXPECT_EQ(io::system_file_to_json(back.a, &*back.b).dump(), text);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(back.a.fiber(k).synthesis(), fa[k].synthesis());
}

TEST(Io, FormatDoubleIsShortestRoundTrip) {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 0.7071067811865476, -2.5}) {
        EXPECT_EQ(std::stod(io::format_double(x)), x);
    }
    EXPECT_EQ(io::format_double(0.1), "0.1");
}

TEST(Io, ReadersNameTheOffendingField) {
    const auto expect_message = [](const char* text, const std::string& fragment) {
        try {
            io::system_file_from_json(Json::parse(text));
            ADD_FAILURE() << "accepted " << text;
        } catch (const Error& e) {
            EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
        }
    };
    expect_message(R"({"atoms": []})", "fiber_dim");
    expect_message(R"({"fiber_dim": 2, "atoms": [{"id": "x", "weight": 1, "A": {"dim": 2, "vectors": [[[1, 0]]]}}]})",
                   "input.atoms[0].A.vectors[0]");
    expect_message(R"({"fiber_dim": 1, "atoms": [{"id": "x", "weight": -1, "A": {"dim": 1, "vectors": [[[1, 0]]]}}]})",
                   "weight");
    expect_message(R"({"fiber_dim": 1, "atoms": [
        {"id": "x", "weight": 1, "A": {"dim": 1, "vectors": [[[1, 0]]]}, "B": {"dim": 1, "vectors": [[[1, 0]]]}},
        {"id": "y", "weight": 1, "A": {"dim": 1, "vectors": [[[1, 0]]]}}]})",
                   "input.atoms[1]");
}

TEST(Io, PlanRoundTrip) {
    for (const auto& plan : {build_plan(FiniteGroup::cyclic(12), 3), build_plan(FiniteGroup::dihedral(4), 1)}) {
        const ZakPlan back = io::plan_from_json(io::plan_to_json(plan));
        EXPECT_EQ(back.subgroup, plan.subgroup);
        EXPECT_EQ(back.section, plan.section);
        EXPECT_EQ(back.group.table(), plan.group.table());
    }
}

TEST_F(CliTest, VerifyThm1SingleAtomExample) {
    const CliRun r = cli({"verify-thm1", "--in", write("pair.json", kSingleAtomPair), "--tol", "1e-8"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["tool"], "framekit");
    EXPECT_EQ(j["version"], kVersion);
    const Json& res = j["result"];
    for (const char* key : {"holds_i", "holds_ii", "holds_iii", "holds_iv"}) EXPECT_TRUE(res[key].get<bool>()) << key;
    EXPECT_NEAR(res["angles_global"]["R_AB"].get<double>(), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(res["angles_global"]["R_BA"].get<double>(), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_EQ(res["witness_status"], "certified");
}

TEST_F(CliTest, VerifyThm1CsvHasHeaderAndOneRowPerAtom) {
    const std::string sys = gen({"--atoms", "3", "--seed", "4"});
    const CliRun r = cli({"verify-thm1", "--in", sys, "--format", "csv"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "atom,dimJA,dimJB,R_AB,R_BA,rank_mixed,pinv_norm");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    EXPECT_EQ(rows, 3);
}

TEST_F(CliTest, ZakDemoExample) {
    const CliRun r = cli({"zak-demo", "--group", "z4", "--subgroup-gen", "2", "--signal", "delta0"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json res = Json::parse(r.out)["result"];
    EXPECT_EQ(res["intertwine_max_deviation"].get<double>(), 0.0);
    EXPECT_EQ(res["unitarity_residual"].get<double>(), 0.0);
}

TEST_F(CliTest, DualOfOrthonormalPairIsInput) {
    const char* text = R"({"fiber_dim": 2, "atoms": [
        {"id": "x", "weight": 1, "A": {"dim": 2, "vectors": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]},
                                 "B": {"dim": 2, "vectors": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}}]})";
    const CliRun r = cli({"dual", "--in", write("sys.json", text)});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json res = Json::parse(r.out)["result"];
    const io::SystemFile dual = io::system_file_from_json(res["dual"]);
    EXPECT_LT(max_abs_diff(dual.a.fiber(0).synthesis(), ComplexMatrix::identity(2)), 1e-14);
}

TEST_F(CliTest, GenOutputIsAcceptedByEveryCommand) {
    for (const char* family : {"in-duality", "orthogonal-failure", "near-threshold"}) {
        for (bool riesz : {false, true}) {
            std::vector<std::string> args{"--family", family, "--atoms", "4", "--dim", "4", "--gens", "3", "--seed", "8"};
            if (riesz) args.push_back("--riesz");
            const std::string sys = gen(args);
            for (const char* cmd : {"angles", "dual", "verify-thm1", "verify-thm2", "reconstruct"}) {
                const CliRun r = cli({cmd, "--in", sys});
                EXPECT_EQ(r.code, kExitOk) << family << " " << cmd << ": " << r.err;
                EXPECT_NO_THROW(Json::parse(r.out));
            }
        }
    }
}

TEST_F(CliTest, FalsenessIsAResult) {
    const std::string sys = gen({"--family", "orthogonal-failure", "--seed", "2"});
    const CliRun r = cli({"verify-thm1", "--in", sys});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json res = Json::parse(r.out)["result"];
    EXPECT_FALSE(res["holds_i"].get<bool>());
    EXPECT_FALSE(res["holds_iv"].get<bool>());
    const Json dual = Json::parse(cli({"dual", "--in", sys}).out)["result"];
    EXPECT_FALSE(dual["feasible"].get<bool>());
}

TEST_F(CliTest, FixedSeedGivesIdenticalBytes) {
    const std::vector<std::string> gen_args{"gen", "--family", "near-threshold", "--atoms", "6", "--seed", "99"};
    EXPECT_EQ(cli(gen_args).out, cli(gen_args).out);
    const std::string sys = gen({"--seed", "99"});
    for (const char* cmd : {"verify-thm1", "reconstruct"}) {
        const std::vector<std::string> args{cmd, "--in", sys, "--seed", "3"};
        EXPECT_EQ(cli(args).out, cli(args).out) << cmd;
    }
    EXPECT_NE(cli({"gen", "--seed", "1"}).out, cli({"gen", "--seed", "2"}).out);
}

TEST_F(CliTest, OutFlagWritesFile) {
    const fs::path p = dir_ / "report.json";
    const CliRun r = cli({"zak-demo", "--group", "d4", "--subgroup-gen", "1", "--signal", "ones", "--out", p.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(p);
    EXPECT_NO_THROW(Json::parse(f));
}

TEST_F(CliTest, InputErrorsExitOne) {
    const std::string bad = write("bad.json", "{not json");
    const std::string shape = write("shape.json", R"({"fiber_dim": 2, "atoms": [{"id": "x", "weight": 1,
        "A": {"dim": 2, "vectors": [[[1, 0]]]}, "B": {"dim": 2, "vectors": [[[1, 0], [0, 0]]]}}]})");
    const std::string no_b = write("nob.json", R"({"fiber_dim": 1, "atoms": [{"id": "x", "weight": 1,
        "A": {"dim": 1, "vectors": [[[1, 0]]]}}]})");
    const std::vector<std::vector<std::string>> cases{
        {},
        {"frobnicate"},
        {"angles"},
        {"angles", "--in", (dir_ / "missing.json").string()},
        {"angles", "--in", bad},
        {"angles", "--in", shape},
        {"verify-thm1", "--in", no_b},
        {"verify-thm1", "--in", no_b, "--format", "xml"},
        {"gen", "--no-such-flag"},
        {"gen", "--family", "unknown"},
        {"gen", "--family", "orthogonal-failure", "--dim", "1"},
        {"gen", "--tol", "2"},
        {"angles", "--in", shape, "--angle-tol", "0"},
        {"zak-demo", "--cmax", "-1"},
        {"zak-demo", "--group", "q5"},
        {"zak-demo", "--group", "z4", "--subgroup-gen", "9"},
        {"zak-demo", "--group", "z4", "--signal", "delta7"},
    };
    for (const auto& args : cases) {
        const CliRun r = cli(args);
        std::string joined;
        for (const auto& a : args) joined += a + " ";
        EXPECT_EQ(r.code, kExitInput) << joined;
        EXPECT_FALSE(r.err.empty()) << joined;
    }
}

TEST_F(CliTest, ShapeErrorsCarryContext) {
    const std::string shape = write("shape.json", R"({"fiber_dim": 2, "atoms": [{"id": "x", "weight": 1,
        "A": {"dim": 2, "vectors": [[[1, 0]]]}}]})");
    const CliRun r = cli({"dual", "--in", shape});
    EXPECT_EQ(r.code, kExitInput);
    EXPECT_NE(r.err.find("input.atoms[0].A.vectors[0]"), std::string::npos) << r.err;
}

TEST_F(CliTest, HelpAndVersionExitZero) {
    EXPECT_EQ(cli({"--help"}).code, kExitOk);
    const CliRun v = cli({"--version"});
    EXPECT_EQ(v.code, kExitOk);
    EXPECT_NE((v.out + v.err).find(kVersion), std::string::npos);
}
