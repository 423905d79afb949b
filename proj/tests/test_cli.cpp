#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace cyclefactor;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int code;
    std::string out, err;
};

Invocation invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

Json without_timestamp(const std::string& text) {
    auto j = Json::parse(text);
    EXPECT_TRUE(j.contains("timestamp"));
    j.erase("timestamp");
    return j;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "cyclefactor_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(Cli, GenTournament) {
    const auto a = invoke({"gen", "tournament", "16", "--seed", "1"});
    ASSERT_EQ(a.code, 0);
    std::istringstream in(a.out);
    const auto g = read_edge_list(in);
    EXPECT_EQ(g.order(), 16u);
    EXPECT_EQ(g.size(), 120u);
    EXPECT_EQ(invoke({"gen", "tournament", "16", "--seed", "1"}).out, a.out);
    EXPECT_NE(invoke({"gen", "tournament", "16", "--seed", "2"}).out, a.out);
}

TEST(Cli, GenOrientedAndFiles) {
    const auto empty = invoke({"gen", "oriented", "100", "0.0"});
    ASSERT_EQ(empty.code, 0);
    EXPECT_EQ(empty.out, "100 0\n");
    EXPECT_EQ(invoke({"gen", "oriented", "10", "1.5"}).code, cli::kUsage);
    EXPECT_EQ(invoke({"gen", "cube", "10"}).code, cli::kUsage);

    const auto path = scratch("g.txt");
    const auto r = invoke({"gen", "oriented", "30", "0.5", "--seed", "4", "-o", path.string()});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("n=30"), std::string::npos);
    const auto text = slurp(path);
    EXPECT_EQ(text, to_edge_list(random_oriented(30, 0.5, 4)));

    const auto deg = invoke({"degree", "--input", path.string()});
    ASSERT_EQ(deg.code, 0);
    const auto j = Json::parse(deg.out);
    EXPECT_EQ(j["graph"]["e"], random_oriented(30, 0.5, 4).size());
}

TEST(Cli, BadInputs) {
    const auto path = scratch("bad.txt");
    std::ofstream(path) << "3 1\n0 0\n";
    const auto r = invoke({"degree", "--input", path.string()});
    EXPECT_EQ(r.code, cli::kInputError);
    EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
    EXPECT_EQ(invoke({"degree", "--input", scratch("missing.txt").string()}).code, cli::kInputError);
    EXPECT_EQ(invoke({"degree"}).code, cli::kUsage);
    EXPECT_EQ(invoke({"degree", "--gen", "wheel:5"}).code, cli::kUsage);
    EXPECT_EQ(invoke({}).code, cli::kUsage);
}

TEST(Cli, PartitionExitCodes) {
    const auto ok = invoke({"partition", "--gen", "tournament:512", "--ell", "64", "--seed", "3"});
    ASSERT_EQ(ok.code, 0) << ok.err;
    const auto j = Json::parse(ok.out);
    EXPECT_EQ(j["partition"]["blocks"].size(), 8u);
    EXPECT_EQ(j["verdict"]["structural_ok"], true);

    EXPECT_EQ(invoke({"partition", "--gen", "tournament:512", "--ell", "60"}).code, cli::kDivisibility);
    const auto exhausted =
        invoke({"partition", "--gen", "tournament:128", "--ell", "32", "--margin", "1", "--max-attempts", "3"});
    EXPECT_EQ(exhausted.code, cli::kAttemptsExhausted);
    EXPECT_NE(exhausted.err.find("--best-effort"), std::string::npos);

    const auto be = invoke({"partition", "--gen", "tournament:128", "--ell", "32", "--margin", "1", "--max-attempts",
                            "3", "--best-effort"});
    ASSERT_EQ(be.code, 0);
    EXPECT_EQ(Json::parse(be.out)["partition"]["below_threshold"], true);
}

TEST(Cli, HamiltonExitCodes) {
    const auto path = scratch("transitive.txt");
    std::ofstream(path) << "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
    EXPECT_EQ(invoke({"hamilton", "--input", path.string()}).code, cli::kNotFound);
    const auto anti = invoke({"hamilton", "--input", path.string(), "--pattern", "+-+-"});
    ASSERT_EQ(anti.code, 0);
    EXPECT_EQ(Json::parse(anti.out)["verified"], true);
    EXPECT_EQ(invoke({"hamilton", "--input", path.string(), "--pattern", "+-+"}).code, cli::kUsage);
    EXPECT_EQ(invoke({"hamilton", "--gen", "tournament:10", "--method", "backtrack", "--budget", "0"}).code,
              cli::kBudgetExhausted);
    const auto big = invoke({"hamilton", "--gen", "tournament:40"});
    ASSERT_EQ(big.code, 0);
    EXPECT_EQ(Json::parse(big.out)["method"], "backtrack");
}

TEST(Cli, FactorWithPerPartPatterns) {
    const auto r = invoke({"factor", "--gen", "tournament:24", "--ell", "8", "--patterns",
                           "++++++++,+++-++-+,++++++--", "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["status"], "certificate");
    EXPECT_EQ(j["verdict"]["ok"], true);
    EXPECT_EQ(j["certificate"]["parts"].size(), 3u);
    EXPECT_NEAR(j["threshold_report"]["ell0"]["explicit_term"].get<double>(), 8.0e6, 1e-6);

    EXPECT_EQ(invoke({"factor", "--gen", "tournament:24", "--ell", "8", "--patterns", "+++"}).code, cli::kUsage);
    EXPECT_EQ(invoke({"factor", "--gen", "tournament:24", "--ell", "8", "--patterns", "++++++++,++++++++"}).code,
              cli::kUsage);
    EXPECT_EQ(invoke({"factor", "--gen", "tournament:24", "--ell", "5"}).code, cli::kDivisibility);
    EXPECT_EQ(invoke({"factor", "--gen", "tournament:24", "--ell", "12", "--dp-cap", "4", "--budget", "0"}).code,
              cli::kBudgetExhausted);
}

TEST(Cli, Experiments) {
    const auto r = invoke({"experiment", "tail", "--N", "100", "--n", "50", "--m", "50", "--t", "10", "--samples",
                           "20000", "--csv", scratch("tail.csv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["all_pass"], true);
    EXPECT_EQ(j["points"].size(), 1u);
    EXPECT_NE(slurp(scratch("tail.csv")).find("empirical"), std::string::npos);
    EXPECT_EQ(invoke({"experiment", "tail", "--preset", "standard", "--samples", "0"}).code, cli::kUsage);
    EXPECT_EQ(invoke({"experiment", "tail", "--N", "10", "--n", "50", "--m", "5", "--t", "1"}).code, cli::kUsage);
    EXPECT_EQ(invoke({"experiment", "walk"}).code, cli::kUsage);

    const auto split = invoke({"experiment", "split-success", "--n", "256", "--trials", "20"});
    ASSERT_EQ(split.code, 0) << split.err;
}

TEST(Cli, DeterministicModuloTimestamp) {
    const std::vector<std::vector<std::string>> runs{
        {"degree", "--gen", "oriented:60:0.7", "--seed", "5"},
        {"partition", "--gen", "tournament:256", "--ell", "32", "--seed", "5", "--threads", "2"},
        {"hamilton", "--gen", "tournament:14", "--pattern", "++-+++-+-+++-+", "--seed", "5"},
        {"factor", "--gen", "tournament:48", "--ell", "12", "--seed", "5"},
        {"experiment", "tail", "--preset", "standard", "--samples", "2000", "--seed", "5"},
    };
    for (const auto& args : runs) {
        const auto a = invoke(args), b = invoke(args);
        ASSERT_EQ(a.code, b.code) << args[0];
        EXPECT_EQ(without_timestamp(a.out), without_timestamp(b.out)) << args[0];
        EXPECT_EQ(Json::parse(a.out).begin().key(), "timestamp");
    }
}
