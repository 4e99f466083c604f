#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "srm/results.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(SRM_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / ("srm_cli_" + name); }

}  // namespace

TEST(Cli, OracleTable) {
    const auto r = run("oracle --dist exp:0.2 --dist uniform:-1000,1000 --format jsonl");
    ASSERT_EQ(r.code, 0);
    const auto rows = srm::parse_rows(r.out, srm::OutputFormat::Jsonl);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NEAR(rows[0].estimate, 11.0132158292, 1e-9);
    EXPECT_NEAR(rows[1].estimate, 613.567309813, 1e-8);
}

TEST(Cli, BoundPrintsOneObjectPerLine) {
    const auto r = run("bound --case srm-gauss --dist gaussian:0,1 --n 1000 --epsilon 0.1 --epsilon 2");
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string l1, l2;
    std::getline(in, l1);
    std::getline(in, l2);
    EXPECT_EQ(l1.rfind("{\"case\":\"srm-gauss\",\"n\":1000,\"epsilon\":0.1,\"bound\":1,\"valid\":false,\"min_m\":", 0), 0u);
    EXPECT_NE(l2.find("\"valid\":true"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("oracle --dist cauchy:0,1").code, 2);
    EXPECT_EQ(run("table --reps 0").code, 2);
    EXPECT_EQ(run("nonsense").code, 2);
    EXPECT_EQ(run("estimate --dist gaussian:0,1").code, 2);
    EXPECT_EQ(run("estimate --samples /nonexistent/file").code, 2);
    EXPECT_EQ(run("--format xml oracle --dist exp:1").code, 2);
    EXPECT_EQ(run("oracle --dist exp:1 --tol 1e-300").code, 3);
    EXPECT_EQ(run("oracle --dist exp:1").code, 0);
}

TEST(Cli, SampleFileEstimate) {
    const auto f = tmp("samples.txt");
    std::ofstream(f) << "5\n1\n\n4\n2\n3\n";
    const auto r = run("estimate --samples " + f.string() + " --estimator var --level 0.5 --format jsonl");
    ASSERT_EQ(r.code, 0);
    const auto rows = srm::parse_rows(r.out, srm::OutputFormat::Jsonl);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].estimate, 3);
    std::ofstream(f) << "1\nabc\n";
    EXPECT_EQ(run("estimate --samples " + f.string()).code, 2);
}

TEST(Cli, IdenticalInvocationsIdenticalFiles) {
    for (const std::string& cmd : {std::string("table --reps 20 --n 2000 --m 100"),
                                   std::string("curve --reps 10 --n 100 --n 1000 --format jsonl"),
                                   std::string("coverage --reps 50 --n 1000 --dist uniform:0,1"),
                                   std::string("bai --runs 20")}) {
        const auto a = tmp("det_a"), b = tmp("det_b");
        ASSERT_EQ(run("--seed 31 --out " + a.string() + " " + cmd).code, 0) << cmd;
        ASSERT_EQ(run("--seed 31 --out " + b.string() + " " + cmd).code, 0) << cmd;
        EXPECT_EQ(slurp(a), slurp(b)) << cmd;
        EXPECT_FALSE(slurp(a).empty()) << cmd;
        ASSERT_EQ(run("--seed 31 --threads 3 --out " + b.string() + " " + cmd).code, 0);
        EXPECT_EQ(slurp(a), slurp(b)) << cmd << " (threads)";
    }
}

TEST(Cli, TableRowReproducesViaEstimate) {
    const auto r = run("--seed 5 --format jsonl table --reps 15 --n 3000 --m 200");
    ASSERT_EQ(r.code, 0);
    const auto rows = srm::parse_rows(r.out, srm::OutputFormat::Jsonl);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto& row : rows) {
        const std::string args = "--format jsonl --seed " + std::to_string(row.seed) + " --trunc " +
                                 srm::value_text(*row.param("trunc")) + " estimate --dist " +
                                 srm::value_text(*row.param("dist")) + " --n " + srm::value_text(*row.param("n")) +
                                 " --m " + srm::value_text(*row.param("m")) + " --spectrum " +
                                 srm::value_text(*row.param("spectrum")) + " --reps " +
                                 std::to_string(row.replications);
        const auto again = run(args);
        ASSERT_EQ(again.code, 0) << args;
        const auto rerun = srm::parse_rows(again.out, srm::OutputFormat::Jsonl);
        ASSERT_EQ(rerun.size(), 1u);
        EXPECT_EQ(rerun[0].estimate, row.estimate) << args;
        EXPECT_EQ(rerun[0].spread, row.spread) << args;
    }
}

TEST(Cli, CoverageRowReproducesViaEstimate) {
    const auto r = run("--seed 8 --format jsonl coverage --reps 30 --n 1000 --dist uniform:0,1");
    ASSERT_EQ(r.code, 0);
    const auto rows = srm::parse_rows(r.out, srm::OutputFormat::Jsonl);
    ASSERT_FALSE(rows.empty());
    const auto& row = rows[0];
    const std::string args = "--format jsonl --seed " + std::to_string(row.seed) + " estimate --dist " +
                             srm::value_text(*row.param("dist")) + " --n " + srm::value_text(*row.param("n")) +
                             " --m " + srm::value_text(*row.param("m")) + " --metric exceeds --epsilon " +
                             srm::value_text(*row.param("epsilon")) + " --reps " + std::to_string(row.replications);
    const auto again = srm::parse_rows(run(args).out, srm::OutputFormat::Jsonl);
    ASSERT_EQ(again.size(), 1u);
    EXPECT_EQ(again[0].estimate, row.estimate);
}

TEST(Cli, BaiSummaryLine) {
    const auto r = run("bai --runs 40 --budget 1000 --subdivisions 100");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("run 0 winner "), std::string::npos);
    EXPECT_NE(r.out.find("run 39 winner "), std::string::npos);
    EXPECT_NE(r.out.find("P(correct)="), std::string::npos);
    EXPECT_NE(r.out.find("budget_ok=true"), std::string::npos);

    const auto env = tmp("env.txt");
    std::ofstream(env) << "point:5\npoint:1\n";
    const auto p = run("bai --runs 5 --budget 20 --functional mean --env " + env.string() + " --best 1");
    ASSERT_EQ(p.code, 0);
    EXPECT_NE(p.out.find("P(correct)=1\n"), std::string::npos);
}
