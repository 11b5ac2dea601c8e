#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nonsmooth/report.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("nonsmooth-cli-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliRun run(const std::string& args) {
    const fs::path out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
    const std::string cmd = std::string(NONSMOOTH_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string stripped(const fs::path& report) {
    return nonsmooth::strip_header(nonsmooth::io::Json::parse(slurp(report))).dump(2) + "\n";
}

std::string golden(const std::string& name) { return slurp(fs::path(NONSMOOTH_GOLDEN_DIR) / name); }

}  // namespace

TEST(Cli, CertifyTorusMatchesGoldenAcrossRuns) {
    const fs::path a = scratch() / "t1.json", b = scratch() / "t2.json";
    ASSERT_EQ(run("certify punctured-torus --depth 50 --out " + a.string()).code, 0);
    ASSERT_EQ(run("certify punctured-torus --depth 50 --out " + b.string()).code, 0);
    EXPECT_EQ(stripped(a), stripped(b));
    EXPECT_EQ(stripped(a), golden("certify_punctured_torus_depth50.json"));
    const CliRun v = run("verify " + a.string());
    EXPECT_EQ(v.code, 0);
    EXPECT_EQ(v.out, "ok\tcertified\n");
}

TEST(Cli, CertifyZZMatchesGolden) {
    const fs::path a = scratch() / "z.json";
    ASSERT_EQ(run("certify zz --truncation 16 --out " + a.string()).code, 0);
    EXPECT_EQ(stripped(a), golden("certify_zz_truncation16.json"));
    EXPECT_EQ(run("verify " + a.string()).code, 0);
}

TEST(Cli, CertifyArgumentErrors) {
    const CliRun neg = run("certify punctured-torus --depth -1");
    EXPECT_EQ(neg.code, 2);
    EXPECT_NE(neg.err.find("depth"), std::string::npos);
    EXPECT_EQ(run("certify punctured-torus").code, 2);
    EXPECT_EQ(run("certify zz").code, 2);
    EXPECT_EQ(run("certify klein --depth 3").code, 2);
    EXPECT_EQ(run("certify zz --truncation 3 --cap 1").code, 1);
    EXPECT_EQ(run("certify punctured-torus --depth 2 --out /nonexistent-dir/x.json").code, 3);
}

TEST(Cli, VerifyDetectsTampering) {
    const fs::path a = scratch() / "tamper.json";
    ASSERT_EQ(run("certify punctured-torus --depth 4 --out " + a.string()).code, 0);
    std::string text = slurp(a);
    const auto pos = text.find("\"Less\"");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 6, "\"Equal\"");
    std::ofstream(a, std::ios::binary) << text;
    EXPECT_EQ(run("verify " + a.string()).code, 1);
    std::ofstream(scratch() / "junk.json") << "{";
    EXPECT_EQ(run("verify " + (scratch() / "junk.json").string()).code, 2);
    EXPECT_EQ(run("verify " + (scratch() / "missing.json").string()).code, 3);
}

TEST(Cli, RenormAndPlot) {
    const fs::path csv = scratch() / "p.csv", svg = scratch() / "p.svg";
    ASSERT_EQ(run("renorm --action parabolic-germ --windows 50 --grid 64 --radius 2 --out " + csv.string()).code, 0);
    std::istringstream in(slurp(csv));
    std::string line;
    int rows = -1;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 50);
    ASSERT_EQ(run("plot --in " + csv.string() + " --out " + svg.string()).code, 0);
    EXPECT_NE(slurp(svg).find("<polyline"), std::string::npos);

    std::ofstream(scratch() / "empty.csv").close();
    const CliRun empty = run("plot --in " + (scratch() / "empty.csv").string() + " --out " + svg.string());
    EXPECT_EQ(empty.code, 2);
    EXPECT_FALSE(empty.err.empty());

    const CliRun ident = run(R"(renorm --action '{"type":"pl","breakpoints":[["0","0"],["1","1"]]}')");
    EXPECT_EQ(ident.code, 1);
    EXPECT_NE(ident.err.find("EmptyDisplacement"), std::string::npos);
    EXPECT_EQ(run("renorm --action '{\"type\":\"nope\"}'").code, 2);
    EXPECT_EQ(run("renorm --action parabolic-germ --radius x").code, 2);
    EXPECT_EQ(run("renorm --action parabolic-germ --out /nonexistent-dir/x.csv").code, 3);
}

TEST(Cli, OrbitAndOrder) {
    const CliRun orbit = run("orbit --word \"[a,b]\" --count 5");
    ASSERT_EQ(orbit.code, 0);
    EXPECT_EQ(orbit.out, "0\t0\t0\n1\t0\t1\n2\t0\t2\n3\t0\t3\n4\t0\t4\n5\t0\t5\n");
    const CliRun order = run("order --action punctured-torus --point pt --words \"a,[a,b]^2\"");
    ASSERT_EQ(order.code, 0);
    EXPECT_EQ(order.out, "Less\n");
    EXPECT_EQ(run("order --point pt --words \"A,b\" --images").out, "Less\t-1@-1\t-1/2@-1\n");
    EXPECT_EQ(run("orbit --action zz --word a --point 1/2 --count 2").out, "0\t1/2\n1\t2/3\n2\t4/5\n");
    EXPECT_EQ(run("orbit --word \"[a,b\"").code, 2);
    EXPECT_EQ(run("order --words a").code, 2);
    EXPECT_EQ(run("orbit --point 1/2@x").code, 2);
    EXPECT_EQ(run("orbit --action zz --word c --point 1/2").code, 2);
}

TEST(Cli, UnknownSubcommand) {
    const CliRun r = run("frobnicate");
    EXPECT_EQ(r.code, 64);
    EXPECT_NE(r.err.find("certify"), std::string::npos);
    EXPECT_EQ(run("").code, 2);
}
