// Runs the gklo executable and checks exit codes and output.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gklo/diffop.hpp"
#include "gklo/ratfunc.hpp"

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(GKLO_EXE) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    char buf[4096];
    while (auto n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string spec(const std::string& name) { return std::string(GKLO_SOURCE_DIR) + "/specs/" + name; }
std::string data(const std::string& name) { return std::string(GKLO_SOURCE_DIR) + "/tests/data/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string l; std::getline(ss, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(Cli, Validate) {
    EXPECT_EQ(run("validate " + spec("aiii1.json")).code, 0);
    auto fixed = run("validate " + data("fixed_node.json"));
    EXPECT_EQ(fixed.code, 2);
    EXPECT_NE(fixed.out.find("FixedNode"), std::string::npos) << fixed.out;
    auto bad = run("validate " + data("malformed.json"));
    EXPECT_EQ(bad.code, 3);
    EXPECT_NE(bad.out.find("line 4"), std::string::npos) << bad.out;
    EXPECT_EQ(run("validate " + data("dim_mismatch.json")).code, 2);
    EXPECT_EQ(run("validate /nonexistent.json").code, 3);
    EXPECT_EQ(run("frobnicate").code, 3);
}

TEST(Cli, Info) {
    auto r = run("info " + spec("aiii1_v2w1.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"pairings\": {\n    \"1\": -2"), std::string::npos) << r.out;
    auto e = run("info " + spec("edgeless.json"));
    ASSERT_EQ(e.code, 0);
    EXPECT_NE(e.out.find("\"hbar_zeta\": {\n    \"1\": \"1\""), std::string::npos) << e.out;
}

TEST(Cli, Verify) {
    auto ok = run("verify " + spec("aiii1.json"));
    EXPECT_EQ(ok.code, 0) << ok.out;
    auto bad = run("verify " + spec("aiii1.json") + " --corrupt hu-sign");
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.out.find("fail "), std::string::npos);
    auto only = run("verify " + spec("edgeless.json") + " --only ISerreGF");
    EXPECT_EQ(only.code, 0);
    EXPECT_NE(only.out.find("0 pass, 0 fail, 0 inconclusive"), std::string::npos) << only.out;
    EXPECT_EQ(run("verify " + spec("aiii1.json") + " --only NoSuchTag").code, 3);
    EXPECT_EQ(run("verify " + spec("aiii1.json") + " --mode sloppy").code, 3);
}

TEST(Cli, SameSeedSameReport) {
    const std::string a = testing::TempDir() + "gklo_report_a.json", b = testing::TempDir() + "gklo_report_b.json";
    const std::string args = "verify " + spec("aiii1_v2w1.json") + " --mode random --seed 5 --trials 4 --report-out ";
    ASSERT_EQ(run(args + a).code, 0);
    ASSERT_EQ(run(args + b).code, 0);
    auto ta = slurp(a);
    EXPECT_FALSE(ta.empty());
    EXPECT_EQ(ta, slurp(b));
    EXPECT_NE(ta.find("\"seed\": 5"), std::string::npos);
}

TEST(Cli, BuildRoundTrips) {
    auto h = run("build " + spec("edgeless.json") + " --node 1 --what H");
    ASSERT_EQ(h.code, 0);
    auto hl = lines(h.out);
    ASSERT_EQ(hl.size(), 1u);
    auto rhs = hl[0].substr(hl[0].find(" = ") + 3);
    const auto u = gklo::RatFunc::variable("u"), x = gklo::RatFunc::variable("x_{1,1}"),
               hb = gklo::RatFunc::variable("hbar");
    EXPECT_EQ(gklo::parse_ratfunc(rhs), ((u + x) * (u + x) - gklo::Rational(1, 4) * hb * hb).inverse());
    EXPECT_EQ(gklo::parse_ratfunc(rhs).to_string(), rhs);

    auto c = run("build " + spec("edgeless.json") + " --node 1 --what coeffs --range=-1..2");
    ASSERT_EQ(c.code, 0);
    std::vector<std::string> want = {"H_{1,-1} = 0", "H_{1,0} = 0", "H_{1,1} = 1", "H_{1,2} = -2*x_{1,1}"};
    auto cl = lines(c.out);
    ASSERT_EQ(cl.size(), want.size());
    for (std::size_t k = 0; k < want.size(); ++k) {
        auto l = cl[k].substr(cl[k].find(" = ") + 3), w = want[k].substr(want[k].find(" = ") + 3);
        EXPECT_EQ(cl[k].substr(0, cl[k].find(" = ")), want[k].substr(0, want[k].find(" = ")));
        EXPECT_EQ(gklo::parse_ratfunc(l), gklo::parse_ratfunc(w)) << cl[k];
        EXPECT_EQ(gklo::parse_ratfunc(l).to_string(), l);
    }

    for (const char* what : {"B", "y", "coeffs --of B --range 0..2"}) {
        auto r = run("build " + spec("aiii1_v2w1.json") + " --node 2 --what " + what);
        ASSERT_EQ(r.code, 0) << r.out;
        for (const auto& l : lines(r.out)) {
            auto text = l.substr(l.find(" = ") + 3);
            EXPECT_EQ(gklo::parse_diffop(text).to_string(), text) << l;
        }
    }
    EXPECT_EQ(run("build " + spec("edgeless.json") + " --node 7 --what B").code, 3);
    EXPECT_EQ(run("build " + spec("edgeless.json") + " --node 1 --what y --range 1..3").code, 3);
}

TEST(Cli, BuildEmptyNode) {
    const std::string path = testing::TempDir() + "gklo_empty.json";
    std::ofstream(path) << R"({"nodes": ["1", "2"], "involution": {"nodes": [["1", "2"]]},
                              "dims": {"v": {"1": 0, "2": 0}, "w": {"1": 1, "2": 1}}})";
    auto r = run("build " + path + " --node 1 --what B");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "B_{1}(u) = 0\n");
}

TEST(Cli, Monopole) {
    auto r = run("monopole " + spec("aiii1.json") + " --node 1 --rmax 2");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("direction plus"), std::string::npos);
    auto m = run("monopole " + spec("aiii1.json") + " --node 2 --f x^2");
    EXPECT_EQ(m.code, 0) << m.out;
    EXPECT_NE(m.out.find("direction minus"), std::string::npos);
    EXPECT_EQ(run("monopole " + spec("aiii1.json") + " --node 1 --f 1/x").code, 3);
}
