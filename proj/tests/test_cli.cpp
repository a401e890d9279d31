#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(DALG_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string corpus(const std::string& name) { return std::string(DALG_CORPUS_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
    auto p = std::filesystem::temp_directory_path() / ("dalg_cli_test_" + name);
    std::ofstream(p) << text;
    return p.string();
}

}  // namespace

TEST(Cli, Derive) {
    auto r = run("derive 'x^2/t' --der 'eta: t -> 1; d: x -> u'");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("(2*t*u*x - x^2) / t^2"), std::string::npos) << r.out;
    auto j = run("derive 'x^2' --twisted --json");
    ASSERT_EQ(j.code, 0);
    auto parsed = nlohmann::json::parse(j.out);
    EXPECT_EQ(parsed["lift"], "2*x*y_x");
}

TEST(Cli, Jet) {
    auto r = run("jet 'd1(x*d1(x))'");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("x[0]*x[d1^2] + x[d1]^2"), std::string::npos) << r.out;
}

TEST(Cli, ConfigCheck) {
    auto ok = run("config-check " + corpus("commuting.cfg") + " --json");
    ASSERT_EQ(ok.code, 0);
    EXPECT_EQ(nlohmann::json::parse(ok.out)["status"], "commutes");
    auto bad = run("config-check " + corpus("noncomm.cfg") + " --json");
    ASSERT_EQ(bad.code, 0);
    auto j = nlohmann::json::parse(bad.out);
    EXPECT_EQ(j["status"], "fails");
    bool found = false;
    for (const auto& res : j["local"]["results"])
        if (res["alpha"] == "(1,1)") {
            EXPECT_EQ(res["status"], "fails");
            found = true;
        }
    EXPECT_TRUE(found);
}

TEST(Cli, Prolong) {
    auto r = run("prolong " + corpus("twisted.var"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("particular: (a / (2*c))"), std::string::npos) << r.out;
}

TEST(Cli, WideAndDim) {
    auto w = run("axiom-wide " + corpus("deep.set") + " --n 2");
    EXPECT_EQ(w.code, 0);
    EXPECT_NE(w.out.find("-x1*x2 + y2 = 0"), std::string::npos) << w.out;
    auto d = run("dim-cert " + corpus("triangle.sys") + " --json");
    ASSERT_EQ(d.code, 0);
    EXPECT_EQ(nlohmann::json::parse(d.out)["dimension"], 1);
}

TEST(Cli, Deterministic) {
    for (auto cmd : {"config-check " + corpus("noncomm.cfg") + " --json --jobs 2",
                     "prolong " + corpus("generic_circle.var") + " --json", std::string("jet 'd2(c*d1(u))' --k 2 --param c")}) {
        auto a = run(cmd), b = run(cmd);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out);
    }
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("config-check /nonexistent/file.cfg").code, 2);
    EXPECT_EQ(run("config-check " + temp_file("bad.cfg", "k=1\nP: d1\np[d1 = x\n")).code, 2);
    EXPECT_EQ(run("config-check " + temp_file("dom.cfg", "k=1\nP: d1\np[d1] = x[0]\n")).code, 1);
    EXPECT_EQ(run("prolong " + temp_file("off.var", "coords: x, y\neta: none\nx^2 + y^2 - 1\nat: 2, 0\n")).code, 1);
    EXPECT_EQ(run("derive 'x +'").code, 2);
}

TEST(Cli, FmtRoundTrip) {
    auto a = run("fmt " + corpus("mixed.cfg"));
    ASSERT_EQ(a.code, 0);
    auto b = run("fmt " + temp_file("mixed.cfg", a.out));
    EXPECT_EQ(a.out, b.out);
}
