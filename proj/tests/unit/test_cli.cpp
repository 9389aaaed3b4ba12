#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support/dot_checker.hpp"
#include "tdlc/cli.hpp"
#include "tdlc/graph_export.hpp"

using namespace tdlc;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
    bool operator==(const Run&) const = default;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("tdlc_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kT = R"(gen t = w:"1"; sigma: "" -> (1 2))";
const std::string kG1 = R"(gen g1 = w:"1")";
const std::string kG2 = R"(gen g2 = w:"2")";

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("documented examples") {
        Run a = run({"padic", "add", "--p", "3", "--lhs", "3:102", "--rhs", "4:1200", "--digits", "5"});
        CHECK(a.code == 0);
        CHECK(a.out == "4:1012\n");

        Run b = run({"groupoid", "prod", "--group", "qp", "--p", "3", "D[r=0,a=1/3]", "D[r=0,a=1/3]"});
        CHECK(b.code == 0);
        CHECK(b.out == "D[r=0,a=2/3]\n");

        Run c = run({"iso", "rebuild", "--group", "qp", "--p", "3", "--seed", "42"});
        CHECK(c.code == 0);
        CHECK(c.out.rfind("PASS", 0) == 0);
    }

    TEST_CASE("subcommand outputs") {
        CHECK(run({"padic", "neg", "--p", "3", "--lhs", "0:100", "--digits", "3"}).out == "0:22\n");
        CHECK(run({"codeset", "union", "{[0,1];[2]}", "{[0]}"}).out == "{[0];[2]}\n");
        CHECK(run({"codeset", "subset", "{[0,1]}", "{[0]}"}).out == "yes\n");
        CHECK(run({"groupoid", "inv", "--group", "zqp", "--p", "3", "E[z=1,r=0,a=1/3]"}).out == "E[z=-1,r=-1,a=2/3]\n");
        CHECK(run({"groupoid", "index", "--p", "3", "D[r=-1,a=0]", "D[r=1,a=0]"}).out == "9\n");
        CHECK(run({"groupoid", "measure", "--p", "3", "D[r=1,a=0]"}).out == "1/3\n");
        CHECK(run({"groupoid", "scale", "--group", "zqp", "--p", "3", "E[z=-1,r=0,a=0]"}).out == "3\n");
        CHECK(run({"groupoid", "meet", "--p", "3", "D[r=0,a=1/3]", "D[r=0,a=2/3]"}).out == "empty\n");
        CHECK(run({"tree", "classify", "--gen", kG1, "--gen", kG2, "--word", "g1*g2", "--radius", "6"}).out.rfind("hyperbolic length=2", 0) == 0);
        CHECK(run({"tree", "scale", "--gen", kT, "--word", "t", "--radius", "4"}).out == "2\n");
        CHECK(run({"tree", "scale", "--gen", kT, "--word", "t^2", "--radius", "4"}).out == "4\n");
        CHECK(run({"tree", "apply", "--gen", kG1, "--word", "g1", "--vertex", "2"}).out == "\"12\"\n");
        CHECK(run({"tree", "gens", "--gen", kT}).out == kT + "\n");
        Run conj = run({"tree", "conjugate", "--gen", kG1, "--gen", kT, "--word", "g1", "--word2", "t", "--radius", "4"});
        CHECK(conj.out.rfind("not conjugate", 0) == 0);

        Run dot = run({"graph", "ball", "--degree", "3", "--radius", "2", "--format", "dot"});
        CHECK(dot.code == 0);
        CHECK(dotcheck::check(dot.out).empty());
        Run ca = run({"graph", "ca", "--group", "zqp", "--p", "3", "--radius", "2", "--format", "dot"});
        CHECK(ca.code == 0);
        CHECK(dotcheck::check(ca.out).empty());
    }

    TEST_CASE("errors carry their name and exit code") {
        struct Case {
            std::vector<std::string> args;
            int code;
            std::string name;
        };
        std::vector<Case> cases{
            {{"groupoid", "prod", "--p", "3", "D[r=0,a=1/3]", "D[r=1,a=0]"}, 1, "Undefined"},
            {{"groupoid", "inv", "--p", "3", "D[r=5,a=0]"}, 1, "WindowOverflow"},
            {{"padic", "add", "--p", "3", "--lhs", "3:102", "--rhs", "4:12", "--digits", "5"}, 1, "PrecisionExhausted"},
            {{"groupoid", "index", "--p", "3", "D[r=0,a=1/3]", "D[r=0,a=0]"}, 1, "InvalidArgument"},
            {{"render", temp_path("missing.txt")}, 1, "InvalidArgument"},
            {{"tree", "m", "--vertex", "11"}, 1, "InvalidArgument"},
            {{"groupoid", "prod", "--p", "3", "D[r=0,a=1/3", "D[r=0,a=0]"}, 2, "ParseError"},
            {{"tree", "apply", "--gen", "gen t = w:\"1\" sigma", "--word", "t"}, 2, "ParseError"},
            {{"tree", "apply", "--word", "nope"}, 2, "ParseError"},
            {{"codeset", "union", "{[0,1]"}, 2, "ParseError"},
            {{"padic", "frobenius"}, 2, "ParseError"},
            {{"graph", "ca", "--format", "png"}, 2, "ParseError"},
            {{}, 2, "ParseError"},
            {{"groupoid", "prod", "--p", "3", "D[r=0,a=0]"}, 2, "ParseError"},
        };
        for (const Case& c : cases) {
            Run r = run(c.args);
            INFO(r.err);
            CHECK(r.code == c.code);
            CHECK(r.err.find(c.name) != std::string::npos);
            CHECK(r.out.empty());
        }
        CHECK(run({"--help"}).code == 0);
    }

    TEST_CASE("byte-identical output across repeated runs") {
        std::vector<std::vector<std::string>> matrix{
            {"padic", "mul", "--p", "5", "--lhs", "0:1234", "--rhs", "1:4321", "--digits", "4"},
            {"padic", "sub", "--p", "3", "--lhs", "3:3:102", "--rhs", "4:1200", "--digits", "5"},
            {"codeset", "minimal", "--tree", "qp:2", "{[0,0];[0,1];[1]}"},
            {"codeset", "index", "{[0,1];[2]}"},
            {"groupoid", "list", "--group", "zqp", "--p", "2"},
            {"groupoid", "dump", "--p", "3"},
            {"groupoid", "suborbit", "--p", "3", "D[r=0,a=0]", "D[r=-1,a=0]", "D[r=1,a=0]"},
            {"groupoid", "extend", "--p", "3", "D[r=0,a=0]", "D[r=0,a=1/3]", "D[r=1,a=0]", "D[r=1,a=1/3]"},
            {"groupoid", "modular", "--group", "zqp", "--p", "2", "E[z=1,r=0,a=1/2]"},
            {"iso", "rebuild", "--group", "zqp", "--p", "2", "--seed", "9", "--twist-shift", "1", "--twist-unit", "3"},
            {"iso", "rebuild", "--group", "qp", "--p", "3", "--seed", "11", "--twist-shift", "-1", "--twist-unit", "2"},
            {"tree", "portrait", "--gen", kT, "--word", "t^-3", "--vertex", "121"},
            {"tree", "tidy", "--gen", kT, "--word", "t", "--vertex", "3", "--ball", "1"},
            {"tree", "agree", "--gen", kG1, "--gen", kT, "--word", "g1", "--word2", "t", "--radius", "3"},
            {"tree", "conjugate", "--gen", kG1, "--gen", kG2, "--word", "g1", "--word2", "g2", "--radius", "3"},
            {"graph", "ca", "--group", "zqp", "--p", "2", "--radius", "2"},
            {"graph", "ball", "--degree", "4", "--radius", "2", "--gen", kT, "--word", "t", "--format", "dot"},
            {"groupoid", "prod", "--p", "3", "D[r=0,a=1/3]", "D[r=1,a=0]"},
        };
        for (const auto& args : matrix) {
            Run first = run(args), second = run(args);
            INFO(args.front() << " " << args.at(1));
            CHECK(first == second);
            CHECK((first.code == 0 ? !first.out.empty() : !first.err.empty()));
        }
    }

    TEST_CASE("emit then render without recomputation") {
        std::string path = temp_path("ca.txt");
        Run emitted = run({"graph", "ca", "--group", "zqp", "--p", "2", "--radius", "2", "--emit", path});
        REQUIRE(emitted.code == 0);
        CHECK(emitted.out.find("vertices=10") != std::string::npos);
        LabeledGraph g = load_structured(slurp(path));
        CHECK(run({"render", path, "--format", "dot"}).out == to_dot(g));
        CHECK(run({"render", path, "--format", "dot"}).out ==
              run({"graph", "ca", "--group", "zqp", "--p", "2", "--radius", "2", "--format", "dot"}).out);
        CHECK(run({"render", path}).out == slurp(path));

        std::string table = temp_path("iso.txt");
        REQUIRE(run({"iso", "rebuild", "--group", "qp", "--p", "2", "--seed", "1", "--emit", table}).code == 0);
        CHECK(slurp(table).rfind("iso-table v1", 0) == 0);

        std::string bad = temp_path("bad.txt");
        std::ofstream(bad) << "not a dump\n";
        Run r = run({"render", bad});
        CHECK(r.code == 2);
        CHECK(r.err.find("ParseError") != std::string::npos);
        std::filesystem::remove(path);
        std::filesystem::remove(table);
        std::filesystem::remove(bad);
    }
}
