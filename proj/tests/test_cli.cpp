#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "dimers/io.hpp"

using namespace dimers;
namespace fs = std::filesystem;

namespace {

const std::string data_dir = DIMERS_DATA_DIR;
const std::string tool = DIMERCTL_PATH;

struct Run {
    int code = -1;
    std::string out;
};

// stdout only; stderr is discarded so that messages do not leak into checks.
Run run(const std::string& args) {
    Run r;
    FILE* p = popen((tool + " " + args + " 2>/dev/null").c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return data_dir + "/" + name; }

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / ("dimerctl_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("dimer subcommands on the projective plane") {
    const std::string p2 = data("p2.dimer.json");
    CHECK(run("validate " + p2).out == "valid\tnodes 6\tedges 9\tfaces 3\n");
    CHECK(run("consistent " + p2).out == "consistent\n");
    CHECK(run("char-polygon " + p2).out == "conv{(-1,-1),(1,0),(0,1)}\n");
    CHECK(run("char-polygon " + p2 + " --matching internal").out == "conv{(-1,-1),(1,0),(0,1)}\n");

    const Run e = run("euler " + p2);
    CHECK(e.code == 0);
    CHECK(e.out.rfind("1\t-3\t3\n0\t1\t-3\n0\t0\t1\ndet 1\n", 0) == 0);

    const Run m = run("matchings " + p2);
    CHECK(m.out.rfind("matchings 6\t", 0) == 0);
    CHECK(run("internal " + p2).code == 0);
    CHECK(run("ainfty-check " + p2).code == 0);
}

TEST_CASE("json output parses and agrees with the text form") {
    const Run v = run("validate " + data("dp1.dimer.json") + " --json");
    REQUIRE(v.code == 0);
    const auto j = nlohmann::json::parse(v.out);
    CHECK(j.at("valid") == true);
    CHECK(j.at("nodes") == 6);
    CHECK(j.at("edges") == 10);
    CHECK(j.at("faces") == 4);

    const auto c = nlohmann::json::parse(run("char-polygon " + data("dp1.dimer.json") + " --json").out);
    CHECK(c.at("doubled_area") == 4);
    CHECK(c.at("interior_points") == 1);
    CHECK(c.at("polygon").size() == 4);

    const auto cp = nlohmann::json::parse(run("critpoints " + data("p2_z3.poly.json") + " --json").out);
    CHECK(cp.at("expected") == 9);
    CHECK(cp.at("points").size() == 9);
}

TEST_CASE("output is byte-stable across runs") {
    for (const std::string args : {"quiver " + data("dp1.dimer.json"), "critpoints " + data("dp1.poly.json"),
                                   "verify " + data("p2.dimer.json") + " --poly " + data("p2.poly.json") + " --json",
                                   "trace " + data("p2.poly.json") + " --path 1"}) {
        CAPTURE(args);
        const Run a = run(args), b = run(args);
        CHECK(a.code == 0);
        CHECK(!a.out.empty());
        CHECK(a.out == b.out);
    }
}

TEST_CASE("cover output round-trips through the reader") {
    const fs::path dir = scratch();
    const std::string out = (dir / "p2_z3.dimer.json").string();
    const Run c = run("cover " + data("p2.dimer.json") + " --psi \"2,-1;-1,2\" --out " + out);
    REQUIRE(c.code == 0);
    CHECK(c.out.find("nodes 18\tedges 27\tfaces 9") != std::string::npos);
    CHECK(c.out.find("Z/3 <(1/3, 2/3)>") != std::string::npos);

    const DimerModel g = read_dimer(out);
    CHECK(g.nodes().size() == 18);
    CHECK(run("validate " + out).out == "valid\tnodes 18\tedges 27\tfaces 9\n");
    CHECK(run("char-polygon " + out).out == "conv{(-1,-1),(2,-1),(-1,2)}\n");
    CHECK(run("verify " + out + " --poly " + data("p2_z3.poly.json")).code == 0);

    // Writing the parsed file again reproduces it byte for byte.
    CHECK(dimer_to_json(g, nlohmann::json::parse(read_text_file(out)).value("description", "")) ==
          read_text_file(out));
    fs::remove_all(dir);
}

TEST_CASE("bundled files round-trip") {
    for (const char* name : {"p2.dimer.json", "dp1.dimer.json"}) {
        CAPTURE(name);
        const std::string text = read_text_file(data(name));
        const DimerModel g = parse_dimer(text);
        const std::string again = dimer_to_json(g, nlohmann::json::parse(text).value("description", ""));
        CHECK(parse_dimer(again).nodes().size() == g.nodes().size());
        CHECK(parse_dimer(again).edges().size() == g.edges().size());
        CHECK(dimer_to_json(parse_dimer(again), nlohmann::json::parse(text).value("description", "")) == again);
    }
    for (const char* name : {"p2.poly.json", "dp1.poly.json", "p2_z3.poly.json"}) {
        CAPTURE(name);
        const LaurentPolynomial w = read_polynomial(data(name));
        CHECK(parse_polynomial_json(polynomial_to_json(w)) == w);
        CHECK(LaurentPolynomial::parse(w.str()) == w);
    }
}

TEST_CASE("svg outputs are written") {
    const fs::path dir = scratch();
    const std::string svg1 = (dir / "c.svg").string(), svg2 = (dir / "t.svg").string();
    CHECK(run("coamoeba \"x + y + 1/(x*y)\" --grid 20 --out " + svg1).code == 0);
    CHECK(run("trace " + data("p2.poly.json") + " --steps 50 --out " + svg2).code == 0);
    for (const auto& f : {svg1, svg2}) {
        const std::string s = read_text_file(f);
        CHECK(s.rfind("<svg", 0) == 0);
        CHECK(s.find("</svg>") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("exit codes") {
    CHECK(run("").code == 2);
    CHECK(run("validate /nonexistent/file.json").code == 2);
    CHECK(run("critpoints \"x + + y\"").code == 2);
    CHECK(run("cover " + data("p2.dimer.json")).code == 2);
    CHECK(run("cover " + data("p2.dimer.json") + " --psi \"1,2;2,4\"").code == 1);
    CHECK(run("critpoints \"x + y\"").code == 1);
    CHECK(run("verify " + data("p2.dimer.json") + " --matching 0 --poly " + data("p2.poly.json")).code == 1);
    CHECK(run("verify " + data("p2.dimer.json") + " --poly " + data("dp1.poly.json")).code == 1);

    const fs::path dir = scratch();
    const std::string bad = (dir / "bad.json").string();
    write_text_file(bad, "{\"nodes\": [\n");
    CHECK(run("validate " + bad).code == 2);
    fs::remove_all(dir);
}
