#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "dimers/dimer.hpp"
#include "dimers/io.hpp"

using namespace dimers;

namespace {

const std::string data_dir = DIMERS_DATA_DIR;

DimerModel p2() { return read_dimer(data_dir + "/p2.dimer.json"); }
DimerModel dp1() { return read_dimer(data_dir + "/dp1.dimer.json"); }

bool has_kind(const std::vector<Diagnostic>& d, Diagnostic::Kind k) {
    return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.kind == k; });
}

// Hexagonal tiling with two contractible digons hung off it: edges 3,4 join
// black 0 to a bivalent white node, edges 5,6 join white 1 to a bivalent
// black node.
DimerModel digon_model() {
    std::vector<Node> nodes{{0, Color::Black, Rational(0), Rational(0)},
                            {1, Color::White, Rational(1, 3), Rational(1, 3)},
                            {2, Color::White, Rational(1, 2), Rational(0)},
                            {3, Color::Black, Rational(2, 3), Rational(2, 3)}};
    std::vector<Edge> edges{{0, 0, 1, {0, 0}}, {1, 0, 1, {-1, 0}}, {2, 0, 1, {0, -1}}, {3, 0, 2, {0, 0}},
                            {4, 0, 2, {0, 0}}, {5, 3, 1, {0, 0}}, {6, 3, 1, {0, 0}}};
    return DimerModel(nodes, edges, {{0, {2, 3, 4, 0, 1}}, {1, {5, 6, 2, 0, 1}}, {2, {3, 4}}, {3, {5, 6}}});
}

// Arrows of the edges at each node, taken in rotation order, chain into a
// directed cycle (one of the two cyclic directions).
bool node_cycles_ok(const DimerModel& g) {
    const Quiver q = dual_quiver(g);
    for (std::size_t n = 0; n < g.nodes().size(); ++n) {
        const auto& rot = g.rotation(n);
        const std::size_t k = rot.size();
        bool fwd = true, bwd = true;
        for (std::size_t i = 0; i < k; ++i) {
            const Arrow& a = q.arrows[dart_edge(rot[i])];
            const Arrow& b = q.arrows[dart_edge(rot[(i + 1) % k])];
            fwd = fwd && a.target == b.source;
            bwd = bwd && b.target == a.source;
        }
        if (!fwd && !bwd) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("hexagonal dimer") {
    const DimerModel g = hexagonal_dimer();
    CHECK(g.valid());
    CHECK(g.face_count() == 1);
    CHECK(g.faces()[0].size() == 6);
    const Quiver q = dual_quiver(g);
    CHECK(q.vertex_count == 1);
    CHECK(q.arrows.size() == 3);
    for (const Arrow& a : q.arrows) CHECK(a.source == a.target);
    const auto zz = zigzag_paths(g);
    CHECK(zz.size() == 3);
    LatticeVector sum;
    for (const auto& z : zz) sum += z.homology;
    CHECK(sum == LatticeVector{});
    CHECK(is_consistent(g).consistent);
}

TEST_CASE("bundled projective plane dimer") {
    const DimerModel g = p2();
    CHECK(validate(g).empty());
    CHECK(g.nodes().size() == 6);
    CHECK(g.edges().size() == 9);
    REQUIRE(g.face_count() == 3);
    for (const auto& f : g.faces()) CHECK(f.size() == 6);

    const Quiver q = dual_quiver(g);
    CHECK(q.arrows.size() == 9);
    std::map<std::pair<std::size_t, std::size_t>, int> mult;
    for (const Arrow& a : q.arrows) {
        CHECK(a.source != a.target);
        ++mult[{a.source, a.target}];
    }
    // Three arrows in each direction of a single oriented 3-cycle.
    REQUIRE(mult.size() == 3);
    for (const auto& [st, m] : mult) {
        CHECK(m == 3);
        CHECK(mult.count({st.second, st.first}) == 0);
    }
    CHECK(node_cycles_ok(g));

    const auto zz = zigzag_paths(g);
    CHECK(zz.size() == 3);
    std::size_t total = 0;
    LatticeVector sum;
    for (const auto& z : zz) {
        total += z.darts.size();
        sum += z.homology;
        CHECK(z.homology != LatticeVector{});
    }
    CHECK(total == g.dart_count());
    CHECK(sum == LatticeVector{});

    const auto rep = is_consistent(g);
    CHECK(rep.consistent);
    CHECK(rep.violations.empty());
}

TEST_CASE("bundled del Pezzo dimer") {
    const DimerModel g = dp1();
    CHECK(g.valid());
    CHECK(g.nodes().size() == 6);
    CHECK(g.edges().size() == 10);
    REQUIRE(g.face_count() == 4);
    std::size_t sum = 0;
    std::multiset<std::size_t> lengths;
    for (const auto& f : g.faces()) {
        sum += f.size();
        lengths.insert(f.size());
    }
    CHECK(sum == 20);
    CHECK(lengths == std::multiset<std::size_t>{4, 4, 6, 6});
    CHECK(dual_quiver(g).arrows.size() == 10);
    CHECK(node_cycles_ok(g));
    std::multiset<std::size_t> valences;
    for (std::size_t n = 0; n < 6; ++n) valences.insert(g.valence(n));
    CHECK(valences == std::multiset<std::size_t>{3, 3, 3, 3, 4, 4});
    CHECK(is_consistent(g).consistent);
}

TEST_CASE("dart bookkeeping") {
    for (const DimerModel& g : {hexagonal_dimer(), p2(), dp1()}) {
        std::vector<int> seen(g.dart_count(), 0);
        for (const auto& f : g.faces())
            for (Dart d : f) ++seen[d];
        CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
        for (Dart d = 0; d < g.dart_count(); ++d) {
            CHECK(dart_reverse(dart_reverse(d)) == d);
            CHECK(dart_reverse(d) != d);
            CHECK(g.next_cw(g.next_ccw(d)) == d);
        }
        const long v = static_cast<long>(g.nodes().size()), e = static_cast<long>(g.edges().size());
        CHECK(v - e + static_cast<long>(g.face_count()) == 0);
    }
}

TEST_CASE("loop edge is not bipartite") {
    std::vector<Node> nodes{{0, Color::Black, Rational(0), Rational(0)}};
    std::vector<Edge> edges{{0, 0, 0, {1, 0}}};
    const DimerModel g(nodes, edges);
    CHECK_FALSE(g.valid());
    CHECK(has_kind(g.diagnostics(), Diagnostic::Kind::NotBipartite));
    CHECK_THROWS_AS(g.faces(), DimerError);
}

TEST_CASE("structural diagnostics") {
    // Two disjoint hexagonal tilings.
    std::vector<Node> nodes{{0, Color::Black, Rational(0), Rational(0)},
                            {1, Color::White, Rational(1, 3), Rational(1, 3)},
                            {2, Color::Black, Rational(1, 2), Rational(0)},
                            {3, Color::White, Rational(5, 6), Rational(1, 3)}};
    std::vector<Edge> edges{{0, 0, 1, {0, 0}}, {1, 0, 1, {-1, 0}}, {2, 0, 1, {0, -1}},
                            {3, 2, 3, {0, 0}}, {4, 2, 3, {-1, 0}}, {5, 2, 3, {0, -1}}};
    CHECK(has_kind(DimerModel(nodes, edges).diagnostics(), Diagnostic::Kind::Disconnected));

    // A single edge: the one face winds around the torus.
    std::vector<Edge> one{{0, 0, 1, {0, 0}}};
    std::vector<Node> two(nodes.begin(), nodes.begin() + 2);
    const auto d = DimerModel(two, one).diagnostics();
    CHECK(has_kind(d, Diagnostic::Kind::EulerCharacteristic));

    // Parallel duplicate edge without explicit rotations.
    std::vector<Edge> dup{{0, 0, 1, {0, 0}}, {1, 0, 1, {-1, 0}}, {2, 0, 1, {0, -1}}, {3, 0, 1, {0, 0}}};
    CHECK(has_kind(DimerModel(two, dup).diagnostics(), Diagnostic::Kind::DuplicateDirection));

    // Rotation that omits an edge.
    CHECK(has_kind(DimerModel(two, dup, {{0, {0, 1, 2}}}).diagnostics(), Diagnostic::Kind::BadRotation));

    CHECK_THROWS_AS(DimerModel(two, {{0, 0, 7, {0, 0}}}), DimerError);
    CHECK_THROWS_AS(DimerModel(two, {{0, 0, 1, {0, 0}}, {0, 0, 1, {1, 0}}}), DimerError);
}

TEST_CASE("null-homologous zigzags around digons") {
    const DimerModel g = digon_model();
    REQUIRE(g.valid());
    CHECK(g.face_count() == 3);
    const auto rep = is_consistent(g);
    CHECK_FALSE(rep.consistent);
    REQUIRE(rep.violations.size() == 2);
    const auto zz = zigzag_paths(g);
    std::set<std::set<std::size_t>> certified;
    for (const auto& v : rep.violations) {
        CHECK(v.kind == ConsistencyViolation::Kind::NullHomologous);
        REQUIRE(v.paths.size() == 1);
        CHECK(zz[v.paths[0]].homology == LatticeVector{});
        std::set<std::size_t> edges;
        for (Dart d : zz[v.paths[0]].darts) edges.insert(dart_edge(d));
        certified.insert(edges);
    }
    CHECK(certified == std::set<std::set<std::size_t>>{{3, 4}, {5, 6}});
}

TEST_CASE("cycle classes must generate the torus lattice") {
    std::vector<Node> nodes{{0, Color::Black, Rational(0), Rational(0)},
                            {1, Color::White, Rational(1, 2), Rational(1, 2)}};
    std::vector<Edge> edges{{0, 0, 1, {0, 0}}, {1, 0, 1, {0, 0}}, {2, 0, 1, {0, 0}}, {3, 0, 1, {0, 0}}};
    const DimerModel g(nodes, edges, {{0, {0, 1, 2, 3}}, {1, {0, 1, 2, 3}}});
    CHECK(has_kind(g.diagnostics(), Diagnostic::Kind::CyclesMissTorus));
}

TEST_CASE("explicit rotations matching the geometry change nothing") {
    const DimerModel g = p2();
    std::map<int, std::vector<int>> rot;
    for (std::size_t n = 0; n < g.nodes().size(); ++n)
        for (Dart d : g.rotation(n)) rot[g.nodes()[n].id].push_back(g.edges()[dart_edge(d)].id);
    const DimerModel h(g.nodes(), g.edges(), rot);
    REQUIRE(h.valid());
    CHECK(h.faces() == g.faces());
}

TEST_CASE("file round trip and parse errors") {
    for (const char* name : {"p2.dimer.json", "dp1.dimer.json"}) {
        const DimerModel g = read_dimer(data_dir + "/" + name);
        const std::string once = dimer_to_json(g, "x");
        const DimerModel h = parse_dimer(once);
        CHECK(dimer_to_json(h, "x") == once);
        CHECK(h.faces() == g.faces());
    }
    try {
        parse_dimer("{\n  \"nodes\": [\n    {\"id\": 0,, }\n  ]\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() > 0);
    }
    CHECK_THROWS_AS(parse_dimer("{\"nodes\": [], \"edges\": [{\"id\": 0}]}"), ParseError);
    CHECK_THROWS_AS(parse_dimer("{\"nodes\": [{\"id\":0,\"color\":\"red\",\"pos\":[0,0]}], \"edges\": []}"), ParseError);
    CHECK_THROWS_AS(parse_dimer("{\"nodes\": [{\"id\":0,\"color\":\"black\",\"pos\":[\"3/2\",0]}], \"edges\": []}"),
                    ParseError);
}
