#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "dimers/ainfty.hpp"
#include "dimers/io.hpp"

using namespace dimers;

namespace {

const std::string data_dir = DIMERS_DATA_DIR;

DimerModel p2() { return read_dimer(data_dir + "/p2.dimer.json"); }
DimerModel dp1() { return read_dimer(data_dir + "/dp1.dimer.json"); }

using K = BasisElement::Kind;

bool all_arrows(const AinftyCategory& c, const OpKey& key) {
    return std::all_of(key.begin(), key.end(), [&](BasisId b) { return c.basis()[b].kind == K::Arrow; });
}

struct CycleCounts {
    std::map<std::size_t, int> by_arity;
    int positive = 0, negative = 0;
};

CycleCounts cycle_products(const AinftyCategory& c) {
    CycleCounts n;
    for (const auto& [key, out] : c.ops()) {
        if (!all_arrows(c, key)) continue;
        ++n.by_arity[key.size()];
        for (const auto& [o, coef] : out) {
            CHECK(c.basis()[o].kind == K::DualArrow);
            (coef > 0 ? n.positive : n.negative) += 1;
        }
    }
    return n;
}

std::pair<EdgeSet, std::vector<std::size_t>> first_internal(const DimerModel& g) {
    for (const auto& d : perfect_matchings(g))
        if (auto o = is_internal(g, d)) return {d, *o};
    FAIL("no internal matching");
    return {};
}

void check_duality(const AinftyCategory& c) {
    for (std::size_t v = 0; v < c.object_count(); ++v)
        for (std::size_t w = 0; w < c.object_count(); ++w)
            CHECK(c.hom(v, w, 1).size() == c.hom(w, v, 2).size());
}

}  // namespace

TEST_CASE("hexagonal category is the commutator structure") {
    const DimerModel g = hexagonal_dimer();
    const AinftyCategory c = build_category(g);
    CHECK(c.object_count() == 1);
    CHECK(c.basis().size() == 8);
    const CycleCounts n = cycle_products(c);
    CHECK(n.by_arity == std::map<std::size_t, int>{{2, 6}});
    CHECK(n.positive == 3);
    CHECK(n.negative == 3);
    // m2(x, y) and m2(y, x) land on the same dual arrow with opposite signs.
    const CategoryLayout L{1, 3};
    for (std::size_t x = 0; x < 3; ++x) {
        for (std::size_t y = 0; y < 3; ++y) {
            if (x == y) continue;
            const auto& ops = c.ops();
            auto xy = ops.find({L.arrow(x), L.arrow(y)});
            auto yx = ops.find({L.arrow(y), L.arrow(x)});
            REQUIRE(xy != ops.end());
            REQUIRE(yx != ops.end());
            const std::size_t z = 3 - x - y;
            CHECK(xy->second == LinearCombination{{L.dual_arrow(z), xy->second.begin()->second}});
            CHECK(yx->second == LinearCombination{{L.dual_arrow(z), -xy->second.begin()->second}});
        }
    }
    CHECK(check_ainfty_relations(c).ok);
}

TEST_CASE("projective plane category") {
    const DimerModel g = p2();
    const AinftyCategory c = build_category(g);
    CHECK(c.object_count() == 3);
    const CycleCounts n = cycle_products(c);
    CHECK(n.by_arity == std::map<std::size_t, int>{{2, 18}});
    CHECK(n.positive == 9);
    CHECK(n.negative == 9);
    const RelationCheck r = check_ainfty_relations(c);
    CHECK(r.ok);
    CHECK(r.tuples_checked > 0);
    CHECK(degrees_consistent(c));
    check_duality(c);
}

TEST_CASE("del Pezzo category") {
    const AinftyCategory c = build_category(dp1());
    const CycleCounts n = cycle_products(c);
    CHECK(n.by_arity == std::map<std::size_t, int>{{2, 12}, {3, 8}});
    CHECK(check_ainfty_relations(c).ok);
    CHECK(degrees_consistent(c));
    check_duality(c);
}

TEST_CASE("flipping one cycle-product sign breaks the relations") {
    for (const DimerModel& g : {hexagonal_dimer(), p2(), dp1()}) {
        const AinftyCategory c = build_category(g);
        for (const auto& [key, out] : c.ops()) {
            if (!all_arrows(c, key)) continue;
            AinftyCategory mutant = c;
            LinearCombination flipped = out;
            for (auto& [o, coef] : flipped) coef = -coef;
            mutant.set(key, flipped);
            const RelationCheck r = check_ainfty_relations(mutant);
            CHECK_FALSE(r.ok);
            REQUIRE(r.first_violation.has_value());
            CHECK_FALSE(r.first_violation->tuple.empty());
            CHECK_FALSE(r.first_violation->residual.empty());
        }
    }
}

TEST_CASE("flipping a duality sign breaks the relations") {
    const DimerModel g = p2();
    const AinftyCategory c = build_category(g);
    const CategoryLayout L{3, 9};
    AinftyCategory mutant = c;
    const OpKey key{L.arrow(0), L.dual_arrow(0)};
    LinearCombination v = c.ops().at(key);
    for (auto& [o, coef] : v) coef = -coef;
    mutant.set(key, v);
    CHECK_FALSE(check_ainfty_relations(mutant).ok);
}

TEST_CASE("identity products alone satisfy the relations") {
    const AinftyCategory full = build_category(p2());
    AinftyCategory units(full.object_count(), full.basis());
    for (const auto& [key, out] : full.ops()) {
        const bool has_unit = std::any_of(key.begin(), key.end(),
                                          [&](BasisId b) { return full.basis()[b].kind == K::Identity; });
        if (has_unit) units.set(key, out);
    }
    CHECK(check_ainfty_relations(units).ok);
    CHECK(check_ainfty_relations(AinftyCategory()).ok);
}

TEST_CASE("degree bookkeeping is enforced") {
    AinftyCategory c = build_category(hexagonal_dimer());
    const CategoryLayout L{1, 3};
    CHECK_THROWS_AS(c.add({L.arrow(0), L.arrow(1)}, L.arrow(2), 1), std::logic_error);
    CHECK_THROWS_AS(c.add({L.arrow(0)}, L.dual_arrow(0), 1), std::logic_error);
}

TEST_CASE("projective plane directed subcategory") {
    const DimerModel g = p2();
    const AinftyCategory c = build_category(g);
    for (const auto& d : perfect_matchings(g)) {
        const auto order = is_internal(g, d);
        if (!order) continue;
        const DirectedCategory dc = directed_subcategory(c, *order);
        const auto& o = *order;
        const auto& cat = dc.category;
        CHECK(cat.hom(o[0], o[1], 1).size() == 3);
        CHECK(cat.hom(o[1], o[2], 1).size() == 3);
        CHECK(cat.hom(o[0], o[2], 2).size() == 3);
        std::size_t non_identity = 0;
        for (const auto& b : cat.basis()) non_identity += b.kind != K::Identity;
        CHECK(non_identity == 9);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < i; ++j) CHECK(cat.hom(o[i], o[j]).empty());

        const IntegerMatrix e = euler_matrix(dc);
        CHECK(e == IntegerMatrix{{1, -3, 3}, {0, 1, -3}, {0, 0, 1}});
        CHECK(determinant(e) == 1);
        const IntegerMatrix s = intersection_matrix(dc);
        CHECK(s == IntegerMatrix{{0, -3, 3}, {3, 0, -3}, {-3, 3, 0}});
        CHECK(check_maslov_table(g, d, o));
        CHECK(check_ainfty_relations(cat).ok);

        const OrderIndependence oi = order_independence(g, d);
        CHECK(oi.status == OrderIndependence::Status::Independent);
        CHECK(oi.orders == 1);
    }
}

TEST_CASE("corner matchings fail the Maslov precondition") {
    const DimerModel g = p2();
    for (const auto& d : perfect_matchings(g)) {
        if (is_internal(g, d)) continue;
        CHECK_THROWS_AS(check_maslov_table(g, d, {0, 1, 2}), PreconditionError);
        CHECK_THROWS_AS(order_independence(g, d), PreconditionError);
    }
}

TEST_CASE("del Pezzo directed subcategory") {
    const DimerModel g = dp1();
    const Quiver q = dual_quiver(g);
    const auto [d, order] = first_internal(g);
    const DirectedCategory dc = directed_subcategory(build_category(g), order);
    CHECK(check_maslov_table(g, d, order));
    const IntegerMatrix e = euler_matrix(dc);
    const std::set<std::size_t> in_d(d.begin(), d.end());
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(e[i][i] == 1);
        for (std::size_t j = 0; j < 4; ++j) {
            if (j < i) {
                CHECK(e[i][j] == 0);
                continue;
            }
            if (j == i) continue;
            std::int64_t want = 0;
            for (const Arrow& a : q.arrows) {
                const bool between = (a.source == order[i] && a.target == order[j]) ||
                                     (a.source == order[j] && a.target == order[i]);
                if (between) want += in_d.count(a.edge) ? 1 : -1;
            }
            CHECK(e[i][j] == want);
        }
    }
    CHECK(determinant(e) == 1);
    const IntegerMatrix s = intersection_matrix(dc);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(s[i][j] == -s[j][i]);

    // Sum of degree-one dims is |E| - |D|, of degree-two dims |D|.
    std::size_t one = 0, two = 0;
    for (const auto& b : dc.category.basis()) {
        one += b.degree == 1;
        two += b.degree == 2;
    }
    CHECK(one == g.edges().size() - d.size());
    CHECK(two == d.size());

    const OrderIndependence oi = order_independence(g, d);
    CHECK(oi.status == OrderIndependence::Status::Independent);
    CHECK(oi.orders >= 1);
    CHECK(order_independence(g, d, 3).status == OrderIndependence::Status::NotExhaustive);
}

TEST_CASE("unrelated objects can be ordered either way") {
    std::vector<BasisElement> basis{{K::Identity, 0, 0, 0, 0}, {K::Identity, 1, 0, 1, 1}};
    AinftyCategory c(2, basis);
    c.add({0, 0}, 0, 1);
    c.add({1, 1}, 1, 1);
    const DirectedCategory a = directed_subcategory(c, {0, 1}), b = directed_subcategory(c, {1, 0});
    CHECK(a.category == b.category);
    CHECK(euler_matrix(a) == IntegerMatrix{{1, 0}, {0, 1}});
}

TEST_CASE("single object") {
    const DirectedCategory d = directed_subcategory(build_category(hexagonal_dimer()), {0});
    CHECK(d.category.basis().size() == 1);
    CHECK(euler_matrix(d) == IntegerMatrix{{1}});
    CHECK(intersection_matrix(d) == IntegerMatrix{{0}});
}

TEST_CASE("dump format") {
    const std::string s = dump_category(build_category(hexagonal_dimer()));
    CHECK(s.rfind("objects 1\nhom 0 0\t1 3 3 1\n", 0) == 0);
    CHECK(s.find("m2\t[a0^v,a0]\t+1\tid0^v\n") != std::string::npos);
}
