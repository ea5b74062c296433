#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <set>

#include "dimers/geometry.hpp"

using namespace dimers;

namespace {

LatticePolygon poly(std::vector<LatticeVector> v) { return LatticePolygon(std::move(v)); }

const LatticePolygon p2_triangle = poly({{1, 0}, {0, 1}, {-1, -1}});
const LatticePolygon dp1_quad = poly({{1, 0}, {0, 1}, {-1, 0}, {-1, -1}});
const LatticePolygon unit_triangle = poly({{0, 0}, {1, 0}, {0, 1}});

// Independent oracle: count lattice points by exact half-plane tests against the hull edges,
// computed from the raw vertex list without using locate().
std::pair<int, int> brute_counts(const std::vector<LatticeVector>& v) {
    int inside = 0, on = 0;
    for (int x = -20; x <= 20; ++x) {
        for (int y = -20; y <= 20; ++y) {
            int neg = 0, zero = 0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                const auto a = v[i], b = v[(i + 1) % v.size()];
                const long c = (b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x);
                if (c < 0) ++neg;
                if (c == 0) ++zero;
            }
            if (neg == 0 && zero == 0) ++inside;
            if (neg == 0 && zero > 0) ++on;
        }
    }
    return {inside, on};
}

}  // namespace

TEST_CASE("convex hull examples") {
    std::vector<LatticeVector> pts{{1, 0}, {0, 1}, {-1, -1}, {0, 0}};
    CHECK(convex_hull(pts) == p2_triangle);
    std::vector<LatticeVector> tri{{0, 0}, {1, 0}, {0, 1}};
    CHECK(convex_hull(tri) == unit_triangle);
    std::vector<LatticeVector> quad{{1, 0}, {0, 1}, {-1, 0}, {-1, -1}};
    CHECK(convex_hull(quad) == dp1_quad);
    CHECK(dp1_quad.vertices() == std::vector<LatticeVector>{{-1, -1}, {1, 0}, {0, 1}, {-1, 0}});
}

TEST_CASE("convex hull rejects degenerate input") {
    std::vector<LatticeVector> two{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(convex_hull(two), DegenerateError);
    std::vector<LatticeVector> line{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    CHECK_THROWS_AS(convex_hull(line), DegenerateError);
    CHECK_THROWS_AS(poly({{0, 0}, {0, 1}, {1, 0}}), DegenerateError);  // clockwise
    CHECK_THROWS_AS(poly({{0, 0}, {1, 0}, {2, 0}, {0, 1}}), DegenerateError);  // collinear vertex
}

TEST_CASE("origin interiority") {
    CHECK(contains_origin_interior(p2_triangle));
    CHECK_FALSE(contains_origin_interior(unit_triangle));
    CHECK(contains_origin_interior(poly({{2, -1}, {-1, 2}, {-1, -1}})));
}

TEST_CASE("doubled area") {
    CHECK(doubled_area(p2_triangle) == 3);
    CHECK(doubled_area(dp1_quad) == 4);
    CHECK(doubled_area(unit_triangle) == 1);
}

TEST_CASE("apply transform") {
    const IntegerMatrix2 psi(2, -1, -1, 2);
    CHECK(apply_transform(psi, p2_triangle) == poly({{2, -1}, {-1, 2}, {-1, -1}}));
    CHECK(apply_transform(IntegerMatrix2::identity(), dp1_quad) == dp1_quad);
    CHECK(apply_transform(IntegerMatrix2(0, 1, 1, 0), p2_triangle) == p2_triangle);
    CHECK_THROWS_AS(apply_transform(IntegerMatrix2(1, 2, 2, 4), p2_triangle), DegenerateError);
}

TEST_CASE("smith normal form") {
    for (auto m : {IntegerMatrix2(2, -1, -1, 2), IntegerMatrix2(2, 0, 0, 2), IntegerMatrix2(4, 6, 2, 8),
                   IntegerMatrix2(0, 3, 5, 0), IntegerMatrix2(1, 0, 0, 1), IntegerMatrix2(6, 4, 4, 6)}) {
        const SmithForm s = smith_normal_form(m);
        CHECK(std::llabs(s.u.det()) == 1);
        CHECK(std::llabs(s.v.det()) == 1);
        CHECK(s.u * m * s.v == IntegerMatrix2(s.d1, 0, 0, s.d2));
        CHECK(s.d1 >= 0);
        if (s.d1 != 0) CHECK(s.d2 % s.d1 == 0);
    }
}

TEST_CASE("kernel group examples") {
    const auto k = kernel_group(IntegerMatrix2(2, -1, -1, 2));
    REQUIRE(k.invariant_factors == std::vector<std::int64_t>{3});
    CHECK(k.generators[0] == TorsionPoint{Rational(1, 3), Rational(2, 3)});
    CHECK(kernel_group(IntegerMatrix2::identity()).trivial());
    CHECK(kernel_group(IntegerMatrix2(2, 0, 0, 2)).invariant_factors == std::vector<std::int64_t>{2, 2});
    CHECK_THROWS_AS(kernel_group(IntegerMatrix2(1, 1, 1, 1)), DegenerateError);
}

TEST_CASE("kernel group order and elements match brute force for |det| <= 50") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dist(-7, 7);
    int tested = 0;
    while (tested < 300) {
        const IntegerMatrix2 m(dist(rng), dist(rng), dist(rng), dist(rng));
        const std::int64_t det = std::llabs(m.det());
        if (det == 0 || det > 50) continue;
        ++tested;
        std::set<TorsionPoint> brute;
        for (std::int64_t i = 0; i < det; ++i)
            for (std::int64_t j = 0; j < det; ++j) {
                const std::int64_t u = m.a() * i + m.b() * j, v = m.c() * i + m.d() * j;
                if (u % det == 0 && v % det == 0) brute.insert({Rational(i, det), Rational(j, det)});
            }
        const auto k = kernel_group(m);
        CHECK(k.order() == det);
        CHECK(static_cast<std::int64_t>(brute.size()) == det);
        const auto el = k.elements();
        CHECK(std::set<TorsionPoint>(el.begin(), el.end()) == brute);
        for (std::size_t i = 0; i + 1 < k.invariant_factors.size(); ++i)
            CHECK(k.invariant_factors[i + 1] % k.invariant_factors[i] == 0);
    }
}

TEST_CASE("lattice points") {
    auto lp = lattice_points(p2_triangle);
    CHECK(lp.interior == std::vector<LatticeVector>{{0, 0}});
    CHECK(lp.boundary.size() == 3);

    const auto big = poly({{2, -1}, {-1, 2}, {-1, -1}});
    lp = lattice_points(big);
    const auto [in, on] = brute_counts(big.vertices());
    CHECK(static_cast<int>(lp.interior.size()) == in);
    CHECK(static_cast<int>(lp.boundary.size()) == on);
    CHECK(lp.interior == std::vector<LatticeVector>{{0, 0}});
    CHECK(lp.boundary.size() == 9);

    lp = lattice_points(unit_triangle);
    CHECK(lp.interior.empty());
    CHECK(lp.boundary.size() == 3);
}

TEST_CASE("adjacency pairs") {
    CHECK(adjacency_pairs(p2_triangle).empty());
    using P = std::pair<std::size_t, std::size_t>;
    CHECK(adjacency_pairs(dp1_quad) == std::vector<P>{{0, 2}, {1, 3}});
    CHECK(adjacency_pairs(poly({{0, 0}, {2, 0}, {3, 1}, {1, 3}, {-1, 1}})).size() == 5);
}

TEST_CASE("polygon properties on random hulls") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coord(-6, 6), count(3, 9), ent(-3, 3);
    for (int iter = 0; iter < 400; ++iter) {
        std::vector<LatticeVector> pts;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) pts.push_back({coord(rng), coord(rng)});
        std::optional<LatticePolygon> hull;
        try {
            hull = convex_hull(pts);
        } catch (const DegenerateError&) {
            continue;
        }
        const LatticePolygon& p = *hull;

        // Idempotent and order-insensitive.
        CHECK(convex_hull(p.vertices()) == p);
        std::shuffle(pts.begin(), pts.end(), rng);
        CHECK(convex_hull(pts) == p);

        // Pick.
        const auto lp = lattice_points(p);
        CHECK(doubled_area(p) == 2 * static_cast<std::int64_t>(lp.interior.size()) +
                                     static_cast<std::int64_t>(lp.boundary.size()) - 2);
        const auto [in, on] = brute_counts(p.vertices());
        CHECK(static_cast<int>(lp.interior.size()) == in);
        CHECK(static_cast<int>(lp.boundary.size()) == on);

        // Area scales by |det|.
        const IntegerMatrix2 m(ent(rng), ent(rng), ent(rng), ent(rng));
        if (m.det() != 0) CHECK(doubled_area(apply_transform(m, p)) == std::llabs(m.det()) * doubled_area(p));
    }
}

TEST_CASE("translation normalization") {
    CHECK(p2_triangle.translated({3, -2}).equal_up_to_translation(p2_triangle));
    CHECK_FALSE(p2_triangle.equal_up_to_translation(dp1_quad));
    CHECK(p2_triangle.str() == "conv{(-1,-1),(1,0),(0,1)}");
}

TEST_CASE("matrix parsing") {
    CHECK(IntegerMatrix2::parse("2,-1;-1,2") == IntegerMatrix2(2, -1, -1, 2));
    CHECK_THROWS(IntegerMatrix2::parse("2,-1,-1,2"));
    CHECK(IntegerMatrix2(2, -1, -1, 2).str() == "2,-1;-1,2");
}
