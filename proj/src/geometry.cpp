#include "dimers/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

namespace dimers {

std::ostream& operator<<(std::ostream& os, LatticeVector v) { return os << '(' << v.x << ',' << v.y << ')'; }

IntegerMatrix2 IntegerMatrix2::parse(const std::string& text) {
    std::array<std::int64_t, 4> e{};
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        std::size_t used = 0;
        try {
            e[i] = std::stoll(text.substr(pos), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("matrix must look like 'a,b;c,d': " + text);
        }
        pos += used;
        while (pos < text.size() && text[pos] == ' ') ++pos;
        const char want = i == 1 ? ';' : ',';
        if (i < 3) {
            if (pos >= text.size() || text[pos] != want)
                throw std::invalid_argument("matrix must look like 'a,b;c,d': " + text);
            ++pos;
        }
    }
    if (pos != text.size()) throw std::invalid_argument("trailing characters in matrix: " + text);
    return {e[0], e[1], e[2], e[3]};
}

std::string IntegerMatrix2::str() const {
    std::ostringstream os;
    os << a_ << ',' << b_ << ';' << c_ << ',' << d_;
    return os.str();
}

// ---------------------------------------------------------------------------
// Smith normal form by alternating row/column Euclidean steps.

SmithForm smith_normal_form(const IntegerMatrix2& m) {
    std::int64_t a[2][2] = {{m.a(), m.b()}, {m.c(), m.d()}};
    std::int64_t u[2][2] = {{1, 0}, {0, 1}};
    std::int64_t v[2][2] = {{1, 0}, {0, 1}};

    auto swap_rows = [&] { std::swap(a[0], a[1]); std::swap(u[0], u[1]); };
    auto swap_cols = [&] {
        for (auto* mat : {a, v}) std::swap(mat[0][0], mat[0][1]), std::swap(mat[1][0], mat[1][1]);
    };
    // row_i -= k * row_j
    auto row_sub = [&](int i, int j, std::int64_t k) {
        for (int t = 0; t < 2; ++t) { a[i][t] -= k * a[j][t]; u[i][t] -= k * u[j][t]; }
    };
    auto col_sub = [&](int i, int j, std::int64_t k) {
        for (int t = 0; t < 2; ++t) { a[t][i] -= k * a[t][j]; v[t][i] -= k * v[t][j]; }
    };

    for (;;) {
        // Move the smallest nonzero entry to the pivot.
        int bi = -1, bj = -1;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (a[i][j] != 0 && (bi < 0 || std::llabs(a[i][j]) < std::llabs(a[bi][bj]))) bi = i, bj = j;
        if (bi < 0) break;  // zero matrix
        if (bi != 0) swap_rows();
        if (bj != 0) swap_cols();

        bool clean = true;
        if (a[1][0] != 0) { row_sub(1, 0, a[1][0] / a[0][0]); clean = false; }
        if (a[0][1] != 0) { col_sub(1, 0, a[0][1] / a[0][0]); clean = false; }
        if (!clean) continue;
        if (a[1][1] % a[0][0] != 0) {
            // Fold row 1 into row 0 so the pivot must shrink on the next pass.
            row_sub(0, 1, -1);
            continue;
        }
        break;
    }
    for (int i = 0; i < 2; ++i) {
        if (a[i][i] < 0) {
            for (int t = 0; t < 2; ++t) { a[i][t] = -a[i][t]; u[i][t] = -u[i][t]; }
        }
    }
    // Zero pivot can only be last when the matrix is singular with rank 1.
    if (a[0][0] == 0 && a[1][1] != 0) {
        swap_rows();
        swap_cols();
    }
    return {IntegerMatrix2(u[0][0], u[0][1], u[1][0], u[1][1]), IntegerMatrix2(v[0][0], v[0][1], v[1][0], v[1][1]),
            a[0][0], a[1][1]};
}

// ---------------------------------------------------------------------------

std::int64_t FiniteAbelianGroup::order() const {
    return std::accumulate(invariant_factors.begin(), invariant_factors.end(), std::int64_t{1},
                           std::multiplies<>());
}

namespace {

Rational frac(const Rational& r) { return r - Rational(r.floor()); }

TorsionPoint add(const TorsionPoint& p, const TorsionPoint& q) { return {frac(p.x + q.x), frac(p.y + q.y)}; }

}  // namespace

std::vector<TorsionPoint> FiniteAbelianGroup::elements() const {
    std::vector<TorsionPoint> out{{Rational(0), Rational(0)}};
    for (std::size_t g = 0; g < generators.size(); ++g) {
        std::vector<TorsionPoint> next;
        for (const auto& p : out) {
            TorsionPoint cur = p;
            for (std::int64_t k = 0; k < invariant_factors[g]; ++k) {
                next.push_back(cur);
                cur = add(cur, generators[g]);
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

FiniteAbelianGroup kernel_group(const IntegerMatrix2& m) {
    if (m.det() == 0) throw DegenerateError("kernel of a singular matrix is infinite");
    // m = U^-1 D V^-1, so m theta in Z^2  <=>  D V^-1 theta in Z^2  <=>  theta in V (Z/d1 x Z/d2).
    const SmithForm s = smith_normal_form(m);
    FiniteAbelianGroup k;
    const std::int64_t factors[2] = {s.d1, s.d2};
    const LatticeVector cols[2] = {{s.v.a(), s.v.c()}, {s.v.b(), s.v.d()}};
    for (int i = 0; i < 2; ++i) {
        if (factors[i] == 1) continue;
        const std::int64_t d = factors[i];
        // Pick the lexicographically smallest primitive multiple as the canonical generator.
        std::optional<TorsionPoint> best;
        for (std::int64_t mult = 1; mult < d; ++mult) {
            if (std::gcd(mult, d) != 1) continue;
            TorsionPoint p{frac(Rational(mult * cols[i].x, d)), frac(Rational(mult * cols[i].y, d))};
            if (!best || p < *best) best = p;
        }
        k.invariant_factors.push_back(d);
        k.generators.push_back(*best);
    }
    return k;
}

// ---------------------------------------------------------------------------

LatticePolygon::LatticePolygon(std::vector<LatticeVector> ccw_vertices) : vertices_(std::move(ccw_vertices)) {
    const std::size_t n = vertices_.size();
    if (n < 3) throw DegenerateError("polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
        const LatticeVector e1 = vertices_[(i + 1) % n] - vertices_[i];
        const LatticeVector e2 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
        if (cross(e1, e2) <= 0) throw DegenerateError("polygon vertices are not strictly convex counterclockwise");
    }
    auto it = std::min_element(vertices_.begin(), vertices_.end());
    std::rotate(vertices_.begin(), it, vertices_.end());
}

LatticePolygon LatticePolygon::translated(LatticeVector t) const {
    std::vector<LatticeVector> v = vertices_;
    for (auto& p : v) p += t;
    return LatticePolygon(std::move(v));
}

LatticePolygon LatticePolygon::normalized() const { return translated(-vertices_.front()); }

bool LatticePolygon::equal_up_to_translation(const LatticePolygon& other) const {
    return normalized() == other.normalized();
}

std::string LatticePolygon::str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const LatticePolygon& p) {
    os << "conv{";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p.vertices()[i];
    return os << '}';
}

LatticePolygon convex_hull(std::span<const LatticeVector> points) {
    std::vector<LatticeVector> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) throw DegenerateError("convex hull needs at least 3 distinct points");

    // Andrew's monotone chain; collinear points are dropped.
    std::vector<LatticeVector> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        const auto& p = pts[i];
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw DegenerateError("points are collinear");
    return LatticePolygon(std::move(hull));
}

PointLocation locate(const LatticePolygon& p, LatticeVector q) {
    const auto& v = p.vertices();
    bool on_edge = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::int64_t c = cross(v[(i + 1) % v.size()] - v[i], q - v[i]);
        if (c < 0) return PointLocation::Outside;
        if (c == 0) on_edge = true;
    }
    return on_edge ? PointLocation::Boundary : PointLocation::Interior;
}

bool contains_origin_interior(const LatticePolygon& p) { return locate(p, {0, 0}) == PointLocation::Interior; }

std::int64_t doubled_area(const LatticePolygon& p) {
    const auto& v = p.vertices();
    std::int64_t s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
    return s;
}

LatticePolygon apply_transform(const IntegerMatrix2& m, const LatticePolygon& p) {
    if (m.det() == 0) throw DegenerateError("cannot transform a polygon by a singular matrix");
    std::vector<LatticeVector> img;
    img.reserve(p.size());
    for (const auto& v : p.vertices()) img.push_back(m * v);
    if (m.det() < 0) std::reverse(img.begin(), img.end());
    return LatticePolygon(std::move(img));
}

LatticePoints lattice_points(const LatticePolygon& p) {
    std::int64_t x0 = p.vertices()[0].x, x1 = x0, y0 = p.vertices()[0].y, y1 = y0;
    for (const auto& v : p.vertices()) {
        x0 = std::min(x0, v.x); x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y); y1 = std::max(y1, v.y);
    }
    LatticePoints out;
    for (std::int64_t x = x0; x <= x1; ++x) {
        for (std::int64_t y = y0; y <= y1; ++y) {
            switch (locate(p, {x, y})) {
                case PointLocation::Interior: out.interior.push_back({x, y}); break;
                case PointLocation::Boundary: out.boundary.push_back({x, y}); break;
                case PointLocation::Outside: break;
            }
        }
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> adjacency_pairs(const LatticePolygon& p) {
    const std::size_t r = p.size();
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 2; j < r; ++j)
            if (!(i == 0 && j == r - 1)) out.emplace_back(i, j);
    return out;
}

}  // namespace dimers
