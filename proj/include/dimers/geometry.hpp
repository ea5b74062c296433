#pragma once

// Exact integer lattice primitives: vectors, 2x2 matrices, Smith normal form,
// convex lattice polygons and finite torsion subgroups of the 2-torus.

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dimers/rational.hpp"

namespace dimers {

/// Raised when a construction would produce a degenerate object
/// (collinear hull, singular matrix, ...).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LatticeVector {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend LatticeVector operator+(LatticeVector a, LatticeVector b) { return {a.x + b.x, a.y + b.y}; }
    friend LatticeVector operator-(LatticeVector a, LatticeVector b) { return {a.x - b.x, a.y - b.y}; }
    friend LatticeVector operator-(LatticeVector a) { return {-a.x, -a.y}; }
    friend LatticeVector operator*(std::int64_t k, LatticeVector a) { return {k * a.x, k * a.y}; }
    LatticeVector& operator+=(LatticeVector o) { x += o.x; y += o.y; return *this; }
    LatticeVector& operator-=(LatticeVector o) { x -= o.x; y -= o.y; return *this; }
    friend auto operator<=>(const LatticeVector&, const LatticeVector&) = default;
};

std::ostream& operator<<(std::ostream& os, LatticeVector v);

inline std::int64_t cross(LatticeVector a, LatticeVector b) { return a.x * b.y - a.y * b.x; }

/// Row-major 2x2 integer matrix [[a, b], [c, d]].
class IntegerMatrix2 {
public:
    constexpr IntegerMatrix2() : IntegerMatrix2(1, 0, 0, 1) {}
    constexpr IntegerMatrix2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
        : a_(a), b_(b), c_(c), d_(d), det_(a * d - b * c) {}

    static constexpr IntegerMatrix2 identity() { return {}; }

    std::int64_t a() const { return a_; }
    std::int64_t b() const { return b_; }
    std::int64_t c() const { return c_; }
    std::int64_t d() const { return d_; }
    std::int64_t det() const { return det_; }

    IntegerMatrix2 transpose() const { return {a_, c_, b_, d_}; }
    /// Adjugate; equals det * inverse.
    IntegerMatrix2 adjugate() const { return {d_, -b_, -c_, a_}; }

    LatticeVector operator*(LatticeVector v) const { return {a_ * v.x + b_ * v.y, c_ * v.x + d_ * v.y}; }
    IntegerMatrix2 operator*(const IntegerMatrix2& o) const {
        return {a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_};
    }
    friend bool operator==(const IntegerMatrix2&, const IntegerMatrix2&) = default;

    /// "a,b;c,d"
    static IntegerMatrix2 parse(const std::string& text);
    std::string str() const;

private:
    std::int64_t a_, b_, c_, d_, det_;
};

/// U * m * V = diag(d1, d2) with U, V unimodular, 0 <= d1, d1 | d2.
struct SmithForm {
    IntegerMatrix2 u;
    IntegerMatrix2 v;
    std::int64_t d1 = 0;
    std::int64_t d2 = 0;
};

SmithForm smith_normal_form(const IntegerMatrix2& m);

/// A point of R^2/Z^2 with rational coordinates in [0,1).
struct TorsionPoint {
    Rational x;
    Rational y;
    friend auto operator<=>(const TorsionPoint&, const TorsionPoint&) = default;
};

/// A finite subgroup of the torus (C^x)^2, recorded by arguments / 2pi.
struct FiniteAbelianGroup {
    std::vector<std::int64_t> invariant_factors;  ///< nontrivial factors only, d1 | d2
    std::vector<TorsionPoint> generators;         ///< one per invariant factor

    std::int64_t order() const;
    bool trivial() const { return invariant_factors.empty(); }
    /// Every element, enumerated as sums of generator multiples.
    std::vector<TorsionPoint> elements() const;
};

/// Kernel of m (x) C^x acting on the torus, i.e. {theta in R^2/Z^2 : m theta in Z^2}.
FiniteAbelianGroup kernel_group(const IntegerMatrix2& m);

/// Convex lattice polygon, vertices counterclockwise starting from the
/// lexicographically smallest one.
class LatticePolygon {
public:
    /// Validates strict convexity and canonicalizes the starting vertex.
    explicit LatticePolygon(std::vector<LatticeVector> ccw_vertices);

    const std::vector<LatticeVector>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }

    LatticePolygon translated(LatticeVector t) const;
    /// Translate so the lexicographically smallest vertex sits at the origin.
    LatticePolygon normalized() const;
    bool equal_up_to_translation(const LatticePolygon& other) const;

    friend bool operator==(const LatticePolygon&, const LatticePolygon&) = default;

    std::string str() const;

private:
    std::vector<LatticeVector> vertices_;
};

std::ostream& operator<<(std::ostream& os, const LatticePolygon& p);

LatticePolygon convex_hull(std::span<const LatticeVector> points);
bool contains_origin_interior(const LatticePolygon& p);
/// 2 x Euclidean area.
std::int64_t doubled_area(const LatticePolygon& p);
LatticePolygon apply_transform(const IntegerMatrix2& m, const LatticePolygon& p);

enum class PointLocation { Outside, Boundary, Interior };
PointLocation locate(const LatticePolygon& p, LatticeVector q);

struct LatticePoints {
    std::vector<LatticeVector> interior;
    std::vector<LatticeVector> boundary;
};
LatticePoints lattice_points(const LatticePolygon& p);

/// Pairs of non-adjacent vertex indices (0-based, i < j).
std::vector<std::pair<std::size_t, std::size_t>> adjacency_pairs(const LatticePolygon& p);

}  // namespace dimers
