#pragma once

// Laurent polynomials in two variables and the numerics around them:
// Newton polygons, critical points, edge nondegeneracy, coamoeba sampling
// and branch-point tracing for a coordinate projection.

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dimers/geometry.hpp"
#include "dimers/rational.hpp"

namespace dimers {

using Complex = std::complex<double>;

struct ExactComplex {
    Rational re, im;
    bool zero() const { return re == Rational(0) && im == Rational(0); }
    Complex value() const { return {re.to_double(), im.to_double()}; }
    friend bool operator==(const ExactComplex&, const ExactComplex&) = default;
};

class LaurentPolynomial {
public:
    LaurentPolynomial() = default;
    /// Duplicate exponents are summed; zero coefficients are dropped.
    explicit LaurentPolynomial(const std::vector<std::pair<LatticeVector, ExactComplex>>& terms);

    const std::map<LatticeVector, ExactComplex>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    Complex operator()(Complex x, Complex y) const;
    /// (x dW/dx, y dW/dy).
    std::pair<Complex, Complex> log_gradient(Complex x, Complex y) const;

    /// W o (phi (x) C^x): the monomial with exponent m becomes phi * m.
    LaurentPolynomial pullback(const IntegerMatrix2& phi) const;

    /// Inline syntax: integers, x, y, i, ^ (possibly negative), *, /, +, -.
    static LaurentPolynomial parse(const std::string& text);
    std::string str() const;

    friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

private:
    std::map<LatticeVector, ExactComplex> terms_;
    std::vector<std::pair<LatticeVector, Complex>> numeric_;
};

/// Throws DegenerateError when the exponents are collinear or fewer than 3.
LatticePolygon newton_polygon(const LaurentPolynomial& w);

struct CriticalPoint {
    Complex x, y;
    Complex value;
    double residual = 0;  ///< max(|x W_x|, |y W_y|)
};

struct CriticalPointOptions {
    double tol = 1e-10;
    std::size_t starts = 256;
    std::size_t max_iterations = 200;
};

struct CriticalPointResult {
    /// Sorted by argument of the value in [0, 2 pi), then modulus, then location.
    std::vector<CriticalPoint> points;
    std::size_t expected = 0;  ///< doubled area of the Newton polygon
    bool warning() const { return points.size() < expected; }
};

/// Requires the Newton polygon to contain the origin in its interior.
CriticalPointResult critical_points(const LaurentPolynomial& w, const CriticalPointOptions& opt = {});

struct EdgeCheck {
    LatticeVector from, to;  ///< consecutive vertices of the Newton polygon
    bool nondegenerate = true;
};

/// Exact: the edge polynomial has no repeated nonzero root.
std::vector<EdgeCheck> check_edge_nondegeneracy(const LaurentPolynomial& w);

struct VanishingPath {
    std::size_t index = 0;
    Complex value;  ///< endpoint; the path is t -> t * value
    Complex at(double t) const { return t * value; }
};

/// One path per critical point, in the order of critical_points.
std::vector<VanishingPath> vanishing_paths(const CriticalPointResult& r);

struct CoamoebaPoint {
    double a = 0, b = 0;  ///< arguments of x and y divided by 2 pi, in [0,1)
    friend auto operator<=>(const CoamoebaPoint&, const CoamoebaPoint&) = default;
};

struct CoamoebaSample {
    std::vector<CoamoebaPoint> points;
};

/// grid_n^2 values of x with |log|x|| <= 3 and arguments 2 pi k / grid_n;
/// keeps the roots y with |W(x,y)| < tol. Output is sorted.
CoamoebaSample sample_coamoeba(const LaurentPolynomial& w, std::size_t grid_n, double tol = 1e-10);

/// Fraction of points p with some q within `radius` (max-norm on the torus)
/// of p + shift.
double translation_invariance(const CoamoebaSample& s, CoamoebaPoint shift, double radius);

enum class Axis { X, Y };

struct BranchTrace {
    std::vector<double> t;
    /// trajectories[k][i]: branch point k at t[i].
    std::vector<std::vector<Complex>> trajectories;
    /// Pairs (k, l) whose final distance is below 1e-6.
    std::vector<std::pair<std::size_t, std::size_t>> collisions;
    double min_final_distance = 0;
    /// Steps where the nearest-neighbour match stayed ambiguous at the minimum step.
    std::size_t unresolved_steps = 0;
};

/// Discriminant in the base coordinate of the fiber polynomial of W - lambda
/// for the projection onto `axis`; coefficients ascending, factors of the base
/// coordinate removed. Throws DegenerateError if identically zero.
std::vector<Complex> discriminant(const LaurentPolynomial& w, Axis axis, Complex lambda);

/// Branch points of the projection over W = path(t), t from 0 to 1.
BranchTrace trace_branch_points(const LaurentPolynomial& w, Axis axis, const std::function<Complex(double)>& path,
                                std::size_t steps = 200);

/// Roots of sum c_k z^k by companion-matrix eigenvalues.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coefficients);

std::string coamoeba_svg(const CoamoebaSample& s);
std::string trajectories_svg(const BranchTrace& t);

}  // namespace dimers
