#include "dimers/laurent.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dimers/io.hpp"

namespace dimers {

namespace {

ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) { return {a.re + b.re, a.im + b.im}; }
ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) { return {a.re - b.re, a.im - b.im}; }
ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
    const Rational n = b.re * b.re + b.im * b.im;
    if (n == Rational(0)) throw std::domain_error("division by zero");
    const ExactComplex conj{b.re, -b.im};
    const ExactComplex p = a * conj;
    return {p.re / n, p.im / n};
}

using TermMap = std::map<LatticeVector, ExactComplex>;

void accumulate(TermMap& m, LatticeVector e, const ExactComplex& c) {
    auto [it, fresh] = m.try_emplace(e, c);
    if (!fresh) it->second = it->second + c;
    if (it->second.zero()) m.erase(it);
}

TermMap multiply(const TermMap& a, const TermMap& b) {
    TermMap out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) accumulate(out, ea + eb, ca * cb);
    return out;
}

// ---------------------------------------------------------------------------
// Expression parser.

class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    TermMap parse() {
        TermMap v = expr();
        skip();
        if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        const auto [line, col] = line_column(s_, pos_);
        throw ParseError(what, line, col);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool starts_factor() {
        skip();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == 'x' || c == 'y' || c == 'i' || c == '(';
    }

    TermMap expr() {
        TermMap acc;
        bool negative = false;
        if (eat('-')) negative = true;
        else eat('+');
        for (;;) {
            TermMap t = term();
            for (const auto& [e, c] : t) accumulate(acc, e, negative ? ExactComplex{-c.re, -c.im} : c);
            if (eat('+')) negative = false;
            else if (eat('-')) negative = true;
            else return acc;
        }
    }

    TermMap term() {
        TermMap acc = power();
        for (;;) {
            if (eat('*')) {
                acc = multiply(acc, power());
            } else if (eat('/')) {
                const std::size_t at = pos_;
                TermMap d = power();
                if (d.size() != 1) {
                    pos_ = at;
                    fail("can only divide by a single term");
                }
                const auto& [e, c] = *d.begin();
                TermMap inv{{-e, ExactComplex{Rational(1), Rational(0)} / c}};
                acc = multiply(acc, inv);
            } else if (starts_factor()) {
                acc = multiply(acc, power());  // juxtaposition, as in 2x
            } else {
                return acc;
            }
        }
    }

    TermMap power() {
        TermMap base = primary();
        if (!eat('^')) return base;
        skip();
        const std::size_t at = pos_;
        bool negative = false;
        if (eat('-')) negative = true;
        else eat('+');
        skip();
        const std::int64_t k = integer();
        if (negative && base.size() != 1) {
            pos_ = at;
            fail("negative powers need a single term");
        }
        if (base.size() == 1) {
            const auto& [e, c] = *base.begin();
            ExactComplex ck{Rational(1), Rational(0)};
            for (std::int64_t j = 0; j < k; ++j) ck = ck * c;
            if (negative) ck = ExactComplex{Rational(1), Rational(0)} / ck;
            const std::int64_t s = negative ? -k : k;
            return {{s * e, ck}};
        }
        TermMap out{{{0, 0}, {Rational(1), Rational(0)}}};
        for (std::int64_t j = 0; j < k; ++j) out = multiply(out, base);
        return out;
    }

    std::int64_t integer() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        try {
            return std::stoll(s_.substr(start, pos_ - start));
        } catch (const std::out_of_range&) {
            pos_ = start;
            fail("integer out of range");
        }
    }

    TermMap primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        const ExactComplex one{Rational(1), Rational(0)};
        if (std::isdigit(static_cast<unsigned char>(c))) return {{{0, 0}, {Rational(integer()), Rational(0)}}};
        if (c == 'x') return ++pos_, TermMap{{{1, 0}, one}};
        if (c == 'y') return ++pos_, TermMap{{{0, 1}, one}};
        if (c == 'i') return ++pos_, TermMap{{{0, 0}, {Rational(0), Rational(1)}}};
        if (c == '(') {
            ++pos_;
            TermMap v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

std::string monomial(LatticeVector e) {
    std::string out;
    auto var = [&](char v, std::int64_t k) {
        if (k == 0) return;
        if (!out.empty()) out += '*';
        out += v;
        if (k != 1) out += '^' + std::to_string(k);
    };
    var('x', e.x);
    var('y', e.y);
    return out;
}

}  // namespace

LaurentPolynomial::LaurentPolynomial(const std::vector<std::pair<LatticeVector, ExactComplex>>& terms) {
    for (const auto& [e, c] : terms) accumulate(terms_, e, c);
    for (const auto& [e, c] : terms_) numeric_.emplace_back(e, c.value());
}

LaurentPolynomial LaurentPolynomial::parse(const std::string& text) {
    const TermMap m = ExprParser(text).parse();
    return LaurentPolynomial(std::vector<std::pair<LatticeVector, ExactComplex>>(m.begin(), m.end()));
}

Complex LaurentPolynomial::operator()(Complex x, Complex y) const {
    Complex s = 0;
    for (const auto& [e, c] : numeric_)
        s += c * std::pow(x, static_cast<int>(e.x)) * std::pow(y, static_cast<int>(e.y));
    return s;
}

std::pair<Complex, Complex> LaurentPolynomial::log_gradient(Complex x, Complex y) const {
    Complex gx = 0, gy = 0;
    for (const auto& [e, c] : numeric_) {
        const Complex t = c * std::pow(x, static_cast<int>(e.x)) * std::pow(y, static_cast<int>(e.y));
        gx += static_cast<double>(e.x) * t;
        gy += static_cast<double>(e.y) * t;
    }
    return {gx, gy};
}

LaurentPolynomial LaurentPolynomial::pullback(const IntegerMatrix2& phi) const {
    std::vector<std::pair<LatticeVector, ExactComplex>> t;
    for (const auto& [e, c] : terms_) t.emplace_back(phi * e, c);
    return LaurentPolynomial(t);
}

std::string LaurentPolynomial::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    // Highest exponents first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        const std::string mono = monomial(e);
        std::string coef;
        bool negative = false;
        if (c.im == Rational(0)) {
            negative = c.re < Rational(0);
            const Rational r = negative ? -c.re : c.re;
            if (r != Rational(1) || mono.empty()) coef = r.str();
        } else if (c.re == Rational(0)) {
            negative = c.im < Rational(0);
            const Rational r = negative ? -c.im : c.im;
            coef = r == Rational(1) ? "i" : r.str() + "*i";
        } else {
            coef = "(" + c.re.str() + (c.im < Rational(0) ? " - " : " + ") +
                   (c.im < Rational(0) ? -c.im : c.im).str() + "*i)";
        }
        if (out.empty()) out += negative ? "-" : "";
        else out += negative ? " - " : " + ";
        out += coef;
        if (!coef.empty() && !mono.empty()) out += '*';
        out += mono;
    }
    return out;
}

LatticePolygon newton_polygon(const LaurentPolynomial& w) {
    std::vector<LatticeVector> pts;
    for (const auto& [e, c] : w.terms()) pts.push_back(e);
    return convex_hull(pts);
}

// ---------------------------------------------------------------------------
// Edge nondegeneracy, exactly over Q(i).

namespace {

using ExactPoly = std::vector<ExactComplex>;  // ascending coefficients

void trim(ExactPoly& p) {
    while (!p.empty() && p.back().zero()) p.pop_back();
}

ExactPoly remainder(ExactPoly a, const ExactPoly& b) {
    trim(a);
    while (a.size() >= b.size()) {
        const ExactComplex q = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = a[shift + i] - q * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

std::size_t gcd_degree(ExactPoly a, ExactPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        ExactPoly r = remainder(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.empty() ? 0 : a.size() - 1;
}

}  // namespace

std::vector<EdgeCheck> check_edge_nondegeneracy(const LaurentPolynomial& w) {
    const LatticePolygon p = newton_polygon(w);
    const auto& v = p.vertices();
    std::vector<EdgeCheck> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const LatticeVector a = v[i], b = v[(i + 1) % v.size()];
        const LatticeVector d = b - a;
        const auto g = std::gcd(d.x, d.y);
        const LatticeVector step{d.x / g, d.y / g};
        ExactPoly f;
        for (std::int64_t k = 0; k <= g; ++k) {
            auto it = w.terms().find(a + k * step);
            f.push_back(it == w.terms().end() ? ExactComplex{} : it->second);
        }
        ExactPoly df;
        for (std::size_t k = 1; k < f.size(); ++k) df.push_back(ExactComplex{Rational(static_cast<std::int64_t>(k)), Rational(0)} * f[k]);
        // f(0) != 0 at a vertex, so every common root of f and f' is nonzero.
        out.push_back({a, b, gcd_degree(f, df) == 0});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Roots and critical points.

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coefficients) {
    std::vector<Complex> c = coefficients;
    while (!c.empty() && c.back() == Complex(0)) c.pop_back();
    if (c.size() <= 1) return {};
    const std::size_t n = c.size() - 1;
    if (n == 1) return {-c[0] / c[1]};
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 1; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    std::vector<Complex> roots;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) roots.push_back(solver.eigenvalues()[i]);
    return roots;
}

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

// Argument in [0, 2 pi), with values within 1e-12 of 2 pi folded to 0.
double argument(Complex z) {
    double a = std::arg(z);
    if (a < 0) a += two_pi;
    if (a > two_pi - 1e-12) a = 0;
    return a;
}

double halton(std::size_t i, std::size_t base) {
    double f = 1, r = 0;
    for (std::size_t k = i; k > 0; k /= base) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(k % base);
    }
    return r;
}

struct LogSystem {
    const LaurentPolynomial& w;
    std::vector<std::pair<LatticeVector, Complex>> terms;

    explicit LogSystem(const LaurentPolynomial& p) : w(p) {
        for (const auto& [e, c] : p.terms()) terms.emplace_back(e, c.value());
    }

    // F = (x W_x, y W_y) and its Jacobian in (log x, log y).
    void eval(Complex u, Complex v, Complex f[2], Complex j[2][2]) const {
        f[0] = f[1] = 0;
        j[0][0] = j[0][1] = j[1][0] = j[1][1] = 0;
        for (const auto& [e, c] : terms) {
            const auto i = static_cast<double>(e.x), k = static_cast<double>(e.y);
            const Complex t = c * std::exp(i * u + k * v);
            f[0] += i * t;
            f[1] += k * t;
            j[0][0] += i * i * t;
            j[0][1] += i * k * t;
            j[1][0] += i * k * t;
            j[1][1] += k * k * t;
        }
    }

    double residual(Complex u, Complex v) const {
        Complex f[2], j[2][2];
        eval(u, v, f, j);
        return std::max(std::abs(f[0]), std::abs(f[1]));
    }
};

// Deflation factor 1 / prod_k l(p - p_k) with p = (x, y), and its log-gradient.
struct Deflation {
    Complex lx{0.7236, 0.3149}, ly{-0.4412, 0.8817};
    std::vector<std::pair<Complex, Complex>> known;

    Complex factor(Complex x, Complex y, Complex grad[2]) const {
        Complex s = 1;
        grad[0] = grad[1] = 0;
        for (const auto& [px, py] : known) {
            const Complex l = lx * (x - px) + ly * (y - py);
            s /= l;
            grad[0] -= lx * x / l;
            grad[1] -= ly * y / l;
        }
        grad[0] *= s;
        grad[1] *= s;
        return s;
    }
};

// Damped Newton; returns the final iterate if it converged.
std::optional<std::pair<Complex, Complex>> newton(const LogSystem& sys, const Deflation* defl, Complex u, Complex v,
                                                  std::size_t budget, double tol) {
    auto system = [&](Complex uu, Complex vv, Complex f[2], Complex j[2][2]) {
        sys.eval(uu, vv, f, j);
        if (!defl || defl->known.empty()) return;
        Complex g[2];
        const Complex s = defl->factor(std::exp(uu), std::exp(vv), g);
        for (int r = 0; r < 2; ++r) {
            j[r][0] = s * j[r][0] + f[r] * g[0];
            j[r][1] = s * j[r][1] + f[r] * g[1];
            f[r] *= s;
        }
    };
    auto norm = [](const Complex f[2]) { return std::max(std::abs(f[0]), std::abs(f[1])); };

    Complex f[2], j[2][2];
    system(u, v, f, j);
    for (std::size_t it = 0; it < budget; ++it) {
        if (!std::isfinite(std::abs(f[0])) || !std::isfinite(std::abs(f[1]))) return std::nullopt;
        const Complex det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if (std::abs(det) == 0) return std::nullopt;
        const Complex du = -(j[1][1] * f[0] - j[0][1] * f[1]) / det;
        const Complex dv = -(j[0][0] * f[1] - j[1][0] * f[0]) / det;
        const double before = norm(f);
        double lambda = 1;
        Complex nf[2], nj[2][2];
        for (int halving = 0;; ++halving) {
            system(u + lambda * du, v + lambda * dv, nf, nj);
            if (norm(nf) < before || halving == 30) break;
            lambda /= 2;
        }
        u += lambda * du;
        v += lambda * dv;
        std::copy(nf, nf + 2, f);
        for (int r = 0; r < 2; ++r) std::copy(nj[r], nj[r] + 2, j[r]);
        if (std::abs(u.real()) > 60 || std::abs(v.real()) > 60) return std::nullopt;
        const double step = std::max(std::abs(lambda * du), std::abs(lambda * dv));
        if (sys.residual(u, v) < tol && step < 1e-14) return std::pair{u, v};
    }
    if (sys.residual(u, v) < tol) return std::pair{u, v};
    return std::nullopt;
}

// Quantized sort key: value argument, modulus, then location.
std::array<long long, 6> sort_key(const CriticalPoint& p) {
    auto q = [](double d) { return std::llround(d * 1e7); };
    return {q(argument(p.value)), q(std::abs(p.value)), q(p.x.real()), q(p.x.imag()), q(p.y.real()), q(p.y.imag())};
}

}  // namespace

CriticalPointResult critical_points(const LaurentPolynomial& w, const CriticalPointOptions& opt) {
    const LatticePolygon delta = newton_polygon(w);
    if (locate(delta, {0, 0}) != PointLocation::Interior)
        throw DegenerateError("Newton polygon must contain the origin in its interior");
    CriticalPointResult out;
    out.expected = static_cast<std::size_t>(doubled_area(delta));

    const LogSystem sys(w);
    Deflation defl;
    auto add = [&](Complex u, Complex v) {
        // Polish on the undeflated system.
        auto r = newton(sys, nullptr, u, v, 8, opt.tol);
        if (!r) return;
        const Complex x = std::exp(r->first), y = std::exp(r->second);
        for (const auto& [px, py] : defl.known)
            if (std::abs(x - px) < 10 * opt.tol && std::abs(y - py) < 10 * opt.tol) return;
        defl.known.emplace_back(x, y);
        out.points.push_back({x, y, w(x, y), sys.residual(r->first, r->second)});
    };

    auto start = [&](std::size_t i) {
        const double a = -2 + 4 * halton(i + 1, 2), b = -2 + 4 * halton(i + 1, 3);
        const double s = two_pi * halton(i + 1, 5), t = two_pi * halton(i + 1, 7);
        return std::pair{Complex(a, s), Complex(b, t)};
    };

    for (std::size_t i = 0; i < opt.starts && out.points.size() < out.expected; ++i) {
        const auto [u, v] = start(i);
        if (auto r = newton(sys, nullptr, u, v, opt.max_iterations, opt.tol)) add(r->first, r->second);
    }
    // Deflation restarts steer away from the points already found.
    for (std::size_t i = 0; i < opt.starts && out.points.size() < out.expected; ++i) {
        const auto [u, v] = start(opt.starts + i);
        if (auto r = newton(sys, &defl, u, v, opt.max_iterations, opt.tol)) add(r->first, r->second);
    }

    std::sort(out.points.begin(), out.points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return sort_key(a) < sort_key(b); });
    return out;
}

std::vector<VanishingPath> vanishing_paths(const CriticalPointResult& r) {
    std::vector<VanishingPath> out;
    for (std::size_t i = 0; i < r.points.size(); ++i) out.push_back({i, r.points[i].value});
    return out;
}

// ---------------------------------------------------------------------------
// Coamoeba.

namespace {

// Coefficients of W(x, y) - lambda as a polynomial in the fiber variable, each
// a polynomial in the base variable; both cleared of negative powers.
struct FiberPolynomial {
    std::int64_t base_shift = 0, fiber_shift = 0;
    std::vector<std::vector<Complex>> coef;  ///< coef[fiber power][base power]

    FiberPolynomial(const LaurentPolynomial& w, Axis axis, Complex lambda) {
        std::vector<std::pair<LatticeVector, Complex>> t;
        for (const auto& [e, c] : w.terms()) t.emplace_back(axis == Axis::X ? e : LatticeVector{e.y, e.x}, c.value());
        t.emplace_back(LatticeVector{0, 0}, -lambda);
        std::int64_t bmin = 0, bmax = 0, fmin = 0, fmax = 0;
        for (const auto& [e, c] : t) {
            bmin = std::min(bmin, e.x), bmax = std::max(bmax, e.x);
            fmin = std::min(fmin, e.y), fmax = std::max(fmax, e.y);
        }
        base_shift = -bmin;
        fiber_shift = -fmin;
        coef.assign(static_cast<std::size_t>(fmax - fmin + 1), std::vector<Complex>(static_cast<std::size_t>(bmax - bmin + 1)));
        for (const auto& [e, c] : t)
            coef[static_cast<std::size_t>(e.y - fmin)][static_cast<std::size_t>(e.x - bmin)] += c;
    }

    std::size_t fiber_degree() const { return coef.size() - 1; }
    std::size_t base_degree() const { return coef.front().size() - 1; }

    std::vector<Complex> at(Complex base) const {
        std::vector<Complex> out;
        for (const auto& row : coef) {
            Complex s = 0;
            for (std::size_t k = row.size(); k-- > 0;) s = s * base + row[k];
            out.push_back(s);
        }
        return out;
    }
};

double fold(double turns) {
    turns -= std::floor(turns);
    return turns >= 1 ? 0 : turns;
}

}  // namespace

CoamoebaSample sample_coamoeba(const LaurentPolynomial& w, std::size_t grid_n, double tol) {
    CoamoebaSample out;
    if (grid_n == 0) return out;
    const FiberPolynomial fp(w, Axis::X, 0);
    for (std::size_t i = 0; i < grid_n; ++i) {
        const double rho = grid_n == 1 ? 0.0 : -3 + 6 * static_cast<double>(i) / static_cast<double>(grid_n - 1);
        for (std::size_t j = 0; j < grid_n; ++j) {
            const double theta = two_pi * static_cast<double>(j) / static_cast<double>(grid_n);
            const Complex x = std::polar(std::exp(rho), theta);
            for (Complex y : polynomial_roots(fp.at(x))) {
                if (y == Complex(0) || !std::isfinite(std::abs(y))) continue;
                // One Newton polish in y.
                Complex wy = 0;
                for (const auto& [e, c] : w.terms())
                    if (e.y != 0)
                        wy += static_cast<double>(e.y) * c.value() * std::pow(x, static_cast<int>(e.x)) *
                              std::pow(y, static_cast<int>(e.y - 1));
                if (wy != Complex(0)) y -= w(x, y) / wy;
                if (y == Complex(0) || std::abs(w(x, y)) >= tol) continue;
                out.points.push_back({fold(theta / two_pi), fold(argument(y) / two_pi)});
            }
        }
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
}

double translation_invariance(const CoamoebaSample& s, CoamoebaPoint shift, double radius) {
    if (s.points.empty()) return 1;
    const auto m = static_cast<long long>(std::max(1.0, std::floor(1 / radius)));
    auto cell = [&](double v) { return std::min(m - 1, static_cast<long long>(v * static_cast<double>(m))); };
    std::map<std::pair<long long, long long>, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < s.points.size(); ++i) buckets[{cell(s.points[i].a), cell(s.points[i].b)}].push_back(i);
    auto torus = [](double d) {
        d = std::abs(d);
        return std::min(d, 1 - d);
    };
    std::size_t hit = 0;
    for (const auto& p : s.points) {
        const CoamoebaPoint q{fold(p.a + shift.a), fold(p.b + shift.b)};
        const long long ca = cell(q.a), cb = cell(q.b);
        bool found = false;
        for (long long da = -1; da <= 1 && !found; ++da) {
            for (long long db = -1; db <= 1 && !found; ++db) {
                auto it = buckets.find({((ca + da) % m + m) % m, ((cb + db) % m + m) % m});
                if (it == buckets.end()) continue;
                for (std::size_t k : it->second) {
                    if (torus(s.points[k].a - q.a) <= radius && torus(s.points[k].b - q.b) <= radius) {
                        found = true;
                        break;
                    }
                }
            }
        }
        hit += found;
    }
    return static_cast<double>(hit) / static_cast<double>(s.points.size());
}

// ---------------------------------------------------------------------------
// Discriminants and branch points.

namespace {

// Resultant of p and p' from the Sylvester matrix.
Complex resultant_with_derivative(const std::vector<Complex>& p) {
    const std::size_t n = p.size() - 1;
    std::vector<Complex> dp;
    for (std::size_t k = 1; k <= n; ++k) dp.push_back(static_cast<double>(k) * p[k]);
    const auto size = static_cast<Eigen::Index>(2 * n - 1);
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(size, size);
    // Rows 0..n-2 hold shifts of p, rows n-1..2n-2 shifts of p', highest degree first.
    for (std::size_t r = 0; r + 1 < n; ++r)
        for (std::size_t k = 0; k <= n; ++k) s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r + n - k)) = p[k];
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k)
            s(static_cast<Eigen::Index>(n - 1 + r), static_cast<Eigen::Index>(r + n - 1 - k)) = dp[k];
    return s.determinant();
}

}  // namespace

std::vector<Complex> discriminant(const LaurentPolynomial& w, Axis axis, Complex lambda) {
    const FiberPolynomial fp(w, axis, lambda);
    const std::size_t n = fp.fiber_degree();
    if (n < 2) throw DegenerateError("fiber has fewer than two points; no branch points");
    // Res(p, p') is a polynomial in the base variable of degree <= (2n - 1) * base degree;
    // recover it from its values at roots of unity.
    const std::size_t count = (2 * n - 1) * fp.base_degree() + 1;
    std::vector<Complex> values(count);
    for (std::size_t m = 0; m < count; ++m) {
        const Complex z = std::polar(1.0, two_pi * static_cast<double>(m) / static_cast<double>(count));
        values[m] = resultant_with_derivative(fp.at(z));
    }
    std::vector<Complex> res(count);
    for (std::size_t k = 0; k < count; ++k) {
        Complex s = 0;
        for (std::size_t m = 0; m < count; ++m)
            s += values[m] * std::polar(1.0, -two_pi * static_cast<double>(m * k % count) / static_cast<double>(count));
        res[k] = s / static_cast<double>(count);
    }
    double scale = 0;
    for (Complex c : res) scale = std::max(scale, std::abs(c));
    if (scale == 0) throw DegenerateError("discriminant vanishes identically");
    for (Complex& c : res)
        if (std::abs(c) < 1e-10 * scale) c = 0;

    // Disc = (-1)^(n(n-1)/2) Res / a_n, by exact division by the leading coefficient.
    std::vector<Complex> lead = fp.coef.back();
    while (!lead.empty() && std::abs(lead.back()) == 0) lead.pop_back();
    while (!res.empty() && res.back() == Complex(0)) res.pop_back();
    if (res.size() < lead.size()) throw DegenerateError("discriminant vanishes identically");
    std::vector<Complex> q(res.size() - lead.size() + 1);
    for (std::size_t k = q.size(); k-- > 0;) {
        q[k] = res[k + lead.size() - 1] / lead.back();
        for (std::size_t j = 0; j < lead.size(); ++j) res[k + j] -= q[k] * lead[j];
    }
    const double sign = (n * (n - 1) / 2) % 2 ? -1.0 : 1.0;
    for (Complex& c : q) c *= sign;
    scale = 0;
    for (Complex c : q) scale = std::max(scale, std::abs(c));
    for (Complex& c : q)
        if (std::abs(c) < 1e-10 * scale) c = 0;
    // Powers of the base variable are not branch points on the torus.
    std::size_t low = 0;
    while (low < q.size() && q[low] == Complex(0)) ++low;
    q.erase(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(low));
    while (!q.empty() && q.back() == Complex(0)) q.pop_back();
    if (q.empty()) throw DegenerateError("discriminant vanishes identically");
    return q;
}

namespace {

constexpr double collision_distance = 1e-6;

// Nearest-neighbour assignment prev[k] -> cur[match[k]]; nullopt when some
// root has two distinct candidates within a factor of 2 of each other.
std::optional<std::vector<std::size_t>> match_roots(const std::vector<Complex>& prev, const std::vector<Complex>& cur,
                                                    bool force) {
    const std::size_t n = prev.size();
    if (!force) {
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t best = 0;
            for (std::size_t j = 1; j < n; ++j)
                if (std::abs(cur[j] - prev[k]) < std::abs(cur[best] - prev[k])) best = j;
            const double d1 = std::abs(cur[best] - prev[k]);
            for (std::size_t j = 0; j < n; ++j) {
                if (std::abs(cur[j] - cur[best]) < collision_distance) continue;
                if (std::abs(cur[j] - prev[k]) < 2 * d1) return std::nullopt;
            }
        }
    }
    // Greedy global assignment by increasing distance.
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) pairs.emplace_back(std::abs(cur[j] - prev[k]), k, j);
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::size_t> match(n, n);
    std::vector<bool> taken(n, false);
    for (const auto& [d, k, j] : pairs) {
        if (match[k] != n || taken[j]) continue;
        match[k] = j;
        taken[j] = true;
    }
    return match;
}

}  // namespace

BranchTrace trace_branch_points(const LaurentPolynomial& w, Axis axis, const std::function<Complex(double)>& path,
                                std::size_t steps) {
    if (steps == 0) throw std::invalid_argument("trace needs at least one step");
    auto roots_at = [&](double t) { return polynomial_roots(discriminant(w, axis, path(t))); };

    BranchTrace out;
    std::vector<Complex> cur = roots_at(0);
    std::sort(cur.begin(), cur.end(), [](Complex a, Complex b) {
        return std::pair{a.real(), a.imag()} < std::pair{b.real(), b.imag()};
    });
    out.t.push_back(0);
    out.trajectories.assign(cur.size(), {});
    for (std::size_t k = 0; k < cur.size(); ++k) out.trajectories[k].push_back(cur[k]);

    const double h = 1.0 / static_cast<double>(steps), min_h = h / 1048576;
    double t = 0, dt = h;
    while (t < 1) {
        double next = t + dt;
        if (next > 1 - min_h / 2) next = 1;
        std::vector<Complex> cand = roots_at(next);
        if (cand.size() != cur.size())
            throw DegenerateError("number of branch points changes along the path (a branch point escapes to 0 or infinity)");
        const bool force = dt <= min_h;
        auto match = match_roots(cur, cand, force);
        if (!match) {
            dt /= 2;
            continue;
        }
        if (force) ++out.unresolved_steps;
        for (std::size_t k = 0; k < cur.size(); ++k) {
            cur[k] = cand[(*match)[k]];
            out.trajectories[k].push_back(cur[k]);
        }
        out.t.push_back(next);
        t = next;
        dt = std::min(h, 2 * dt);
    }

    out.min_final_distance = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cur.size(); ++k) {
        for (std::size_t l = k + 1; l < cur.size(); ++l) {
            const double d = std::abs(cur[k] - cur[l]);
            out.min_final_distance = std::min(out.min_final_distance, d);
            if (d < collision_distance) out.collisions.emplace_back(k, l);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// SVG.

namespace {

const char* const palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"};

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string coamoeba_svg(const CoamoebaSample& s) {
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"-20 -20 640 640\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"600\" height=\"600\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    o << "<g fill=\"" << palette[0] << "\">\n";
    for (const auto& p : s.points)
        o << "<circle cx=\"" << fixed(600 * p.a) << "\" cy=\"" << fixed(600 * (1 - p.b)) << "\" r=\"0.8\"/>\n";
    o << "</g>\n</svg>\n";
    return o.str();
}

std::string trajectories_svg(const BranchTrace& t) {
    double lo_x = -1, hi_x = 1, lo_y = -1, hi_y = 1;
    for (const auto& tr : t.trajectories) {
        for (Complex z : tr) {
            lo_x = std::min(lo_x, z.real()), hi_x = std::max(hi_x, z.real());
            lo_y = std::min(lo_y, z.imag()), hi_y = std::max(hi_y, z.imag());
        }
    }
    const double span = std::max(hi_x - lo_x, hi_y - lo_y) * 1.1;
    const double cx = (lo_x + hi_x) / 2, cy = (lo_y + hi_y) / 2;
    auto px = [&](Complex z) { return fixed(300 + 600 * (z.real() - cx) / span); };
    auto py = [&](Complex z) { return fixed(300 - 600 * (z.imag() - cy) / span); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">\n";
    o << "<line x1=\"0\" y1=\"" << py(Complex(0)) << "\" x2=\"600\" y2=\"" << py(Complex(0))
      << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
    o << "<line x1=\"" << px(Complex(0)) << "\" y1=\"0\" x2=\"" << px(Complex(0))
      << "\" y2=\"600\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
    for (std::size_t k = 0; k < t.trajectories.size(); ++k) {
        const char* colour = palette[k % std::size(palette)];
        o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < t.trajectories[k].size(); ++i)
            o << (i ? " " : "") << px(t.trajectories[k][i]) << "," << py(t.trajectories[k][i]);
        o << "\"/>\n";
        if (!t.trajectories[k].empty()) {
            const Complex end = t.trajectories[k].back();
            o << "<circle cx=\"" << px(end) << "\" cy=\"" << py(end) << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
        }
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace dimers
