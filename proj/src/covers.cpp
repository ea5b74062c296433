#include "dimers/covers.hpp"

#include <algorithm>
#include <map>

namespace dimers {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

Rational frac(const Rational& r) { return r - Rational(r.floor()); }

struct Point {
    Rational x, y;
};

// frame^-1 * p, exactly.
Point to_cover(const IntegerMatrix2& frame, const Point& p) {
    const IntegerMatrix2 adj = frame.adjugate();
    const Rational det(frame.det());
    return {(Rational(adj.a()) * p.x + Rational(adj.b()) * p.y) / det,
            (Rational(adj.c()) * p.x + Rational(adj.d()) * p.y) / det};
}

Point shifted(const Node& n, LatticeVector t) { return {n.x + Rational(t.x), n.y + Rational(t.y)}; }

}  // namespace

CosetTable::CosetTable(const IntegerMatrix2& psi) {
    if (psi.det() == 0) throw DegenerateError("cover matrix " + psi.str() + " is singular");
    // psi Z^2 = U^-1 D Z^2, so x ~ y iff U(x - y) in D Z^2.
    s_ = smith_normal_form(psi);
    const IntegerMatrix2 u_inv = s_.u.adjugate() * IntegerMatrix2(s_.u.det(), 0, 0, s_.u.det());
    for (std::int64_t k1 = 0; k1 < s_.d1; ++k1)
        for (std::int64_t k2 = 0; k2 < s_.d2; ++k2) reps_.push_back(u_inv * LatticeVector{k1, k2});
}

std::size_t CosetTable::index_of(LatticeVector v) const {
    const LatticeVector w = s_.u * v;
    return static_cast<std::size_t>(mod(w.x, s_.d1) * s_.d2 + mod(w.y, s_.d2));
}

CoveredDimer pullback_dimer(const DimerModel& g, const IntegerMatrix2& psi) {
    if (!g.valid()) throw DimerError("pullback_dimer needs a valid dimer model");
    CosetTable cosets(psi);
    const IntegerMatrix2 frame = psi.det() > 0 ? psi : psi * IntegerMatrix2(1, 0, 0, -1);
    const std::size_t n = g.nodes().size(), m = g.edges().size(), k = cosets.size();
    const auto& reps = cosets.representatives();

    std::vector<Node> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> node_origin, edge_origin;
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            const Node& b = g.nodes()[i];
            const Point q = to_cover(frame, shifted(b, reps[c]));
            nodes.push_back({static_cast<int>(c * n + i), b.color, frac(q.x), frac(q.y)});
            node_origin.emplace_back(i, c);
        }
    }

    std::vector<Edge> edges;
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t e = 0; e < m; ++e) {
            const Edge& base = g.edges()[e];
            const std::size_t bi = g.black_of(e), wi = g.white_of(e);
            const LatticeVector wt = base.offset + reps[c];
            const std::size_t cw = cosets.index_of(wt);
            const Point qb = to_cover(frame, shifted(g.nodes()[bi], reps[c]));
            const Point qw = to_cover(frame, shifted(g.nodes()[wi], wt));
            const LatticeVector off{qw.x.floor() - qb.x.floor(), qw.y.floor() - qb.y.floor()};
            edges.push_back({static_cast<int>(c * m + e), static_cast<int>(c * n + bi), static_cast<int>(cw * n + wi), off});
            edge_origin.emplace_back(e, c);
        }
    }

    // The frame is positively oriented, so positions reproduce the lifted
    // rotation system; explicit base rotations are lifted verbatim.
    std::map<int, std::vector<int>> rotations;
    if (!g.explicit_rotations().empty()) {
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                auto& rot = rotations[static_cast<int>(c * n + i)];
                for (Dart d : g.rotation(i)) {
                    const std::size_t e = dart_edge(d);
                    // At a white node of coset c the edge lift starts at coset r_c - offset.
                    const std::size_t ce = dart_from_black(d) ? c : cosets.index_of(reps[c] - g.edges()[e].offset);
                    rot.push_back(static_cast<int>(ce * m + e));
                }
            }
        }
    }

    DimerModel total(std::move(nodes), std::move(edges), std::move(rotations));
    return CoveredDimer{g, psi, frame, std::move(total), std::move(cosets), kernel_group(psi.transpose()),
                        std::move(node_origin), std::move(edge_origin)};
}

std::vector<FaceLabel> label_faces(const CoveredDimer& c) {
    const auto& base_faces = c.base.faces();
    const auto& faces = c.total.faces();
    std::vector<FaceLabel> out(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Dart first = faces[f].front();
        const auto [e0, c0] = c.edge_origin[dart_edge(first)];
        const std::size_t bf = c.base.face_of(2 * e0 + (first & 1U));
        out[f].base_face = bf;
        const Dart anchor = base_faces[bf].front();
        for (Dart d : faces[f]) {
            const auto [e, ce] = c.edge_origin[dart_edge(d)];
            if (2 * e + (d & 1U) == anchor) {
                out[f].character = ce;
                break;
            }
        }
    }
    return out;
}

std::size_t deck_translate_face(const CoveredDimer& c, std::size_t f, std::size_t k) {
    const auto labels = label_faces(c);
    const auto& reps = c.cosets.representatives();
    const FaceLabel want{labels.at(f).base_face, c.cosets.index_of(reps.at(labels[f].character) + reps.at(k))};
    const auto it = std::find(labels.begin(), labels.end(), want);
    if (it == labels.end()) throw DimerError("face labels of the cover are not a torsor");
    return static_cast<std::size_t>(it - labels.begin());
}

EdgeSet pullback_matching(const CoveredDimer& c, const EdgeSet& d) {
    const std::size_t m = c.base.edges().size();
    EdgeSet out;
    for (std::size_t k = 0; k < c.cosets.size(); ++k)
        for (std::size_t e : d) out.push_back(k * m + e);
    std::sort(out.begin(), out.end());
    return out;
}

CoverPolygonCheck cover_char_polygon_check(const CoveredDimer& c, const EdgeSet& d) {
    LatticePolygon cover = characteristic_polygon(c.total, pullback_matching(c, d));
    LatticePolygon expected = apply_transform(c.frame.transpose(), characteristic_polygon(c.base, d));
    const bool eq = cover.equal_up_to_translation(expected);
    return {std::move(cover), std::move(expected), eq};
}

}  // namespace dimers
