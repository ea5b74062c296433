#include "dimers/dimer.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace dimers {

const char* to_string(Color c) { return c == Color::Black ? "black" : "white"; }

const char* to_string(Diagnostic::Kind k) {
    switch (k) {
        case Diagnostic::Kind::NotBipartite: return "not-bipartite";
        case Diagnostic::Kind::Disconnected: return "disconnected";
        case Diagnostic::Kind::EulerCharacteristic: return "euler-characteristic";
        case Diagnostic::Kind::FaceNotDisk: return "face-not-disk";
        case Diagnostic::Kind::DuplicateDirection: return "duplicate-direction";
        case Diagnostic::Kind::BadRotation: return "bad-rotation";
        case Diagnostic::Kind::IsolatedNode: return "isolated-node";
        case Diagnostic::Kind::CyclesMissTorus: return "cycles-miss-torus";
    }
    return "?";
}

namespace {

struct RationalVector {
    Rational x, y;
};

// Counterclockwise angular order starting from the positive x-axis.
bool angle_less(const RationalVector& a, const RationalVector& b) {
    auto half = [](const RationalVector& v) {
        return (v.y > Rational(0) || (v.y == Rational(0) && v.x > Rational(0))) ? 0 : 1;
    };
    const int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return a.x * b.y - a.y * b.x > Rational(0);
}

bool same_direction(const RationalVector& a, const RationalVector& b) {
    return a.x * b.y - a.y * b.x == Rational(0) && (a.x * b.x + a.y * b.y) > Rational(0);
}

}  // namespace

DimerModel::DimerModel(std::vector<Node> nodes, std::vector<Edge> edges, std::map<int, std::vector<int>> rotations)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), explicit_rotations_(std::move(rotations)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!node_by_id_.emplace(nodes_[i].id, i).second)
            throw DimerError("duplicate node id " + std::to_string(nodes_[i].id));
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (!edge_by_id_.emplace(e.id, i).second) throw DimerError("duplicate edge id " + std::to_string(e.id));
        if (!node_by_id_.count(e.black) || !node_by_id_.count(e.white))
            throw DimerError("edge " + std::to_string(e.id) + " references an unknown node");
        edge_black_.push_back(node_by_id_.at(e.black));
        edge_white_.push_back(node_by_id_.at(e.white));
    }
    for (const auto& [node, order] : explicit_rotations_) {
        if (!node_by_id_.count(node)) throw DimerError("rotation given for unknown node " + std::to_string(node));
        for (int e : order)
            if (!edge_by_id_.count(e)) throw DimerError("rotation references unknown edge " + std::to_string(e));
    }
    build_rotations();
    run_checks();
}

std::size_t DimerModel::node_index(int id) const {
    auto it = node_by_id_.find(id);
    if (it == node_by_id_.end()) throw DimerError("unknown node id " + std::to_string(id));
    return it->second;
}

std::size_t DimerModel::edge_index(int id) const {
    auto it = edge_by_id_.find(id);
    if (it == edge_by_id_.end()) throw DimerError("unknown edge id " + std::to_string(id));
    return it->second;
}

LatticeVector DimerModel::dart_shift(Dart d) const {
    const LatticeVector o = edges_[dart_edge(d)].offset;
    return dart_from_black(d) ? o : -o;
}

Dart DimerModel::next_ccw(Dart d) const {
    const auto& r = rotation_[tail(d)];
    return r[(rotation_pos_[d] + 1) % r.size()];
}

Dart DimerModel::next_cw(Dart d) const {
    const auto& r = rotation_[tail(d)];
    return r[(rotation_pos_[d] + r.size() - 1) % r.size()];
}

std::size_t DimerModel::black_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.color == Color::Black; }));
}

std::size_t DimerModel::white_count() const { return nodes_.size() - black_count(); }

void DimerModel::build_rotations() {
    rotation_.assign(nodes_.size(), {});
    rotation_pos_.assign(dart_count(), 0);
    for (Dart d = 0; d < dart_count(); ++d) rotation_[tail(d)].push_back(d);

    auto direction = [&](Dart d) {
        const Edge& e = edges_[dart_edge(d)];
        const Node& b = nodes_[edge_black_[dart_edge(d)]];
        const Node& w = nodes_[edge_white_[dart_edge(d)]];
        RationalVector v{w.x + Rational(e.offset.x) - b.x, w.y + Rational(e.offset.y) - b.y};
        if (!dart_from_black(d)) v = {-v.x, -v.y};
        return v;
    };

    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        auto& r = rotation_[n];
        auto it = explicit_rotations_.find(nodes_[n].id);
        if (it != explicit_rotations_.end()) {
            std::vector<Dart> ordered;
            for (int eid : it->second) {
                const std::size_t e = edge_by_id_.at(eid);
                std::vector<Dart> here;
                for (Dart d : {2 * e, 2 * e + 1})
                    if (tail(d) == n) here.push_back(d);
                if (here.size() != 1) {
                    diagnostics_.push_back({Diagnostic::Kind::BadRotation,
                                            "rotation at node " + std::to_string(nodes_[n].id) + " lists edge " +
                                                std::to_string(eid) + " which is not a simple incident edge"});
                    continue;
                }
                ordered.push_back(here.front());
            }
            std::vector<Dart> a = ordered, b = r;
            std::sort(a.begin(), a.end());
            if (a != b) {
                diagnostics_.push_back({Diagnostic::Kind::BadRotation, "rotation at node " +
                                                                           std::to_string(nodes_[n].id) +
                                                                           " is not a permutation of its edges"});
                continue;
            }
            r = std::move(ordered);
        } else {
            std::vector<std::pair<RationalVector, Dart>> dirs;
            for (Dart d : r) dirs.emplace_back(direction(d), d);
            std::stable_sort(dirs.begin(), dirs.end(),
                             [](const auto& p, const auto& q) { return angle_less(p.first, q.first); });
            for (std::size_t i = 0; i + 1 < dirs.size(); ++i) {
                if (same_direction(dirs[i].first, dirs[i + 1].first)) {
                    diagnostics_.push_back({Diagnostic::Kind::DuplicateDirection,
                                            "edges " + std::to_string(edges_[dart_edge(dirs[i].second)].id) +
                                                " and " + std::to_string(edges_[dart_edge(dirs[i + 1].second)].id) +
                                                " leave node " + std::to_string(nodes_[n].id) +
                                                " in the same direction"});
                }
            }
            for (std::size_t i = 0; i < dirs.size(); ++i) r[i] = dirs[i].second;
        }
    }
    for (const auto& r : rotation_)
        for (std::size_t i = 0; i < r.size(); ++i) rotation_pos_[r[i]] = i;
}

void DimerModel::trace_faces() {
    face_of_.assign(dart_count(), SIZE_MAX);
    for (Dart start = 0; start < dart_count(); ++start) {
        if (face_of_[start] != SIZE_MAX) continue;
        std::vector<Dart> cycle;
        for (Dart d = start; face_of_[d] == SIZE_MAX; d = next_ccw(dart_reverse(d))) {
            face_of_[d] = faces_.size();
            cycle.push_back(d);
        }
        faces_.push_back(std::move(cycle));
    }
}

void DimerModel::run_checks() {
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        if (rotation_[n].empty())
            diagnostics_.push_back({Diagnostic::Kind::IsolatedNode, "node " + std::to_string(nodes_[n].id) +
                                                                        " has no edges"});
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const bool ok = nodes_[edge_black_[e]].color == Color::Black &&
                        nodes_[edge_white_[e]].color == Color::White && edge_black_[e] != edge_white_[e];
        if (!ok)
            diagnostics_.push_back({Diagnostic::Kind::NotBipartite,
                                    "edge " + std::to_string(edges_[e].id) + " does not join a black node to a white node"});
    }

    // Union-find over nodes.
    std::vector<std::size_t> parent(nodes_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t e = 0; e < edges_.size(); ++e) parent[find(edge_black_[e])] = find(edge_white_[e]);
    std::set<std::size_t> roots;
    for (std::size_t n = 0; n < nodes_.size(); ++n) roots.insert(find(n));
    if (roots.size() > 1)
        diagnostics_.push_back({Diagnostic::Kind::Disconnected,
                                "graph has " + std::to_string(roots.size()) + " connected components"});
    if (nodes_.empty()) diagnostics_.push_back({Diagnostic::Kind::Disconnected, "graph has no nodes"});

    const bool rotations_ok = std::none_of(diagnostics_.begin(), diagnostics_.end(), [](const Diagnostic& d) {
        return d.kind == Diagnostic::Kind::BadRotation || d.kind == Diagnostic::Kind::DuplicateDirection;
    });
    if (!rotations_ok) return;

    trace_faces();
    const auto v = static_cast<long>(nodes_.size()), e = static_cast<long>(edges_.size()),
               f = static_cast<long>(faces_.size());
    if (v - e + f != 0) {
        std::ostringstream os;
        os << "V - E + F = " << v << " - " << e << " + " << f << " = " << (v - e + f) << ", expected 0";
        diagnostics_.push_back({Diagnostic::Kind::EulerCharacteristic, os.str()});
    }
    for (std::size_t i = 0; i < faces_.size(); ++i) {
        LatticeVector winding;
        for (Dart d : faces_[i]) winding += dart_shift(d);
        if (winding != LatticeVector{}) {
            std::ostringstream os;
            os << "face " << i << " boundary winds " << winding << " around the torus";
            diagnostics_.push_back({Diagnostic::Kind::FaceNotDisk, os.str()});
        }
    }
    if (roots.size() != 1) return;

    // Shifts of fundamental cycles must generate Z^2, otherwise the offsets
    // describe a graph that does not wrap around the torus.
    std::vector<LatticeVector> pot(nodes_.size());
    std::vector<bool> seen(nodes_.size(), false), tree(edges_.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const std::size_t n = stack.back();
        stack.pop_back();
        for (Dart d : rotation_[n]) {
            const std::size_t m = head(d);
            if (seen[m]) continue;
            seen[m] = true;
            tree[dart_edge(d)] = true;
            pot[m] = pot[n] + dart_shift(d);
            stack.push_back(m);
        }
    }
    std::int64_t minor_gcd = 0;
    std::vector<LatticeVector> gens;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (tree[e]) continue;
        const LatticeVector c = pot[edge_black_[e]] + edges_[e].offset - pot[edge_white_[e]];
        for (const auto& g : gens) minor_gcd = std::gcd(minor_gcd, cross(g, c));
        gens.push_back(c);
    }
    if (minor_gcd != 1)
        diagnostics_.push_back({Diagnostic::Kind::CyclesMissTorus,
                                "cycle classes generate a sublattice of index " +
                                    (minor_gcd == 0 ? std::string("infinity") : std::to_string(minor_gcd)) +
                                    " in the lattice of the torus"});
}

void DimerModel::require_valid() const {
    if (!valid()) throw DimerError("dimer model is invalid: " + diagnostics_.front().message);
}

const std::vector<std::vector<Dart>>& DimerModel::faces() const {
    require_valid();
    return faces_;
}

std::size_t DimerModel::face_of(Dart d) const {
    require_valid();
    return face_of_.at(d);
}

// ---------------------------------------------------------------------------

std::vector<Diagnostic> validate(const DimerModel& g) { return g.diagnostics(); }

const std::vector<std::vector<Dart>>& faces(const DimerModel& g) { return g.faces(); }

std::pair<std::size_t, std::size_t> faces_of_edge(const DimerModel& g, std::size_t e) {
    return {g.face_of(2 * e), g.face_of(2 * e + 1)};
}

Quiver dual_quiver(const DimerModel& g) {
    Quiver q;
    q.vertex_count = g.face_count();
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const auto [right, left] = faces_of_edge(g, e);
        q.arrows.push_back({e, right, left});
    }
    return q;
}

std::vector<ZigzagPath> zigzag_paths(const DimerModel& g) {
    if (!g.valid()) throw DimerError("zigzag paths need a valid dimer model");
    std::vector<bool> seen(g.dart_count(), false);
    std::vector<ZigzagPath> out;
    for (Dart start = 0; start < g.dart_count(); ++start) {
        if (seen[start]) continue;
        ZigzagPath z;
        LatticeVector tau;  // translation of the current node's lift
        for (Dart d = start; !seen[d];) {
            seen[d] = true;
            z.darts.push_back(d);
            const LatticeVector o = g.edges()[dart_edge(d)].offset;
            if (dart_from_black(d)) {
                z.lifts.push_back(tau);
                tau += o;
            } else {
                tau -= o;
                z.lifts.push_back(tau);
            }
            const Dart back = dart_reverse(d);
            d = g.nodes()[g.tail(back)].color == Color::White ? g.next_cw(back) : g.next_ccw(back);
        }
        z.homology = tau;
        out.push_back(std::move(z));
    }
    return out;
}

namespace {

// Is v in the Z-span of a and b?
bool in_span(LatticeVector v, LatticeVector a, LatticeVector b) {
    const std::int64_t det = cross(a, b);
    if (det != 0) return cross(v, b) % det == 0 && cross(a, v) % det == 0;
    if (a == LatticeVector{}) std::swap(a, b);
    if (a == LatticeVector{}) return v == LatticeVector{};
    // a and b parallel: span is Z * (primitive(a) * gcd of the multiples).
    const std::int64_t ga = std::gcd(a.x, a.y);
    const LatticeVector p{a.x / ga, a.y / ga};
    const std::int64_t ka = ga;
    const std::int64_t kb = p.x != 0 ? b.x / p.x : b.y / p.y;
    const std::int64_t step = std::gcd(ka, kb);
    if (cross(v, p) != 0) return false;
    const std::int64_t kv = p.x != 0 ? v.x / p.x : v.y / p.y;
    return kv % step == 0;
}

}  // namespace

ConsistencyReport is_consistent(const DimerModel& g) {
    ConsistencyReport rep;
    const auto zz = zigzag_paths(g);

    std::vector<std::size_t> zig_of(g.dart_count());
    std::vector<std::size_t> pos_of(g.dart_count());
    for (std::size_t i = 0; i < zz.size(); ++i)
        for (std::size_t k = 0; k < zz[i].darts.size(); ++k) {
            zig_of[zz[i].darts[k]] = i;
            pos_of[zz[i].darts[k]] = k;
        }

    for (std::size_t i = 0; i < zz.size(); ++i) {
        if (zz[i].homology == LatticeVector{}) {
            rep.violations.push_back({ConsistencyViolation::Kind::NullHomologous, {i}, {},
                                      "zigzag path " + std::to_string(i) + " is null-homologous"});
        }
    }

    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const Dart bw = 2 * e, wb = 2 * e + 1;
        const std::size_t zi = zig_of[bw];
        if (zi != zig_of[wb]) continue;
        const LatticeVector h = zz[zi].homology;
        if (h == LatticeVector{}) continue;
        const LatticeVector delta = zz[zi].lifts[pos_of[bw]] - zz[zi].lifts[pos_of[wb]];
        if (in_span(delta, h, h)) {
            rep.violations.push_back({ConsistencyViolation::Kind::SelfIntersection, {zi}, {e},
                                      "zigzag path " + std::to_string(zi) + " meets itself along edge " +
                                          std::to_string(g.edges()[e].id) + " in the universal cover"});
        }
    }

    struct Crossing {
        std::size_t edge;
        LatticeVector t;
        bool first_runs_black_to_white;
    };
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Crossing>> crossings;
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const Dart bw = 2 * e, wb = 2 * e + 1;
        const std::size_t za = zig_of[bw], zb = zig_of[wb];
        if (za == zb) continue;
        const std::size_t p = std::min(za, zb), q = std::max(za, zb);
        const Dart dp = za == p ? bw : wb, dq = za == p ? wb : bw;
        crossings[{p, q}].push_back({e, zz[p].lifts[pos_of[dp]] - zz[q].lifts[pos_of[dq]], za == p});
    }
    for (const auto& [pair, list] : crossings) {
        const auto [p, q] = pair;
        bool reported = false;
        for (std::size_t k = 0; k < list.size() && !reported; ++k) {
            for (std::size_t l = k + 1; l < list.size() && !reported; ++l) {
                if (list[k].first_runs_black_to_white != list[l].first_runs_black_to_white) continue;
                if (!in_span(list[k].t - list[l].t, zz[p].homology, zz[q].homology)) continue;
                rep.violations.push_back(
                    {ConsistencyViolation::Kind::ParallelCrossings, {p, q}, {list[k].edge, list[l].edge},
                     "zigzag paths " + std::to_string(p) + " and " + std::to_string(q) +
                         " cross twice in the same direction (edges " + std::to_string(g.edges()[list[k].edge].id) +
                         ", " + std::to_string(g.edges()[list[l].edge].id) + ")"});
                reported = true;
            }
        }
    }
    rep.consistent = rep.violations.empty();
    return rep;
}

DimerModel hexagonal_dimer() {
    std::vector<Node> nodes{{0, Color::Black, Rational(0), Rational(0)},
                            {1, Color::White, Rational(1, 3), Rational(1, 3)}};
    std::vector<Edge> edges{{0, 0, 1, {0, 0}}, {1, 0, 1, {-1, 0}}, {2, 0, 1, {0, -1}}};
    return DimerModel(std::move(nodes), std::move(edges));
}

}  // namespace dimers
