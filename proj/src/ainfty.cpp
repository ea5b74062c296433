#include "dimers/ainfty.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace dimers {

std::string name(const BasisElement& b) {
    switch (b.kind) {
        case BasisElement::Kind::Identity: return "id" + std::to_string(b.payload);
        case BasisElement::Kind::Arrow: return "a" + std::to_string(b.payload);
        case BasisElement::Kind::DualArrow: return "a" + std::to_string(b.payload) + "^v";
        case BasisElement::Kind::DualIdentity: return "id" + std::to_string(b.payload) + "^v";
    }
    return "?";
}

AinftyCategory::AinftyCategory(std::size_t objects, std::vector<BasisElement> basis)
    : objects_(objects), basis_(std::move(basis)) {}

void AinftyCategory::add(const OpKey& key, BasisId out, std::int64_t coef) {
    if (key.size() < 2) throw std::logic_error("operations m_k need k >= 2");
    int deg = 2 - static_cast<int>(key.size());
    for (std::size_t i = 0; i < key.size(); ++i) {
        deg += basis_.at(key[i]).degree;
        if (i + 1 < key.size() && basis_[key[i]].target != basis_.at(key[i + 1]).source)
            throw std::logic_error("operation inputs are not composable");
    }
    const BasisElement& o = basis_.at(out);
    if (o.degree != deg) throw std::logic_error("operation output " + name(o) + " has the wrong degree");
    if (o.source != basis_[key.front()].source || o.target != basis_[key.back()].target)
        throw std::logic_error("operation output " + name(o) + " lies in the wrong hom space");
    auto& lc = ops_[key];
    if ((lc[out] += coef) == 0) lc.erase(out);
    if (lc.empty()) ops_.erase(key);
}

void AinftyCategory::set(const OpKey& key, LinearCombination value) {
    std::erase_if(value, [](const auto& kv) { return kv.second == 0; });
    if (value.empty()) ops_.erase(key);
    else ops_[key] = std::move(value);
}

std::vector<BasisId> AinftyCategory::hom(std::size_t v, std::size_t w, int degree) const {
    std::vector<BasisId> out;
    for (BasisId b = 0; b < basis_.size(); ++b)
        if (basis_[b].source == v && basis_[b].target == w && (degree < 0 || basis_[b].degree == degree))
            out.push_back(b);
    return out;
}

AinftyCategory build_category(const DimerModel& g) {
    const Quiver q = dual_quiver(g);
    const CategoryLayout L{q.vertex_count, q.arrows.size()};
    using K = BasisElement::Kind;

    std::vector<BasisElement> basis;
    for (std::size_t v = 0; v < L.faces; ++v) basis.push_back({K::Identity, v, 0, v, v});
    for (const Arrow& a : q.arrows) basis.push_back({K::Arrow, a.edge, 1, a.target, a.source});
    for (const Arrow& a : q.arrows) basis.push_back({K::DualArrow, a.edge, 2, a.source, a.target});
    for (std::size_t v = 0; v < L.faces; ++v) basis.push_back({K::DualIdentity, v, 3, v, v});
    AinftyCategory c(L.faces, basis);

    for (BasisId x = 0; x < basis.size(); ++x) {
        const BasisElement& b = basis[x];
        c.add({L.identity(b.source), x}, x, 1);
        if (b.kind != K::Identity) c.add({x, L.identity(b.target)}, x, b.degree % 2 == 0 ? 1 : -1);
    }
    for (const Arrow& a : q.arrows) {
        c.add({L.dual_arrow(a.edge), L.arrow(a.edge)}, L.dual_identity(a.source), 1);
        c.add({L.arrow(a.edge), L.dual_arrow(a.edge)}, L.dual_identity(a.target), -1);
    }

    for (std::size_t n = 0; n < g.nodes().size(); ++n) {
        const bool white = g.nodes()[n].color == Color::White;
        std::vector<std::size_t> cyc;
        for (Dart d : g.rotation(n)) cyc.push_back(dart_edge(d));
        if (white) std::reverse(cyc.begin(), cyc.end());
        const std::size_t d = cyc.size();
        if (d < 3) continue;  // bivalent nodes carry no product of arity >= 2
        for (std::size_t i = 0; i < d; ++i)
            if (q.arrows[cyc[i]].target != q.arrows[cyc[(i + 1) % d]].source)
                throw std::logic_error("arrows around a node do not form a cycle");
        for (std::size_t j = 0; j < d; ++j) {
            OpKey key;
            for (std::size_t m = 1; m < d; ++m) key.push_back(L.arrow(cyc[(j + d - m) % d]));
            c.add(key, L.dual_arrow(cyc[j]), white ? 1 : -1);
        }
    }
    return c;
}

bool degrees_consistent(const AinftyCategory& c) {
    for (const auto& [key, out] : c.ops()) {
        int deg = 2 - static_cast<int>(key.size());
        for (BasisId b : key) deg += c.basis()[b].degree;
        for (const auto& [o, coef] : out)
            if (c.basis()[o].degree != deg) return false;
    }
    return true;
}

RelationCheck check_ainfty_relations(const AinftyCategory& c) {
    const auto& ops = c.ops();
    std::map<BasisId, std::vector<const OpKey*>> producers;
    for (const auto& [key, out] : ops)
        for (const auto& [o, coef] : out) producers[o].push_back(&key);

    // A relation term is nonzero only if an outer operation consumes the output
    // of an inner one, so candidate tuples are outer keys with one input
    // replaced by the inputs of a producer of that input.
    std::set<OpKey> candidates;
    for (const auto& [key, out] : ops) {
        for (std::size_t p = 0; p < key.size(); ++p) {
            auto it = producers.find(key[p]);
            if (it == producers.end()) continue;
            for (const OpKey* inner : it->second) {
                OpKey t(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(p));
                t.insert(t.end(), inner->begin(), inner->end());
                t.insert(t.end(), key.begin() + static_cast<std::ptrdiff_t>(p) + 1, key.end());
                candidates.insert(std::move(t));
            }
        }
    }

    RelationCheck res;
    for (const OpKey& t : candidates) {
        ++res.tuples_checked;
        LinearCombination total;
        const std::size_t l = t.size();
        int prefix_degree = 0;
        for (std::size_t i = 0; i < l; ++i) {
            const int sign = (prefix_degree - static_cast<int>(i)) % 2 == 0 ? 1 : -1;
            for (std::size_t j = i + 2; j <= l; ++j) {
                const OpKey inner(t.begin() + static_cast<std::ptrdiff_t>(i), t.begin() + static_cast<std::ptrdiff_t>(j));
                auto in = ops.find(inner);
                if (in == ops.end()) continue;
                for (const auto& [o, coef] : in->second) {
                    OpKey outer(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(i));
                    outer.push_back(o);
                    outer.insert(outer.end(), t.begin() + static_cast<std::ptrdiff_t>(j), t.end());
                    auto out = ops.find(outer);
                    if (out == ops.end()) continue;
                    for (const auto& [o2, coef2] : out->second) total[o2] += sign * coef * coef2;
                }
            }
            prefix_degree += c.basis()[t[i]].degree;
        }
        std::erase_if(total, [](const auto& kv) { return kv.second == 0; });
        if (!total.empty()) {
            res.ok = false;
            res.first_violation = RelationViolation{t, std::move(total)};
            return res;
        }
    }
    return res;
}

DirectedCategory directed_subcategory(const AinftyCategory& c, const std::vector<std::size_t>& order) {
    std::vector<std::size_t> rank(c.object_count(), SIZE_MAX);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] >= c.object_count() || rank[order[i]] != SIZE_MAX)
            throw PreconditionError("order must list every object exactly once");
        rank[order[i]] = i;
    }
    if (order.size() != c.object_count()) throw PreconditionError("order must list every object exactly once");

    DirectedCategory d;
    d.order = order;
    std::vector<BasisElement> basis;
    std::vector<BasisId> renumber(c.basis().size(), SIZE_MAX);
    for (BasisId b = 0; b < c.basis().size(); ++b) {
        const BasisElement& e = c.basis()[b];
        const bool keep = e.source == e.target ? e.kind == BasisElement::Kind::Identity
                                               : rank[e.source] < rank[e.target];
        if (!keep) continue;
        renumber[b] = basis.size();
        d.original.push_back(b);
        basis.push_back(e);
    }
    d.category = AinftyCategory(c.object_count(), std::move(basis));
    for (const auto& [key, out] : c.ops()) {
        OpKey k;
        for (BasisId b : key) {
            if (renumber[b] == SIZE_MAX) break;
            k.push_back(renumber[b]);
        }
        if (k.size() != key.size()) continue;
        for (const auto& [o, coef] : out)
            if (renumber[o] != SIZE_MAX) d.category.add(k, renumber[o], coef);
    }
    return d;
}

namespace {

// Throws unless d = {a : s(a) < t(a)} in the given order.
void require_compatible(const Quiver& q, const EdgeSet& d, const std::vector<std::size_t>& order) {
    std::vector<std::size_t> rank(q.vertex_count, SIZE_MAX);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] >= q.vertex_count || rank[order[i]] != SIZE_MAX)
            throw PreconditionError("order must list every object exactly once");
        rank[order[i]] = i;
    }
    if (order.size() != q.vertex_count) throw PreconditionError("order must list every object exactly once");
    EdgeSet up;
    for (const Arrow& a : q.arrows) {
        if (a.source == a.target) throw PreconditionError("quiver has a loop, so no matching is internal");
        if (rank[a.source] < rank[a.target]) up.push_back(a.edge);
    }
    EdgeSet sorted = d;
    std::sort(sorted.begin(), sorted.end());
    if (up != sorted) throw PreconditionError("matching is not {a : s(a) < t(a)} for this order");
}

}  // namespace

bool check_maslov_table(const DimerModel& g, const EdgeSet& d, const std::vector<std::size_t>& order) {
    const Quiver q = dual_quiver(g);
    require_compatible(q, d, order);
    const DirectedCategory dc = directed_subcategory(build_category(g), order);
    const std::set<std::size_t> in_d(d.begin(), d.end());
    using K = BasisElement::Kind;

    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const std::size_t ci = order[i], cj = order[j];
            std::set<std::size_t> want1, want2, got1, got2;
            for (const Arrow& a : q.arrows) {
                if (!((a.source == ci && a.target == cj) || (a.source == cj && a.target == ci))) continue;
                (in_d.count(a.edge) ? want2 : want1).insert(a.edge);
            }
            for (BasisId b : dc.category.hom(ci, cj)) {
                const BasisElement& e = dc.category.basis()[b];
                if (e.kind == K::Arrow && e.degree == 1) got1.insert(e.payload);
                else if (e.kind == K::DualArrow && e.degree == 2) got2.insert(e.payload);
                else return false;
            }
            if (got1 != want1 || got2 != want2) return false;
        }
    }
    return true;
}

OrderIndependence order_independence(const DimerModel& g, const EdgeSet& d, std::size_t max_objects) {
    const auto first = is_internal(g, d);
    if (!first) throw PreconditionError("matching is not internal");
    const Quiver q = dual_quiver(g);
    OrderIndependence res;
    if (q.vertex_count > max_objects) {
        res.status = OrderIndependence::Status::NotExhaustive;
        return res;
    }

    const std::set<std::size_t> in_d(d.begin(), d.end());
    std::vector<std::vector<std::size_t>> succ(q.vertex_count);
    std::vector<std::size_t> indeg(q.vertex_count, 0);
    for (const Arrow& a : q.arrows) {
        const bool up = in_d.count(a.edge) > 0;
        succ[up ? a.source : a.target].push_back(up ? a.target : a.source);
        ++indeg[up ? a.target : a.source];
    }

    const AinftyCategory full = build_category(g);
    const DirectedCategory reference = directed_subcategory(full, *first);
    std::vector<std::size_t> order;
    std::vector<bool> placed(q.vertex_count, false);
    std::function<void()> extend = [&] {
        if (res.status == OrderIndependence::Status::Dependent) return;
        if (order.size() == q.vertex_count) {
            ++res.orders;
            if (!(directed_subcategory(full, order).category == reference.category))
                res.status = OrderIndependence::Status::Dependent;
            return;
        }
        for (std::size_t v = 0; v < q.vertex_count; ++v) {
            if (placed[v] || indeg[v] != 0) continue;
            placed[v] = true;
            order.push_back(v);
            for (std::size_t w : succ[v]) --indeg[w];
            extend();
            for (std::size_t w : succ[v]) ++indeg[w];
            order.pop_back();
            placed[v] = false;
        }
    };
    extend();
    return res;
}

IntegerMatrix euler_matrix(const DirectedCategory& d) {
    const std::size_t n = d.order.size();
    IntegerMatrix e(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (BasisId b : d.category.hom(d.order[i], d.order[j]))
                e[i][j] += d.category.basis()[b].degree % 2 == 0 ? 1 : -1;
    return e;
}

IntegerMatrix intersection_matrix(const DirectedCategory& d) {
    IntegerMatrix e = euler_matrix(d);
    const std::size_t n = e.size();
    IntegerMatrix s(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s[i][j] = e[i][j] - e[j][i];
    return s;
}

std::int64_t determinant(const IntegerMatrix& m) {
    // Bareiss fraction-free elimination; exact for integer input.
    IntegerMatrix a = m;
    const std::size_t n = a.size();
    if (n == 0) return 1;
    std::int64_t sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

std::string dump_category(const AinftyCategory& c) {
    std::ostringstream os;
    os << "objects " << c.object_count() << '\n';
    for (std::size_t v = 0; v < c.object_count(); ++v) {
        for (std::size_t w = 0; w < c.object_count(); ++w) {
            int dims[4] = {0, 0, 0, 0};
            bool any = false;
            for (BasisId b : c.hom(v, w)) {
                ++dims[c.basis()[b].degree];
                any = true;
            }
            if (any) os << "hom " << v << ' ' << w << '\t' << dims[0] << ' ' << dims[1] << ' ' << dims[2] << ' ' << dims[3] << '\n';
        }
    }
    for (const auto& [key, out] : c.ops()) {
        for (const auto& [o, coef] : out) {
            os << 'm' << key.size() << "\t[";
            for (std::size_t i = 0; i < key.size(); ++i) os << (i ? "," : "") << name(c.basis()[key[i]]);
            os << "]\t" << (coef > 0 ? "+" : "") << coef << '\t' << name(c.basis()[o]) << '\n';
        }
    }
    return os.str();
}

std::string matrix_tsv(const IntegerMatrix& m) {
    std::ostringstream os;
    for (const auto& row : m) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "\t" : "") << row[j];
        os << '\n';
    }
    return os.str();
}

}  // namespace dimers
