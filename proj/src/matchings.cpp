#include "dimers/matchings.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace dimers {

IntegerMatrix2 calibration() { return {0, -1, 1, 0}; }

std::vector<EdgeSet> perfect_matchings(const DimerModel& g) {
    if (!g.valid()) throw DimerError("perfect matchings need a valid dimer model");
    std::vector<EdgeSet> out;
    if (g.black_count() != g.white_count()) return out;

    std::vector<std::size_t> whites;
    for (std::size_t n = 0; n < g.nodes().size(); ++n)
        if (g.nodes()[n].color == Color::White) whites.push_back(n);
    std::vector<std::vector<std::size_t>> incident(g.nodes().size());
    for (std::size_t e = 0; e < g.edges().size(); ++e) incident[g.white_of(e)].push_back(e);

    std::vector<bool> black_used(g.nodes().size(), false);
    EdgeSet chosen;

    // Every unmatched white node still needs a free black neighbour.
    auto feasible = [&](std::size_t from) {
        for (std::size_t i = from; i < whites.size(); ++i) {
            bool any = false;
            for (std::size_t e : incident[whites[i]])
                if (!black_used[g.black_of(e)]) { any = true; break; }
            if (!any) return false;
        }
        return true;
    };

    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == whites.size()) {
            EdgeSet d = chosen;
            std::sort(d.begin(), d.end());
            out.push_back(std::move(d));
            return;
        }
        for (std::size_t e : incident[whites[i]]) {
            const std::size_t b = g.black_of(e);
            if (black_used[b]) continue;
            black_used[b] = true;
            chosen.push_back(e);
            if (feasible(i + 1)) go(i + 1);
            chosen.pop_back();
            black_used[b] = false;
        }
    };
    go(0);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_perfect_matching(const DimerModel& g, const EdgeSet& d) {
    std::vector<int> cover(g.nodes().size(), 0);
    for (std::size_t e : d) {
        if (e >= g.edges().size()) return false;
        ++cover[g.black_of(e)];
        ++cover[g.white_of(e)];
    }
    return std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; });
}

bool is_nondegenerate(const DimerModel& g) {
    std::vector<bool> used(g.edges().size(), false);
    for (const auto& d : perfect_matchings(g))
        for (std::size_t e : d) used[e] = true;
    return std::all_of(used.begin(), used.end(), [](bool u) { return u; });
}

LatticeVector height_change(const DimerModel& g, const EdgeSet& d, const EdgeSet& d0) {
    LatticeVector h;
    for (std::size_t e : d) h += g.edges().at(e).offset;
    for (std::size_t e : d0) h -= g.edges().at(e).offset;
    return h;
}

LatticePolygon characteristic_polygon(const DimerModel& g, const EdgeSet& d_ref) {
    const auto all = perfect_matchings(g);
    if (all.empty()) throw DegenerateError("dimer model has no perfect matchings");
    const IntegerMatrix2 c = calibration();
    std::vector<LatticeVector> pts;
    for (const auto& d : all) pts.push_back(c * height_change(g, d, d_ref));
    return convex_hull(pts);
}

std::optional<std::vector<std::size_t>> is_internal(const DimerModel& g, const EdgeSet& d) {
    const Quiver q = dual_quiver(g);
    std::vector<bool> in_d(q.arrows.size(), false);
    for (std::size_t e : d) in_d.at(e) = true;

    std::vector<std::vector<std::size_t>> succ(q.vertex_count);
    std::vector<std::size_t> indeg(q.vertex_count, 0);
    for (const Arrow& a : q.arrows) {
        if (a.source == a.target) return std::nullopt;
        const std::size_t lo = in_d[a.edge] ? a.source : a.target;
        const std::size_t hi = in_d[a.edge] ? a.target : a.source;
        succ[lo].push_back(hi);
        ++indeg[hi];
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t v = 0; v < q.vertex_count; ++v)
        if (indeg[v] == 0) ready.push(v);
    std::vector<std::size_t> order;
    while (!ready.empty()) {
        const std::size_t v = ready.top();
        ready.pop();
        order.push_back(v);
        for (std::size_t w : succ[v])
            if (--indeg[w] == 0) ready.push(w);
    }
    if (order.size() != q.vertex_count) return std::nullopt;
    return order;
}

MatchingTable enumerate_matchings(const DimerModel& g) {
    MatchingTable t;
    const auto all = perfect_matchings(g);
    for (const auto& d : all) {
        PerfectMatching m;
        m.edges = d;
        m.internal = is_internal(g, d).has_value();
        t.matchings.push_back(std::move(m));
    }
    for (std::size_t i = 0; i < t.matchings.size(); ++i) {
        if (t.matchings[i].internal) {
            t.reference = i;
            break;
        }
    }
    const IntegerMatrix2 c = calibration();
    for (std::size_t i = 0; i < t.matchings.size(); ++i) {
        auto& m = t.matchings[i];
        m.height_change = height_change(g, m.edges, t.matchings[t.reference].edges);
        m.lattice_point = c * m.height_change;
        t.by_point[m.lattice_point].push_back(i);
    }
    return t;
}

std::vector<MatchingReportRow> matching_report(const DimerModel& g) {
    const MatchingTable t = enumerate_matchings(g);
    std::vector<MatchingReportRow> rows;
    if (t.matchings.empty()) return rows;
    std::vector<LatticeVector> pts;
    for (const auto& [p, ids] : t.by_point) pts.push_back(p);
    const LatticePolygon poly = convex_hull(pts);
    for (const auto& [p, ids] : t.by_point) {
        MatchingReportRow r;
        r.point = p;
        r.multiplicity = ids.size();
        for (std::size_t i : ids) r.internal_count += t.matchings[i].internal ? 1 : 0;
        r.location = locate(poly, p);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace dimers
