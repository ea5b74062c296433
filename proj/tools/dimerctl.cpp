// dimerctl: command-line front end for dimer models, their A-infinity
// categories, torus covers and the Laurent polynomial side.
//
// Exit status: 0 success, 1 a check failed, 2 usage or input error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dimers/ainfty.hpp"
#include "dimers/covers.hpp"
#include "dimers/io.hpp"
#include "dimers/laurent.hpp"
#include "dimers/matchings.hpp"
#include "dimers/verify.hpp"

using namespace dimers;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    bool as_json = false;
    double tol = 1e-10;
    std::size_t grid = 200;
    std::size_t steps = 200;
    std::string matching = "internal";
    std::string poly;
    std::string psi;
    std::string out;
    std::string sidecar;
    std::string axis = "x";
    std::size_t path = 0;
    bool dump = false;
};

std::string num(double v) {
    if (std::abs(v) < 5e-13) v = 0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return buf;
}

std::string num(Complex z) {
    const std::string im = num(z.imag());
    return num(z.real()) + (im[0] == '-' ? " - " + im.substr(1) : " + " + im) + "i";
}

json num_json(Complex z) { return json::array({std::stod(num(z.real())), std::stod(num(z.imag()))}); }

json vec_json(LatticeVector v) { return json::array({v.x, v.y}); }

json polygon_json(const LatticePolygon& p) {
    json out = json::array();
    for (auto v : p.vertices()) out.push_back(vec_json(v));
    return out;
}

std::string edges_str(const EdgeSet& d) {
    std::string s;
    for (std::size_t e : d) s += (s.empty() ? "" : " ") + std::to_string(e);
    return s;
}

void emit(const Settings& s, const json& j, const std::string& text) {
    if (s.as_json) std::cout << j.dump(1) << "\n";
    else std::cout << text;
}

void require_file(const std::string& path) {
    if (!std::ifstream(path).good()) throw UsageError("cannot open " + path);
}

DimerModel load_dimer(const std::string& path) {
    require_file(path);
    return read_dimer(path);
}

// Arguments ending in .json name a polynomial file; anything else is an expression.
LaurentPolynomial load_poly(const std::string& arg) {
    if (arg.empty()) throw UsageError("a polynomial is required (expression or .json file)");
    if (arg.size() > 5 && arg.compare(arg.size() - 5, 5, ".json") == 0) {
        require_file(arg);
        return read_polynomial(arg);
    }
    return LaurentPolynomial::parse(arg);
}

EdgeSet select_matching(const DimerModel& g, const std::string& sel) {
    const auto all = perfect_matchings(g);
    if (all.empty()) throw DegenerateError("model has no perfect matching");
    if (sel == "internal") {
        for (const auto& d : all)
            if (is_internal(g, d)) return d;
        throw DegenerateError("model has no internal perfect matching");
    }
    std::size_t idx = 0;
    try {
        std::size_t used = 0;
        idx = std::stoul(sel, &used);
        if (used != sel.size()) throw std::invalid_argument(sel);
    } catch (const std::exception&) {
        throw UsageError("--matching expects an index or 'internal', got '" + sel + "'");
    }
    if (idx >= all.size())
        throw UsageError("--matching " + sel + " out of range (" + std::to_string(all.size()) + " matchings)");
    return all[idx];
}

const char* violation_name(ConsistencyViolation::Kind k) {
    switch (k) {
        case ConsistencyViolation::Kind::NullHomologous: return "null-homologous";
        case ConsistencyViolation::Kind::SelfIntersection: return "self-intersection";
        case ConsistencyViolation::Kind::ParallelCrossings: return "parallel-crossings";
    }
    return "?";
}

const char* location_name(PointLocation l) {
    switch (l) {
        case PointLocation::Interior: return "interior";
        case PointLocation::Boundary: return "boundary";
        case PointLocation::Outside: return "outside";
    }
    return "?";
}

// ---------------------------------------------------------------------------

int cmd_validate(const Settings& s, const std::string& file) {
    const DimerModel g = load_dimer(file);
    json j{{"valid", g.valid()}, {"nodes", g.nodes().size()}, {"edges", g.edges().size()}};
    std::ostringstream o;
    if (g.valid()) {
        j["faces"] = g.face_count();
        o << "valid\tnodes " << g.nodes().size() << "\tedges " << g.edges().size() << "\tfaces " << g.face_count() << "\n";
    } else {
        json diags = json::array();
        for (const auto& d : g.diagnostics()) {
            diags.push_back({{"kind", to_string(d.kind)}, {"message", d.message}});
            o << to_string(d.kind) << "\t" << d.message << "\n";
        }
        j["diagnostics"] = diags;
        o << "invalid\n";
    }
    emit(s, j, o.str());
    return g.valid() ? 0 : 1;
}

int cmd_faces(const Settings& s, const std::string& file) {
    const DimerModel g = load_dimer(file);
    json arr = json::array();
    std::ostringstream o;
    for (std::size_t f = 0; f < g.face_count(); ++f) {
        json edges = json::array();
        o << "face " << f << "\tlength " << g.faces()[f].size() << "\tedges";
        for (Dart d : g.faces()[f]) {
            edges.push_back(g.edges()[dart_edge(d)].id);
            o << " " << g.edges()[dart_edge(d)].id;
        }
        o << "\n";
        arr.push_back({{"face", f}, {"edges", edges}});
    }
    emit(s, {{"faces", arr}}, o.str());
    return 0;
}

int cmd_quiver(const Settings& s, const std::string& file) {
    const DimerModel g = load_dimer(file);
    const Quiver q = dual_quiver(g);
    json arr = json::array();
    std::ostringstream o;
    o << "vertices " << q.vertex_count << "\n";
    for (const Arrow& a : q.arrows) {
        arr.push_back({{"arrow", g.edges()[a.edge].id}, {"source", a.source}, {"target", a.target}});
        o << "a" << g.edges()[a.edge].id << "\t" << a.source << " -> " << a.target << "\n";
    }
    emit(s, {{"vertices", q.vertex_count}, {"arrows", arr}}, o.str());
    return 0;
}

int cmd_zigzag(const Settings& s, const std::string& file) {
    const DimerModel g = load_dimer(file);
    json arr = json::array();
    std::ostringstream o;
    const auto paths = zigzag_paths(g);
    for (std::size_t i = 0; i < paths.size(); ++i) {
        json edges = json::array();
        o << "z" << i << "\t" << paths[i].homology << "\tedges";
        for (Dart d : paths[i].darts) {
            edges.push_back(g.edges()[dart_edge(d)].id);
            o << " " << g.edges()[dart_edge(d)].id;
        }
        o << "\n";
        arr.push_back({{"homology", vec_json(paths[i].homology)}, {"edges", edges}});
    }
    emit(s, {{"zigzags", arr}}, o.str());
    return 0;
}

int cmd_consistent(const Settings& s, const std::string& file) {
    const DimerModel g = load_dimer(file);
    const ConsistencyReport r = is_consistent(g);
    json arr = json::array();
    std::ostringstream o;
    for (const auto& v : r.violations) {
        arr.push_back({{"kind", violation_name(v.kind)}, {"paths", v.paths}, {"edges", v.edges}, {"message", v.message}});
        o << violation_name(v.kind) << "\t" << v.message << "\n";
    }
    o << (r.consistent ? "consistent" : "inconsistent") << "\n";
    emit(s, {{"consistent", r.consistent}, {"violations", arr}}, o.str());
    return r.consistent ? 0 : 1;
}

int cmd_matchings(const Settings& s, const std::string& file) {
    const DimerModel g = load_dimer(file);
    const MatchingTable t = enumerate_matchings(g);
    json rows = json::array(), list = json::array();
    std::ostringstream o;
    o << "matchings " << t.matchings.size() << "\treference " << t.reference << "\n";
    for (std::size_t i = 0; i < t.matchings.size(); ++i) {
        const auto& m = t.matchings[i];
        list.push_back({{"index", i}, {"edges", m.edges}, {"point", vec_json(m.lattice_point)}, {"internal", m.internal}});
        o << i << "\t" << m.lattice_point << "\t" << (m.internal ? "internal" : "-") << "\t" << edges_str(m.edges) << "\n";
    }
    for (const auto& r : matching_report(g)) {
        rows.push_back({{"point", vec_json(r.point)}, {"multiplicity", r.multiplicity}, {"internal", r.internal_count},
                        {"location", location_name(r.location)}});
        o << "point " << r.point << "\tmultiplicity " << r.multiplicity << "\tinternal " << r.internal_count << "\t"
          << location_name(r.location) << "\n";
    }
    emit(s, {{"matchings", list}, {"reference", t.reference}, {"points", rows}}, o.str());
    return 0;
}

int cmd_char_polygon(const Settings& s, const std::string& file) {
    const DimerModel g = load_dimer(file);
    const EdgeSet d = select_matching(g, s.matching);
    const LatticePolygon p = characteristic_polygon(g, d);
    const LatticePoints lp = lattice_points(p);
    emit(s, {{"polygon", polygon_json(p)}, {"doubled_area", doubled_area(p)}, {"interior_points", lp.interior.size()}},
         p.str() + "\n");
    return 0;
}

int cmd_internal(const Settings& s, const std::string& file) {
    const DimerModel g = load_dimer(file);
    const auto all = perfect_matchings(g);
    json arr = json::array();
    std::ostringstream o;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto order = is_internal(g, all[i]);
        if (!order) continue;
        arr.push_back({{"index", i}, {"edges", all[i]}, {"order", *order}});
        o << i << "\torder";
        for (std::size_t v : *order) o << " " << v;
        o << "\tedges " << edges_str(all[i]) << "\n";
    }
    if (arr.empty()) o << "no internal matchings\n";
    emit(s, {{"internal", arr}}, o.str());
    return arr.empty() ? 1 : 0;
}

int cmd_ainfty(const Settings& s, const std::string& file) {
    const DimerModel g = load_dimer(file);
    const AinftyCategory c = build_category(g);
    const RelationCheck r = check_ainfty_relations(c);
    json j{{"ok", r.ok}, {"tuples_checked", r.tuples_checked}, {"operations", c.ops().size()}};
    std::ostringstream o;
    if (s.dump) o << dump_category(c);
    o << "operations " << c.ops().size() << "\ttuples " << r.tuples_checked << "\t" << (r.ok ? "relations hold" : "relations FAIL")
      << "\n";
    if (r.first_violation) {
        json tuple = json::array();
        o << "first violation (";
        for (std::size_t i = 0; i < r.first_violation->tuple.size(); ++i) {
            const std::string n = name(c.basis()[r.first_violation->tuple[i]]);
            tuple.push_back(n);
            o << (i ? "," : "") << n;
        }
        o << ")\n";
        j["first_violation"] = tuple;
    }
    emit(s, j, o.str());
    return r.ok ? 0 : 1;
}

DirectedCategory directed_for(const DimerModel& g, const EdgeSet& d) {
    const auto order = is_internal(g, d);
    if (!order) throw PreconditionError("matching is not internal");
    return directed_subcategory(build_category(g), *order);
}

int cmd_directed(const Settings& s, const std::string& file) {
    const DimerModel g = load_dimer(file);
    const EdgeSet d = select_matching(g, s.matching);
    const DirectedCategory dc = directed_for(g, d);
    const bool maslov = check_maslov_table(g, d, dc.order);
    json homs = json::array();
    std::ostringstream o;
    o << "order";
    for (std::size_t v : dc.order) o << " " << v;
    o << "\n";
    for (std::size_t i = 0; i < dc.order.size(); ++i) {
        for (std::size_t k = i + 1; k < dc.order.size(); ++k) {
            const std::size_t v = dc.order[i], w = dc.order[k];
            const auto d1 = dc.category.hom(v, w, 1).size(), d2 = dc.category.hom(v, w, 2).size();
            if (d1 + d2 == 0) continue;
            homs.push_back({{"from", v}, {"to", w}, {"deg1", d1}, {"deg2", d2}});
            o << "hom " << v << " " << w << "\tdeg1 " << d1 << "\tdeg2 " << d2 << "\n";
        }
    }
    o << "degree table " << (maslov ? "ok" : "FAIL") << "\n";
    if (s.dump) o << dump_category(dc.category);
    emit(s, {{"order", dc.order}, {"homs", homs}, {"degree_table", maslov}}, o.str());
    return maslov ? 0 : 1;
}

int cmd_euler(const Settings& s, const std::string& file) {
    const DimerModel g = load_dimer(file);
    const DirectedCategory dc = directed_for(g, select_matching(g, s.matching));
    const IntegerMatrix e = euler_matrix(dc), x = intersection_matrix(dc);
    const std::int64_t det = determinant(e);
    std::ostringstream o;
    o << matrix_tsv(e) << "det " << det << "\nintersection\n" << matrix_tsv(x);
    emit(s, {{"order", dc.order}, {"euler", e}, {"det", det}, {"intersection", x}}, o.str());
    return std::llabs(det) == 1 ? 0 : 1;
}

int cmd_cover(const Settings& s, const std::string& file) {
    if (s.psi.empty()) throw UsageError("cover needs --psi a,b;c,d");
    IntegerMatrix2 psi;
    try {
        psi = IntegerMatrix2::parse(s.psi);
    } catch (const std::exception& e) {
        throw UsageError(std::string("--psi: ") + e.what());
    }
    const DimerModel g = load_dimer(file);
    const CoveredDimer c = pullback_dimer(g, psi);
    const auto labels = label_faces(c);
    json gens = json::array(), lab = json::array();
    std::ostringstream o;
    o << "nodes " << c.total.nodes().size() << "\tedges " << c.total.edges().size() << "\tfaces " << c.total.face_count()
      << "\n";
    o << "frame " << c.frame.str() << "\n";
    o << "deck group order " << c.deck_group.order();
    for (std::size_t i = 0; i < c.deck_group.generators.size(); ++i) {
        const auto& t = c.deck_group.generators[i];
        gens.push_back({{"order", c.deck_group.invariant_factors[i]}, {"generator", {t.x.str(), t.y.str()}}});
        o << "\tZ/" << c.deck_group.invariant_factors[i] << " <(" << t.x.str() << ", " << t.y.str() << ")>";
    }
    o << "\n";
    for (std::size_t f = 0; f < labels.size(); ++f) {
        lab.push_back({labels[f].base_face, labels[f].character});
        o << "face " << f << "\tlabel (" << labels[f].base_face << ", " << labels[f].character << ")\n";
    }
    json j{{"nodes", c.total.nodes().size()}, {"edges", c.total.edges().size()}, {"faces", c.total.face_count()},
           {"frame", c.frame.str()}, {"deck_group", gens}, {"labels", lab}};
    if (auto pm = perfect_matchings(g); !pm.empty()) {
        EdgeSet d = pm.front();
        for (const auto& m : pm)
            if (is_internal(g, m)) {
                d = m;
                break;
            }
        const CoverPolygonCheck pc = cover_char_polygon_check(c, d);
        o << "cover polygon " << pc.cover.str() << "\texpected " << pc.expected.str() << "\t" << (pc.equal ? "ok" : "FAIL")
          << "\n";
        j["polygon"] = polygon_json(pc.cover);
        j["polygon_ok"] = pc.equal;
    }
    if (!s.out.empty()) {
        write_dimer(c.total, s.out, "pull-back along psi = " + psi.str() + " of " + file);
        o << "wrote " << s.out << "\n";
    }
    emit(s, j, o.str());
    return c.total.valid() ? 0 : 1;
}

int cmd_critpoints(const Settings& s, const std::string& arg) {
    const LaurentPolynomial w = load_poly(arg);
    CriticalPointOptions opt;
    opt.tol = s.tol;
    const CriticalPointResult r = critical_points(w, opt);
    json pts = json::array();
    std::ostringstream o;
    o << "found " << r.points.size() << " of " << r.expected << (r.warning() ? "\tWARNING: solver budget exhausted" : "") << "\n";
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const auto& p = r.points[i];
        pts.push_back({{"x", num_json(p.x)}, {"y", num_json(p.y)}, {"value", num_json(p.value)}, {"residual", p.residual}});
        o << i << "\tx " << num(p.x) << "\ty " << num(p.y) << "\tvalue " << num(p.value) << "\n";
    }
    emit(s, {{"expected", r.expected}, {"warning", r.warning()}, {"points", pts}}, o.str());
    return r.warning() ? 1 : 0;
}

int cmd_coamoeba(const Settings& s, const std::string& arg) {
    const LaurentPolynomial w = load_poly(arg);
    const CoamoebaSample c = sample_coamoeba(w, s.grid, s.tol);
    std::ostringstream o;
    o << "points " << c.points.size() << "\n";
    if (!s.out.empty()) {
        write_text_file(s.out, coamoeba_svg(c));
        o << "wrote " << s.out << "\n";
    }
    json pts = json::array();
    if (s.as_json)
        for (const auto& p : c.points) pts.push_back({p.a, p.b});
    emit(s, {{"points", pts}}, o.str());
    return 0;
}

int cmd_trace(const Settings& s, const std::string& arg) {
    const LaurentPolynomial w = load_poly(arg);
    if (s.axis != "x" && s.axis != "y") throw UsageError("--axis must be x or y");
    CriticalPointOptions opt;
    opt.tol = s.tol;
    const auto paths = vanishing_paths(critical_points(w, opt));
    if (s.path >= paths.size())
        throw UsageError("--path " + std::to_string(s.path) + " out of range (" + std::to_string(paths.size()) + " paths)");
    const VanishingPath vp = paths[s.path];
    const BranchTrace t =
        trace_branch_points(w, s.axis == "x" ? Axis::X : Axis::Y, [&](double u) { return vp.at(u); }, s.steps);
    std::ostringstream o;
    o << "path " << vp.index << " to " << num(vp.value) << "\tsteps " << t.t.size() - 1 << "\n";
    json ends = json::array();
    for (std::size_t k = 0; k < t.trajectories.size(); ++k) {
        o << "branch " << k << "\tstart " << num(t.trajectories[k].front()) << "\tend " << num(t.trajectories[k].back()) << "\n";
        ends.push_back({{"start", num_json(t.trajectories[k].front())}, {"end", num_json(t.trajectories[k].back())}});
    }
    json col = json::array();
    for (const auto& [k, l] : t.collisions) {
        col.push_back({k, l});
        o << "collision " << k << " " << l << "\n";
    }
    o << "min final distance " << t.min_final_distance << "\n";
    if (!s.out.empty()) {
        write_text_file(s.out, trajectories_svg(t));
        o << "wrote " << s.out << "\n";
    }
    emit(s, {{"value", num_json(vp.value)}, {"branches", ends}, {"collisions", col}, {"min_final_distance", t.min_final_distance}},
         o.str());
    return 0;
}

int cmd_verify(const Settings& s, const std::string& file) {
    const DimerModel g = load_dimer(file);
    const EdgeSet d = select_matching(g, s.matching);
    VerifyOptions opt;
    opt.critical.tol = s.tol;
    const AssociationReport r = verify_association(g, d, load_poly(s.poly), opt);
    if (!s.sidecar.empty()) write_text_file(s.sidecar, report_json(r));
    if (s.as_json) std::cout << report_json(r);
    else std::cout << report_text(r);
    return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dimerctl: dimer models, A-infinity categories and their Laurent polynomial mirrors"};
    app.require_subcommand(1);
    app.fallthrough();
    Settings s;
    app.add_flag("--json", s.as_json, "machine-readable output");
    app.add_option("--tol", s.tol, "numerical tolerance")->capture_default_str();
    app.add_option("--grid", s.grid, "coamoeba grid size")->capture_default_str();
    app.add_option("--steps", s.steps, "branch tracing steps")->capture_default_str();

    std::string input;
    int status = 0;
    auto sub = [&](const char* name, const char* help, const char* what, int (*fn)(const Settings&, const std::string&)) {
        CLI::App* c = app.add_subcommand(name, help);
        c->add_option(what == std::string("poly") ? "polynomial" : "file", input,
                      what == std::string("poly") ? "expression or .json file" : "dimer .json file")
            ->required();
        c->callback([&, fn] { status = fn(s, input); });
        return c;
    };
    auto with_matching = [&](CLI::App* c) {
        c->add_option("--matching", s.matching, "matching index or 'internal'")->capture_default_str();
        return c;
    };

    sub("validate", "check the embedding", "dimer", cmd_validate);
    sub("faces", "list face boundaries", "dimer", cmd_faces);
    sub("quiver", "dual quiver", "dimer", cmd_quiver);
    sub("zigzag", "zigzag paths and homology classes", "dimer", cmd_zigzag);
    sub("consistent", "zigzag consistency", "dimer", cmd_consistent);
    sub("matchings", "perfect matchings and lattice points", "dimer", cmd_matchings);
    with_matching(sub("char-polygon", "characteristic polygon", "dimer", cmd_char_polygon));
    sub("internal", "internal perfect matchings", "dimer", cmd_internal);
    sub("ainfty-check", "A-infinity relations", "dimer", cmd_ainfty)->add_flag("--dump", s.dump, "print the structure constants");
    with_matching(sub("directed", "directed subcategory", "dimer", cmd_directed))
        ->add_flag("--dump", s.dump, "print the structure constants");
    with_matching(sub("euler", "Euler and intersection matrices", "dimer", cmd_euler));
    CLI::App* cover = sub("cover", "pull back along a torus cover", "dimer", cmd_cover);
    cover->add_option("--psi", s.psi, "cover matrix a,b;c,d")->required();
    cover->add_option("--out", s.out, "write the covering dimer model");
    sub("critpoints", "critical points and values", "poly", cmd_critpoints);
    sub("coamoeba", "sample the coamoeba of W = 0", "poly", cmd_coamoeba)->add_option("--out", s.out, "SVG file");
    CLI::App* trace = sub("trace", "branch points along a vanishing path", "poly", cmd_trace);
    trace->add_option("--axis", s.axis, "projection: x or y")->capture_default_str();
    trace->add_option("--path", s.path, "vanishing path index")->capture_default_str();
    trace->add_option("--out", s.out, "SVG file");
    CLI::App* verify = with_matching(sub("verify", "check association with a polynomial", "dimer", cmd_verify));
    verify->add_option("--poly", s.poly, "expression or .json file")->required();
    verify->add_option("--sidecar", s.sidecar, "also write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return status;
}
