#include "dimers/verify.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "dimers/ainfty.hpp"

namespace dimers {

const char* to_string(BulletStatus s) {
    switch (s) {
        case BulletStatus::Pass: return "pass";
        case BulletStatus::PassWithWarning: return "pass-with-warning";
        case BulletStatus::Fail: return "fail";
        case BulletStatus::NotDecidable: return "not-decidable";
    }
    return "?";
}

bool AssociationReport::passed() const { return failures().empty(); }

std::vector<std::string> AssociationReport::failures() const {
    std::vector<std::string> out;
    for (const auto& b : bullets)
        if (b.status == BulletStatus::Fail) out.push_back(b.id);
    return out;
}

namespace {

struct Outcome {
    BulletStatus status;
    std::string evidence;
};

Outcome pass_if(bool ok, std::string evidence) { return {ok ? BulletStatus::Pass : BulletStatus::Fail, std::move(evidence)}; }

BulletResult run(std::string id, std::string title, const std::function<Outcome()>& body) {
    BulletResult b{std::move(id), std::move(title), BulletStatus::Fail, {}};
    try {
        const Outcome o = body();
        b.status = o.status;
        b.evidence = o.evidence;
    } catch (const std::exception& e) {
        b.evidence = std::string("error: ") + e.what();
    }
    return b;
}

}  // namespace

AssociationReport verify_association(const DimerModel& g, const EdgeSet& d, const LaurentPolynomial& w,
                                     const VerifyOptions& opt) {
    if (!g.valid()) throw DimerError("verify_association needs a valid dimer model");
    if (!is_perfect_matching(g, d)) throw std::invalid_argument("not a perfect matching");
    AssociationReport r;
    auto& b = r.bullets;

    b.push_back(run("1", "dimer model is consistent", [&] {
        const ConsistencyReport c = is_consistent(g);
        return pass_if(c.consistent, std::to_string(c.violations.size()) + " zigzag violations");
    }));

    const auto order = is_internal(g, d);
    b.push_back(run("2", "matching is internal", [&] {
        std::string ev = "no compatible total order";
        if (order) {
            ev = "order";
            for (std::size_t v : *order) ev += " " + std::to_string(v);
        }
        return pass_if(order.has_value(), ev);
    }));

    b.push_back(run("3", "faces correspond to critical points", [&] {
        const CriticalPointResult cp = critical_points(w, opt.critical);
        std::ostringstream ev;
        ev << g.face_count() << " faces, " << cp.points.size() << " critical points found of " << cp.expected
           << " expected";
        if (g.face_count() != cp.points.size()) return Outcome{BulletStatus::Fail, ev.str()};
        if (cp.warning()) return Outcome{BulletStatus::PassWithWarning, ev.str() + " (solver budget exhausted)"};
        return Outcome{BulletStatus::Pass, ev.str()};
    }));

    b.push_back(run("4", "characteristic polygon equals Newton polygon", [&] {
        const LatticePolygon cp = characteristic_polygon(g, d), np = newton_polygon(w);
        return pass_if(cp.equal_up_to_translation(np), cp.str() + " vs " + np.str());
    }));

    b.push_back(run("5", "degree table of directed morphisms", [&] {
        if (!order) throw PreconditionError("matching is not internal");
        return pass_if(check_maslov_table(g, d, *order), "degree 1 off the matching, degree 2 on it");
    }));

    b.push_back(run("6", "A-infinity relations", [&] {
        const RelationCheck c = check_ainfty_relations(build_category(g));
        std::string ev = std::to_string(c.tuples_checked) + " tuples checked";
        if (c.first_violation) {
            ev += ", first violation at (";
            for (std::size_t i = 0; i < c.first_violation->tuple.size(); ++i)
                ev += (i ? "," : "") + std::to_string(c.first_violation->tuple[i]);
            ev += ")";
        }
        return pass_if(c.ok, ev);
    }));

    b.push_back(run("7", "directed category independent of the order", [&] {
        const OrderIndependence oi = order_independence(g, d, opt.max_order_objects);
        switch (oi.status) {
            case OrderIndependence::Status::Independent:
                return Outcome{BulletStatus::Pass, std::to_string(oi.orders) + " compatible orders agree"};
            case OrderIndependence::Status::Dependent:
                return Outcome{BulletStatus::Fail, "two compatible orders give different categories"};
            case OrderIndependence::Status::NotExhaustive: break;
        }
        return Outcome{BulletStatus::Fail, "more than " + std::to_string(opt.max_order_objects) +
                                               " objects; orders not enumerated"};
    }));

    const char* analytic[][2] = {
        {"polygon-bounding", "faces bound polygons in the fiber"},
        {"contraction", "polygons contract to critical points along the vanishing paths"},
        {"arg-injectivity", "argument map is injective on the fiber"},
    };
    for (const auto& [id, title] : analytic)
        b.push_back({id, title, BulletStatus::NotDecidable, "needs the geometry of the fiber; see the coamoeba and trace commands"});
    return r;
}

std::string report_text(const AssociationReport& r) {
    std::ostringstream o;
    for (const auto& b : r.bullets) o << "[" << b.id << "] " << to_string(b.status) << "\t" << b.title << "\t" << b.evidence << "\n";
    o << (r.passed() ? "associated (all decidable bullets pass)" : "not associated") << "\n";
    return o.str();
}

std::string report_json(const AssociationReport& r) {
    nlohmann::json bullets = nlohmann::json::array();
    for (const auto& b : r.bullets)
        bullets.push_back({{"id", b.id}, {"title", b.title}, {"status", to_string(b.status)}, {"evidence", b.evidence}});
    return nlohmann::json{{"passed", r.passed()}, {"bullets", std::move(bullets)}}.dump(1) + "\n";
}

}  // namespace dimers
