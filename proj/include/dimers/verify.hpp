#pragma once

// Combinatorial checks that a dimer model with a perfect matching is
// associated with a Laurent polynomial. Bullets that need the geometry of the
// fiber are reported as not decidable and never approximated.

#include <string>
#include <vector>

#include "dimers/dimer.hpp"
#include "dimers/laurent.hpp"
#include "dimers/matchings.hpp"

namespace dimers {

enum class BulletStatus { Pass, PassWithWarning, Fail, NotDecidable };

const char* to_string(BulletStatus s);

struct BulletResult {
    std::string id;     ///< "1".."7" for decidable bullets, a short key for analytic ones
    std::string title;
    BulletStatus status = BulletStatus::Fail;
    std::string evidence;
};

struct AssociationReport {
    std::vector<BulletResult> bullets;
    /// Every decidable bullet passed (possibly with a warning).
    bool passed() const;
    /// Ids of the failing bullets, in order.
    std::vector<std::string> failures() const;
};

struct VerifyOptions {
    CriticalPointOptions critical;
    std::size_t max_order_objects = 12;
};

/// Evaluates every bullet independently; a module error inside a bullet is
/// recorded as that bullet's failure.
AssociationReport verify_association(const DimerModel& g, const EdgeSet& d, const LaurentPolynomial& w,
                                     const VerifyOptions& opt = {});

std::string report_text(const AssociationReport& r);
std::string report_json(const AssociationReport& r);

}  // namespace dimers
