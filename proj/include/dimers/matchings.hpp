#pragma once

// Perfect matchings of a dimer model, their height changes, the
// characteristic polygon and internal matchings.

#include <map>
#include <optional>
#include <vector>

#include "dimers/dimer.hpp"
#include "dimers/geometry.hpp"

namespace dimers {

/// Sorted edge indices.
using EdgeSet = std::vector<std::size_t>;

struct PerfectMatching {
    EdgeSet edges;
    /// Sum of black->white offsets over the matching minus the same sum for the
    /// table's reference matching, in file (torus homology) coordinates.
    LatticeVector height_change;
    /// calibration() * height_change: the lattice point in the polygon's plane.
    LatticeVector lattice_point;
    bool internal = false;
};

struct MatchingTable {
    std::vector<PerfectMatching> matchings;  ///< sorted lexicographically by edge list
    std::size_t reference = 0;               ///< first internal matching, else 0
    /// Matching indices grouped by lattice point.
    std::map<LatticeVector, std::vector<std::size_t>> by_point;
};

/// The fixed unimodular map from torus homology to the polygon lattice:
/// rotation by a quarter turn counterclockwise, (x, y) -> (-y, x).
IntegerMatrix2 calibration();

/// Every perfect matching, lexicographically sorted, found by backtracking
/// over white nodes.
std::vector<EdgeSet> perfect_matchings(const DimerModel& g);

MatchingTable enumerate_matchings(const DimerModel& g);

bool is_perfect_matching(const DimerModel& g, const EdgeSet& d);

/// Every edge lies in some perfect matching.
bool is_nondegenerate(const DimerModel& g);

/// Raw, uncalibrated: sum of offsets over d minus the sum over d0.
LatticeVector height_change(const DimerModel& g, const EdgeSet& d, const EdgeSet& d0);

/// Convex hull of calibrated height changes of all matchings relative to d_ref.
/// Throws DegenerateError when the hull is not two-dimensional.
LatticePolygon characteristic_polygon(const DimerModel& g, const EdgeSet& d_ref);

/// A total order on quiver vertices (listed from least to greatest) with
/// d = {a : s(a) < t(a)}, or nullopt when none exists. Ties are broken by the
/// smallest face index.
std::optional<std::vector<std::size_t>> is_internal(const DimerModel& g, const EdgeSet& d);

struct MatchingReportRow {
    LatticeVector point;
    std::size_t multiplicity = 0;
    std::size_t internal_count = 0;
    PointLocation location = PointLocation::Outside;
};

/// One row per lattice point carrying at least one matching, in lexicographic
/// order, relative to the table's reference matching.
std::vector<MatchingReportRow> matching_report(const DimerModel& g);

}  // namespace dimers
