#pragma once

// Pull-back of a dimer model along the torus cover R^2/psi(Z^2) -> R^2/Z^2.
// Cover coordinates are taken in the basis given by the columns of `frame`
// (psi itself when det psi > 0, psi * diag(1,-1) otherwise, so the cover's
// coordinates stay positively oriented).

#include <vector>

#include "dimers/dimer.hpp"
#include "dimers/geometry.hpp"
#include "dimers/matchings.hpp"

namespace dimers {

struct FaceLabel {
    std::size_t base_face = 0;
    std::size_t character = 0;  ///< coset index of the lift
    friend auto operator<=>(const FaceLabel&, const FaceLabel&) = default;
};

/// Z^2 / psi(Z^2) with canonical representatives from the Smith form.
class CosetTable {
public:
    explicit CosetTable(const IntegerMatrix2& psi);
    std::size_t size() const { return reps_.size(); }
    const std::vector<LatticeVector>& representatives() const { return reps_; }
    std::size_t index_of(LatticeVector v) const;

private:
    SmithForm s_;
    std::vector<LatticeVector> reps_;
};

struct CoveredDimer {
    DimerModel base;
    IntegerMatrix2 psi;
    IntegerMatrix2 frame;
    DimerModel total;
    CosetTable cosets;
    /// Kernel of transpose(psi) on the torus.
    FiniteAbelianGroup deck_group;
    /// Lift (base index, coset) of each total node / edge.
    std::vector<std::pair<std::size_t, std::size_t>> node_origin, edge_origin;
};

/// Total node (n, c) has id c * |nodes| + n and edge (e, c) id c * |edges| + e,
/// where c is the coset of the black endpoint's translation.
CoveredDimer pullback_dimer(const DimerModel& g, const IntegerMatrix2& psi);

std::vector<FaceLabel> label_faces(const CoveredDimer& c);

/// Total face reached from face f by the deck translation of coset k.
std::size_t deck_translate_face(const CoveredDimer& c, std::size_t f, std::size_t k);

EdgeSet pullback_matching(const CoveredDimer& c, const EdgeSet& d);

struct CoverPolygonCheck {
    LatticePolygon cover;     ///< characteristic polygon of the lifted matching
    LatticePolygon expected;  ///< frame^T applied to the base polygon
    bool equal = false;       ///< up to translation
};

CoverPolygonCheck cover_char_polygon_check(const CoveredDimer& c, const EdgeSet& d);

}  // namespace dimers
