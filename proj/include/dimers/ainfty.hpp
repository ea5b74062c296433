#pragma once

// The A-infinity category of a dimer model: objects are quiver vertices,
// morphisms are identities, arrows, dual arrows and dual identities, and the
// only operations are the unit/duality products and one cycle product per
// node and starting arrow. Coefficients are integers.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dimers/dimer.hpp"
#include "dimers/matchings.hpp"

namespace dimers {

using BasisId = std::size_t;

struct BasisElement {
    enum class Kind { Identity, Arrow, DualArrow, DualIdentity };
    Kind kind = Kind::Identity;
    std::size_t payload = 0;  ///< object for (dual) identities, edge index for (dual) arrows
    int degree = 0;
    std::size_t source = 0;  ///< element of hom(source, target)
    std::size_t target = 0;
    friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

std::string name(const BasisElement& b);

/// Inputs (a_1, ..., a_k) with a_i in hom(c_{i-1}, c_i); a_1 is applied first.
using OpKey = std::vector<BasisId>;
using LinearCombination = std::map<BasisId, std::int64_t>;

class AinftyCategory {
public:
    AinftyCategory() = default;
    AinftyCategory(std::size_t objects, std::vector<BasisElement> basis);

    std::size_t object_count() const { return objects_; }
    const std::vector<BasisElement>& basis() const { return basis_; }
    const std::map<OpKey, LinearCombination>& ops() const { return ops_; }

    /// Accumulates coef * out into m_k(key). Throws std::logic_error if the
    /// inputs are not composable or the degree is not 2 - k + sum of inputs.
    void add(const OpKey& key, BasisId out, std::int64_t coef);
    /// Replaces m_k(key) outright (used to build mutants in tests).
    void set(const OpKey& key, LinearCombination value);

    /// Basis ids of hom^degree(v, w); degree < 0 means all degrees.
    std::vector<BasisId> hom(std::size_t v, std::size_t w, int degree = -1) const;

    friend bool operator==(const AinftyCategory&, const AinftyCategory&) = default;

private:
    std::size_t objects_ = 0;
    std::vector<BasisElement> basis_;
    std::map<OpKey, LinearCombination> ops_;
};

/// Basis layout of build_category: identities, arrows, dual arrows, dual identities.
struct CategoryLayout {
    std::size_t faces = 0, edges = 0;
    BasisId identity(std::size_t v) const { return v; }
    BasisId arrow(std::size_t e) const { return faces + e; }
    BasisId dual_arrow(std::size_t e) const { return faces + edges + e; }
    BasisId dual_identity(std::size_t v) const { return faces + 2 * edges + v; }
};

/// Sign conventions (the ones under which the relations hold):
///   m2(x, id) = x,  m2(id, x) = (-1)^deg(x) x,
///   m2(a, a^) = id_s^,  m2(a^, a) = -id_t^       for a : s -> t,
///   m_{d-1}(b_{j+1}, ..., b_{j-1}) = +-b_j^      around a node of valence d,
/// where (b_1, ..., b_d) is the arrow cycle around the node, traversed
/// clockwise around white nodes and counterclockwise around black ones, and
/// the sign is + at white nodes, - at black ones. Arguments are written
/// last-applied first as in m_k(a_k, ..., a_1).
AinftyCategory build_category(const DimerModel& g);

struct RelationViolation {
    OpKey tuple;                 ///< (a_1, ..., a_l)
    LinearCombination residual;  ///< nonzero value of the relation
};

struct RelationCheck {
    bool ok = true;
    std::size_t tuples_checked = 0;
    std::optional<RelationViolation> first_violation;  ///< lexicographically smallest tuple
};

/// Evaluates sum (-1)^(deg a_1 + ... + deg a_i - i) m(a_l, ..., m(a_j, ..., a_{i+1}), a_i, ..., a_1)
/// on every tuple where some term can be nonzero.
RelationCheck check_ainfty_relations(const AinftyCategory& c);

/// Every stored operation has output degree 2 - k + sum of input degrees.
bool degrees_consistent(const AinftyCategory& c);

struct DirectedCategory {
    AinftyCategory category;          ///< basis is the surviving subset, in original order
    std::vector<std::size_t> order;   ///< objects from least to greatest
    std::vector<BasisId> original;    ///< basis id in the full category, per surviving element
};

/// order lists every object once, least first.
DirectedCategory directed_subcategory(const AinftyCategory& c, const std::vector<std::size_t>& order);

class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// True iff degree-1 maps between distinct objects are exactly the shared
/// edges outside d and degree-2 maps exactly the shared edges inside d.
/// Throws PreconditionError unless d = {a : s(a) < t(a)} for this order.
bool check_maslov_table(const DimerModel& g, const EdgeSet& d, const std::vector<std::size_t>& order);

struct OrderIndependence {
    enum class Status { Independent, Dependent, NotExhaustive };
    Status status = Status::Independent;
    std::size_t orders = 0;  ///< compatible total orders examined
};

/// Compares the directed categories of every total order compatible with d.
/// Throws PreconditionError if d is not internal.
OrderIndependence order_independence(const DimerModel& g, const EdgeSet& d, std::size_t max_objects = 8);

using IntegerMatrix = std::vector<std::vector<std::int64_t>>;

/// E[i][j] = sum_k (-1)^k dim hom^k(C_i, C_j) in the directed order.
IntegerMatrix euler_matrix(const DirectedCategory& d);
/// E - E^T.
IntegerMatrix intersection_matrix(const DirectedCategory& d);
std::int64_t determinant(const IntegerMatrix& m);

std::string dump_category(const AinftyCategory& c);
std::string matrix_tsv(const IntegerMatrix& m);

}  // namespace dimers
