#pragma once

// Dimer models: bipartite graphs embedded in the torus R^2/Z^2, stored as
// rational node positions plus integer edge offsets. The combinatorial map
// (rotation system, faces, zigzag paths) is derived once at construction.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dimers/geometry.hpp"
#include "dimers/rational.hpp"

namespace dimers {

enum class Color { Black, White };

const char* to_string(Color c);

struct Node {
    int id = 0;
    Color color = Color::Black;
    Rational x, y;  ///< position in [0,1)^2
};

/// The edge lifts to the segment from the black node's position to
/// (white position + offset) in the universal cover.
struct Edge {
    int id = 0;
    int black = 0;  ///< node id
    int white = 0;  ///< node id
    LatticeVector offset;
};

/// Thrown for structurally broken input (dangling ids, duplicates) and by
/// operations that need a model which passed validation.
class DimerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Diagnostic {
    enum class Kind {
        NotBipartite,
        Disconnected,
        EulerCharacteristic,
        FaceNotDisk,
        DuplicateDirection,
        BadRotation,
        IsolatedNode,
        CyclesMissTorus,  ///< cycle classes span a proper sublattice of Z^2
    };
    Kind kind;
    std::string message;
};

const char* to_string(Diagnostic::Kind k);

/// Dart index convention: 2*e is the black->white traversal of edge index e,
/// 2*e+1 the white->black one. Node and edge *indices* are positions in the
/// nodes()/edges() vectors; ids are the user-facing labels from the file.
using Dart = std::size_t;

inline std::size_t dart_edge(Dart d) { return d / 2; }
inline bool dart_from_black(Dart d) { return d % 2 == 0; }
inline Dart dart_reverse(Dart d) { return d ^ 1U; }

struct Arrow {
    std::size_t edge = 0;    ///< edge index (arrow id)
    std::size_t source = 0;  ///< face index
    std::size_t target = 0;  ///< face index
};

/// Dual quiver: arrow i belongs to edge i, from the face on the right of the
/// black->white dart to the face on its left.
struct Quiver {
    std::size_t vertex_count = 0;
    std::vector<Arrow> arrows;
};

struct ZigzagPath {
    std::vector<Dart> darts;
    LatticeVector homology;
    /// For each dart, the lattice translation of the lifted edge it runs along,
    /// relative to the canonical lift (black node in the fundamental domain).
    std::vector<LatticeVector> lifts;
};

struct ConsistencyViolation {
    enum class Kind { NullHomologous, SelfIntersection, ParallelCrossings };
    Kind kind;
    std::vector<std::size_t> paths;  ///< zigzag indices
    std::vector<std::size_t> edges;  ///< edge indices witnessing the violation
    std::string message;
};

struct ConsistencyReport {
    bool consistent = true;
    std::vector<ConsistencyViolation> violations;
};

class DimerModel {
public:
    /// rotations: optional explicit ccw order of incident edge ids per node id.
    DimerModel(std::vector<Node> nodes, std::vector<Edge> edges, std::map<int, std::vector<int>> rotations = {});

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::map<int, std::vector<int>>& explicit_rotations() const { return explicit_rotations_; }

    std::size_t node_index(int id) const;
    std::size_t edge_index(int id) const;

    /// Node indices of an edge's endpoints.
    std::size_t black_of(std::size_t e) const { return edge_black_[e]; }
    std::size_t white_of(std::size_t e) const { return edge_white_[e]; }
    /// Node a dart leaves from / arrives at.
    std::size_t tail(Dart d) const { return dart_from_black(d) ? edge_black_[dart_edge(d)] : edge_white_[dart_edge(d)]; }
    std::size_t head(Dart d) const { return tail(dart_reverse(d)); }
    /// Lattice part of the dart's displacement (+offset for black->white).
    LatticeVector dart_shift(Dart d) const;

    std::size_t dart_count() const { return 2 * edges_.size(); }
    /// Darts leaving each node, counterclockwise.
    const std::vector<Dart>& rotation(std::size_t node) const { return rotation_[node]; }
    std::size_t valence(std::size_t node) const { return rotation_[node].size(); }
    Dart next_ccw(Dart d) const;
    Dart next_cw(Dart d) const;

    /// Structured list of violations; empty means valid.
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
    bool valid() const { return diagnostics_.empty(); }

    /// Face boundaries as dart cycles; every dart has its face on its right.
    const std::vector<std::vector<Dart>>& faces() const;
    std::size_t face_of(Dart d) const;
    std::size_t face_count() const { return faces().size(); }

    std::size_t black_count() const;
    std::size_t white_count() const;

private:
    void require_valid() const;
    void build_rotations();
    void trace_faces();
    void run_checks();

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::map<int, std::vector<int>> explicit_rotations_;

    std::map<int, std::size_t> node_by_id_;
    std::map<int, std::size_t> edge_by_id_;
    std::vector<std::size_t> edge_black_, edge_white_;
    std::vector<std::vector<Dart>> rotation_;
    std::vector<std::size_t> rotation_pos_;  ///< position of each dart in its tail's rotation
    std::vector<std::vector<Dart>> faces_;
    std::vector<std::size_t> face_of_;
    std::vector<Diagnostic> diagnostics_;
};

std::vector<Diagnostic> validate(const DimerModel& g);

const std::vector<std::vector<Dart>>& faces(const DimerModel& g);

Quiver dual_quiver(const DimerModel& g);

/// Faces on the two sides of an edge: {right of black->white, left of it}.
std::pair<std::size_t, std::size_t> faces_of_edge(const DimerModel& g, std::size_t e);

/// Closed paths turning maximally left at white nodes and maximally right at
/// black nodes. Every dart lies on exactly one.
std::vector<ZigzagPath> zigzag_paths(const DimerModel& g);

/// Zigzag criterion: no null-homologous path, no path meeting itself in the
/// universal cover, and no two lifts of distinct paths crossing twice in the
/// same direction.
ConsistencyReport is_consistent(const DimerModel& g);

/// The one-black one-white three-edge tiling of the torus.
DimerModel hexagonal_dimer();

}  // namespace dimers
