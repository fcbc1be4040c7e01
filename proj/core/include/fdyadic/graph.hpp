#pragma once

#include "fdyadic/dyadic.hpp"
#include "fdyadic/errors.hpp"
#include "fdyadic/tree.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fdyadic {

// ---------------------------------------------------------------------------
// Local structure
// ---------------------------------------------------------------------------

struct NeighborEntry {
    Generator g;
    BitWord image;
    bool loop;
};

/// The four labeled images of a vertex; loops and parallel edges preserved.
using NeighborList = std::array<NeighborEntry, 4>;

NeighborList neighbors(const BitWord& x);

// ---------------------------------------------------------------------------
// Balls
// ---------------------------------------------------------------------------

struct BallLimits {
    size_t max_vertices = 32u * 1000 * 1000;
};

/// BFS ball of the Schreier graph around a root vertex. Vertices are interned
/// in discovery order (children scanned a, a^-1, b, b^-1), so indices,
/// spheres and the geodesic predecessor DAG are deterministic.
///
/// Interior vertices (dist < radius) have their full neighbor structure
/// recorded; boundary vertices only carry the edges already seen from the
/// interior side.
class Ball {
public:
    static Ball build(const BitWord& root, int radius, const BallLimits& limits = {});

    int radius() const { return radius_; }
    uint32_t size() const { return static_cast<uint32_t>(words_.size()); }
    uint32_t root() const { return 0; }

    uint64_t packed(uint32_t v) const { return words_[v]; }
    BitWord word(uint32_t v) const { return BitWord::from_packed(words_[v]); }
    DyadicRational value(uint32_t v) const { return word(v).to_rational(); }
    int dist(uint32_t v) const { return dist_[v]; }
    bool interior(uint32_t v) const { return dist_[v] < radius_; }

    std::optional<uint32_t> find(const BitWord& w) const;
    std::optional<uint32_t> find_packed(uint64_t code) const;

    /// Index range [begin, end) of sphere n; vertices of a sphere are contiguous.
    std::pair<uint32_t, uint32_t> sphere_range(int n) const;
    uint64_t sphere_size(int n) const;
    std::vector<uint64_t> sphere_sizes() const;  // spheres 0..radius

    // Geodesic DAG. Multiplicity = number of generators realizing the edge.
    struct DagEdge {
        uint32_t to;
        uint8_t mult;
    };
    std::span<const DagEdge> children(uint32_t v) const;
    std::span<const DagEdge> predecessors(uint32_t v) const;
    uint8_t loop_count(uint32_t v) const { return loops_[v]; }  // interior only

    uint32_t horizontal_edge_count() const { return static_cast<uint32_t>(horizontal_.size()); }
    const std::vector<std::pair<uint32_t, uint32_t>>& horizontal_edges() const {
        return horizontal_;
    }

private:
    int radius_ = 0;
    std::vector<uint64_t> words_;
    std::vector<uint8_t> dist_;
    std::vector<uint8_t> loops_;
    std::vector<uint32_t> sphere_off_;
    std::vector<uint64_t> child_off_;
    std::vector<DagEdge> child_edges_;
    std::vector<uint64_t> pred_off_;
    std::vector<DagEdge> pred_edges_;
    std::vector<std::pair<uint32_t, uint32_t>> horizontal_;
    std::unordered_map<uint64_t, uint32_t> index_;
};

/// Sphere sizes |∂B(p, n)| for n = 0..radius.
std::vector<uint64_t> sphere_sizes(const BitWord& p, int radius);

/// Number of geodesic generator words of length n from the ball's root:
/// parallel edges count separately, loops never. Requires n <= ball.radius().
uint64_t geodesic_word_count(const Ball& ball, int n);

/// Endpoint count of the cone of x at depth n: vertices at dist(x)+n reached
/// by geodesics through x. Parallel edges collapse. Requires dist(x)+n within
/// the ball. Counting assumes the verified tree-likeness of the collapsed
/// ball (see check_tree_likeness).
uint64_t cone_point_count(const Ball& ball, uint32_t x, int n);

/// Multiplicity-weighted geodesic-word count of the cone of x at depth n.
uint64_t cone_word_count(const Ball& ball, uint32_t x, int n);

// ---------------------------------------------------------------------------
// Tree-likeness
// ---------------------------------------------------------------------------

struct TreeLikenessReport {
    int radius = 0;
    uint32_t interior_count = 0;
    uint32_t loop_vertex_count = 0;
    uint64_t loop_edge_count = 0;
    uint32_t parallel_pair_count = 0;
    uint32_t horizontal_edge_count = 0;
    uint32_t multi_predecessor_count = 0;
    std::vector<uint32_t> loop_vertices_sample;
    std::vector<std::pair<uint32_t, uint32_t>> parallel_pairs_sample;

    /// With loops dropped and parallel edges collapsed, the ball is a tree.
    bool collapsed_acyclic() const {
        return horizontal_edge_count == 0 && multi_predecessor_count == 0;
    }
};

TreeLikenessReport check_tree_likeness(const Ball& ball, size_t sample_cap = 32);

// ---------------------------------------------------------------------------
// Cone types
// ---------------------------------------------------------------------------

struct ConeSignature {
    std::vector<uint64_t> points;  // cone endpoint counts at depths 1..k
    std::vector<uint64_t> words;   // cone word counts at depths 1..k
    bool operator==(const ConeSignature&) const = default;
};

struct ConeClass {
    ConeSignature signature;
    uint32_t members = 0;
    uint32_t representative = 0;  // lowest vertex index in the class
    int label = -1;               // 0..4 when matched against the transfer counts
};

struct ConeClassification {
    int horizon = 0;
    int classified_dist = -1;         // vertices with dist <= this are classified
    std::vector<int8_t> label;        // per ball vertex; -1 = unclassified
    std::vector<ConeClass> classes;   // sorted by representative
    bool ok = false;                  // exactly five classes, all matched
    std::string message;
};

/// Classify every vertex with dist + horizon <= radius by the pair
/// (point-signature, word-signature) of its cone, then match the classes
/// against the five expected count sequences. A class count other than five
/// is reported in the diagnostic, not thrown.
ConeClassification classify_cone_types(const Ball& ball, int horizon = 6);

// ---------------------------------------------------------------------------
// The branching subtree
// ---------------------------------------------------------------------------

/// The subtree spanned by the branching (type-2) vertices together with the
/// passing (type-3) vertices attached to them, rooted at the type-2 vertex
/// nearest the ball's root. In the extracted tree, type 0 = branching
/// (two children: one of each kind) and type 1 = passing (one branching
/// child), which is exactly TypeRules::fibonacci().
struct ExtractedTree {
    RootedTree tree;                    // type: 0 branching, 1 passing
    std::vector<uint32_t> ball_index;   // tree vertex -> ball vertex
    uint32_t root_ball_index = 0;
    int complete_depth = 0;             // levels fully classified and present
};

/// Throws VerificationError when the root is not a branching vertex, the
/// subgraph is not a tree, or the child pattern breaks.
ExtractedTree extract_fibonacci_tree(const Ball& ball, const ConeClassification& classes);

// ---------------------------------------------------------------------------
// Collapsed ball as a weighted tree
// ---------------------------------------------------------------------------

/// The collapsed ball (loops dropped, parallel edges merged) as a rooted tree
/// with per-edge multiplicities. Throws VerificationError when the collapsed
/// ball is not a tree.
struct BallTree {
    RootedTree tree;
    std::vector<uint32_t> ball_index;       // tree vertex -> ball vertex
    std::vector<uint8_t> parent_multiplicity;  // edge to parent; 0 at root
};

BallTree ball_as_tree(const Ball& ball);

}  // namespace fdyadic
