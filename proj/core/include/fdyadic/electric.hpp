#pragma once

#include "fdyadic/graph.hpp"
#include "fdyadic/numbers.hpp"
#include "fdyadic/tree.hpp"

#include <optional>
#include <vector>

namespace fdyadic {

// ---------------------------------------------------------------------------
// Series-parallel resistance on rooted trees (unit resistors)
// ---------------------------------------------------------------------------

/// Exact effective resistance between the root and the level-n set (all
/// level-n vertices shorted together). Vertices whose subtree dies out before
/// level n are open circuits. Throws when n exceeds the built depth.
BigRational resistance_to_level(const RootedTree& t, int n);

/// Same computation on a self-similar tree, memoized per (type, level).
/// Exact fractions: fine for moderate n, but reduced numerators of the
/// branching trees grow like phi^n digits, so deep levels need the certified
/// interval profile below instead.
BigRational resistance_to_level(const TypeRules& rules, int n);

std::vector<BigRational> resistance_profile(const RootedTree& t, int horizon);

/// Certified enclosure lo <= x <= hi with exact rational endpoints.
struct RationalInterval {
    BigRational lo, hi;

    bool exact() const { return lo == hi; }
    BigRational width() const { return hi - lo; }
    double mid() const { return (lo.convert_to<double>() + hi.convert_to<double>()) / 2; }
};

/// R_1..R_horizon as certified enclosures. The resistance recursion is
/// monotone in the child values, so evaluating it on interval endpoints and
/// rounding outward onto the dyadic grid 2^-precision_bits keeps every bound
/// rigorous while the endpoints stay small.
std::vector<RationalInterval> resistance_profile(const TypeRules& rules, int horizon,
                                                 unsigned precision_bits = 192);

// ---------------------------------------------------------------------------
// Capacity
// ---------------------------------------------------------------------------

struct CapacityReport {
    enum class Verdict { Transient, Recurrent, Inconclusive };

    std::vector<RationalInterval> resistance;  // R_1..R_horizon
    bool monotone_increasing = false;          // certified strict increase
    Verdict verdict = Verdict::Inconclusive;
    /// True when the transient verdict carries a certified enclosure: the
    /// upper bound comes from an exactly verified supersolution of the
    /// one-level resistance recursion.
    bool certified = false;
    int root_degree = 0;

    // Enclosure of R_infinity (meaningful for a transient verdict).
    BigRational limit_lower, limit_upper;
    std::optional<BigRational> limit_square;  // known algebraic square, e.g. 2
    std::optional<BigRational> limit_exact;   // known rational limit, e.g. 1

    // capacity = 1/R_infinity, escape probability = capacity / root degree.
    BigRational capacity_lower, capacity_upper;
    BigRational escape_lower, escape_upper;

    double capacity_mid() const {
        return (capacity_lower.convert_to<double>() + capacity_upper.convert_to<double>()) / 2;
    }
    double escape_mid() const {
        return (escape_lower.convert_to<double>() + escape_upper.convert_to<double>()) / 2;
    }
};

CapacityReport capacity_report(const TypeRules& rules, int horizon);
/// Table-only variant for explicit trees: no self-similarity to certify with,
/// so the verdict is heuristic and `certified` stays false.
CapacityReport capacity_report(const RootedTree& t, int horizon);

// ---------------------------------------------------------------------------
// Growth conditions and the capacity lower bound
// ---------------------------------------------------------------------------

/// Constants for the geodesic-count growth conditions on a tree:
///   gd(x, n) <= C q^n for every vertex,  c q^n <= gd(root, n),
/// where gd counts descendants n levels below x. All comparisons are exact in
/// Q(sqrt(5)), so q = phi is handled symbolically. bound = c (q-1) / C is the
/// resulting lower bound on the Dirichlet norm of unit potentials, hence on
/// the capacity of the root.
struct CapacityBoundConstants {
    GoldenNumber q, c, big_c, bound;
    int horizon = 0;
    int c_argmin = 0;
    int big_c_argmax = 0;
    bool conditions_hold = false;
};

CapacityBoundConstants capacity_bound_constants(const TypeRules& rules, const GoldenNumber& q,
                                                int horizon);
/// Explicit-tree variant; only vertices whose depth-horizon cone is fully
/// built participate. Throws VerificationError when some participating count
/// is zero (c would be zero).
CapacityBoundConstants capacity_bound_constants(const RootedTree& t, const GoldenNumber& q,
                                                int horizon);

// ---------------------------------------------------------------------------
// Dirichlet problems on general balls
// ---------------------------------------------------------------------------

/// Finite resistor network with a unit-potential source and a grounded
/// super-node. Conductances carry edge multiplicities.
struct Network {
    static constexpr uint32_t kGround = UINT32_MAX;
    struct Edge {
        uint32_t u, v;  // v may be kGround
        double conductance;
    };
    uint32_t node_count = 0;
    uint32_t source = 0;
    std::vector<Edge> edges;
};

/// Nodes are ball vertices with dist < ground_sphere; the whole sphere
/// `ground_sphere` is shorted into the ground node.
Network network_from_ball(const Ball& ball, uint32_t source, int ground_sphere);
Network network_from_tree(const RootedTree& t, int ground_depth);

struct DirichletSolution {
    std::vector<double> potential;  // per network node; source 1, ground 0
    double energy = 0;              // Dirichlet energy of the harmonic minimizer
    int iterations = 0;
    double residual = 0;
};

/// Conjugate-gradient solve of the interior harmonicity conditions; energy of
/// the solution equals the effective conductance source -> ground. Throws
/// std::runtime_error (with the residual) when the iteration cap is hit.
DirichletSolution dirichlet_solve(const Network& net, double tolerance = 1e-12,
                                  int max_iterations = 20000);

// ---------------------------------------------------------------------------
// Exact Dirichlet solves on trees
// ---------------------------------------------------------------------------

/// Exact harmonic extension on a tree: `boundary[v]`, when set, pins f(v);
/// elsewhere f is harmonic for the conductances (edge v-parent(v) has
/// conductance `conductance_to_parent[v]`, all 1 when the vector is empty).
/// Throws std::invalid_argument when no boundary value is reachable.
std::vector<BigRational> tree_dirichlet_exact(
    const RootedTree& t, const std::vector<std::optional<BigRational>>& boundary,
    const std::vector<BigRational>& conductance_to_parent = {});

}  // namespace fdyadic
