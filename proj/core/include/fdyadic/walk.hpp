#pragma once

#include "fdyadic/dyadic.hpp"
#include "fdyadic/numbers.hpp"
#include "fdyadic/tree.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fdyadic {

// ---------------------------------------------------------------------------
// Configuration and estimates
// ---------------------------------------------------------------------------

/// collapsed-simple: uniform over distinct non-loop neighbors (the simple
/// random walk on the collapsed graph). generator-uniform: uniform over the
/// four generators; loops and excluded edges become lazy steps.
enum class WalkModel { CollapsedSimple, GeneratorUniform };

const char* walk_model_name(WalkModel m);
WalkModel parse_walk_model(const std::string& name);

struct WalkConfig {
    WalkModel model = WalkModel::CollapsedSimple;
    uint32_t walkers = 10000;
    uint32_t steps = 10000;
    uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency; results do not depend on it
};

struct WalkEstimate {
    double estimate = 0;
    uint64_t samples = 0;
    double half_width = 0;  // 95% normal-approximation CI with a continuity floor

    double lo() const { return estimate - half_width; }
    double hi() const { return estimate + half_width; }
};

WalkEstimate make_estimate(uint64_t successes, uint64_t samples);

// ---------------------------------------------------------------------------
// Walks on self-similar trees
// ---------------------------------------------------------------------------

/// Fraction of walkers that never revisit their start within the step budget.
/// `start_path` is the child-index path from the root (empty = root).
WalkEstimate run_escape_tree(const TypeRules& rules, const std::vector<int>& start_path,
                             const WalkConfig& config);

struct TreeTrapDetails {
    std::vector<int8_t> final_branch;   // -1 = at root / no branch
    std::vector<uint32_t> last_change;  // last step whose branch indicator moved
    std::vector<uint8_t> settled_in;    // bitmask-free: branch settled into, 0xff if none
};

/// Per root branch: fraction of walkers whose membership in that branch is
/// constant (and positive) over the final half of the trajectory.
std::vector<WalkEstimate> run_trap_tree(const TypeRules& rules,
                                        const std::vector<int>& start_path,
                                        const WalkConfig& config,
                                        TreeTrapDetails* details = nullptr);

// ---------------------------------------------------------------------------
// Walks on the full Schreier graph
// ---------------------------------------------------------------------------

WalkEstimate run_escape_graph(const BitWord& start, const WalkConfig& config);

/// A trap is the branch of the cut vertex entered at `entry`; membership is
/// tracked online by the side of the last crossing of `cut`. The cut vertex
/// is validated against a ball: the collapsed neighborhood must be a tree,
/// so branches are separated by the cut.
struct TrapSpec {
    BitWord cut;
    BitWord entry;
};

std::vector<WalkEstimate> run_trap_graph(const BitWord& start,
                                         const std::vector<TrapSpec>& traps,
                                         const WalkConfig& config);

/// Monte Carlo estimate, per start vertex, of the probability of eventually
/// staying inside the marked branch. Two starts with separated estimates
/// witness a nonconstant bounded harmonic function.
std::vector<WalkEstimate> harmonic_estimate(const std::vector<BitWord>& starts,
                                            const TrapSpec& trap, const WalkConfig& config);

/// Replays one walker of run_trap_graph, recording every state; used to check
/// the online membership tracking against recomputation from scratch.
struct GraphTrace {
    std::vector<BitWord> states;     // states[0] = start, then one per step
    std::vector<int8_t> side;        // online side after each step (-1 = none)
    int8_t final_side = -1;
    uint32_t last_change = 0;
    std::vector<uint8_t> settled_in;  // per trap
};

GraphTrace trace_trap_walker(const BitWord& start, const std::vector<TrapSpec>& traps,
                             const WalkConfig& config, uint32_t walker_index);

/// Replays one walker's trajectory (the same random stream the estimators
/// consume); states[0] is the start, then one entry per step, lazy steps
/// repeating the previous state. Capped at max_steps entries.
std::vector<BitWord> sample_graph_path(const BitWord& start, const WalkConfig& config,
                                       uint32_t walker_index, uint32_t max_steps);

// ---------------------------------------------------------------------------
// First-step identity on trees
// ---------------------------------------------------------------------------

/// Exact relation for the no-return event through a root branch, on a finite
/// truncation with the deepest level absorbing. With n root branches:
///
///   P(step to v_i, stay off the root, never revisit v_i)
///     = (1/n) * ((deg v_i - 1)/deg v_i) * P(branch walk never revisits v_i)
///
/// Both sides are computed by independent exact rational solves (the left on
/// the full tree, the right on the branch alone). The variant without the
/// stay-off-the-root restriction can only be larger: trajectories may detour
/// through the root and escape elsewhere.
struct FirstStepIdentity {
    uint32_t branch_child = 0;  // tree index of v_i
    BigRational lhs;
    BigRational rhs;
    BigRational lhs_with_detour;
    bool exact_equal = false;
    bool detour_dominates = false;
};

/// Runs the check for every root branch, with the tree's built depth as the
/// absorption level. Throws std::invalid_argument when the root has fewer
/// than two branches.
std::vector<FirstStepIdentity> first_step_identity_check(const RootedTree& t);

}  // namespace fdyadic
