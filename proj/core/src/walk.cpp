#include "fdyadic/walk.hpp"

#include "fdyadic/electric.hpp"
#include "fdyadic/errors.hpp"
#include "fdyadic/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace fdyadic {

const char* walk_model_name(WalkModel m) {
    return m == WalkModel::CollapsedSimple ? "collapsed-simple" : "generator-uniform";
}

WalkModel parse_walk_model(const std::string& name) {
    if (name == "collapsed-simple" || name == "simple") return WalkModel::CollapsedSimple;
    if (name == "generator-uniform" || name == "generator") return WalkModel::GeneratorUniform;
    throw std::invalid_argument("unknown walk model: " + name);
}

WalkEstimate make_estimate(uint64_t successes, uint64_t samples) {
    if (samples == 0) throw std::invalid_argument("estimate needs at least one sample");
    WalkEstimate e;
    e.samples = samples;
    e.estimate = static_cast<double>(successes) / static_cast<double>(samples);
    double se = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(samples));
    e.half_width = std::max(1.96 * se, 0.5 / static_cast<double>(samples));
    return e;
}

// ---------------------------------------------------------------------------
// Deterministic per-walker randomness
// ---------------------------------------------------------------------------

namespace {

uint64_t splitmix64(uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// xoshiro256++, seeded per (master seed, walker index); the stream does not
/// depend on thread scheduling, so results are reproducible bit for bit.
struct Rng {
    uint64_t s[4];

    Rng(uint64_t master, uint64_t walker) {
        uint64_t x = master ^ (0x9E3779B97F4A7C15ull * (walker + 1));
        for (auto& si : s) si = splitmix64(x);
    }

    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    uint64_t next() {
        uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    uint32_t below(uint32_t k) {
        return static_cast<uint32_t>((static_cast<unsigned __int128>(next()) * k) >> 64);
    }
};

void run_partitioned(uint32_t walkers, int threads, const std::function<void(uint32_t)>& work) {
    unsigned hw = std::thread::hardware_concurrency();
    unsigned t = threads > 0 ? static_cast<unsigned>(threads) : (hw ? hw : 1);
    t = std::min<unsigned>(t, std::max<uint32_t>(walkers, 1));
    if (t <= 1) {
        for (uint32_t w = 0; w < walkers; ++w) work(w);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    uint32_t chunk = (walkers + t - 1) / t;
    for (unsigned i = 0; i < t; ++i) {
        uint32_t lo = i * chunk, hi = std::min(walkers, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &work] {
            for (uint32_t w = lo; w < hi; ++w) work(w);
        });
    }
    for (auto& th : pool) th.join();
}

void validate_config(const WalkConfig& c) {
    if (c.walkers == 0 || c.steps == 0)
        throw std::invalid_argument("walker and step budgets must be positive");
}

// ---------------------------------------------------------------------------
// Stepping on the full graph
// ---------------------------------------------------------------------------

/// One step of the chosen model; returns false for a lazy step. The distinct
/// non-loop neighbor structure depends only on which of the intervals
/// (0,1/2], (1/2,3/4), [3/4,7/8), [7/8,1) the value lies in:
///   (0,1/2]   b, b^-1 are loops; a, a^-1 distinct        -> 2 choices
///   (1/2,3/4) all four images distinct                   -> 4 choices
///   [3/4,7/8) a^-1 and b^-1 coincide                     -> 3 choices
///   [7/8,1)   a with b, and a^-1 with b^-1, coincide     -> 2 choices
bool graph_step(BitWord& w, WalkModel model, Rng& rng) {
    if (model == WalkModel::GeneratorUniform) {
        Generator g = kGenerators[rng.below(4)];
        if ((g == Generator::B || g == Generator::BInv) && (w[0] == 0 || w.size() == 1))
            return false;  // loop: lazy step
        apply_word_inplace(g, w);
        return true;
    }
    Generator g;
    if (w[0] == 0 || w.size() == 1) {
        g = rng.below(2) ? Generator::AInv : Generator::A;
    } else if (w[1] == 0) {
        g = kGenerators[rng.below(4)];
    } else if (w.size() > 2 && w[2] == 1) {
        g = rng.below(2) ? Generator::AInv : Generator::A;  // a=b, a^-1=b^-1
    } else {
        switch (rng.below(3)) {
            case 0: g = Generator::A; break;
            case 1: g = Generator::B; break;
            default: g = Generator::AInv; break;  // = b^-1
        }
    }
    apply_word_inplace(g, w);
    return true;
}

bool words_equal(const BitWord& a, const BitWord& b) {
    return a.size() == b.size() && a == b;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tree walks
// ---------------------------------------------------------------------------

namespace {

struct TreeWalker {
    const TypeRules& rules;
    std::vector<int8_t> path;   // child indices from the root
    std::vector<int8_t> types;  // types[d] = type at depth d; types[0] = root

    TreeWalker(const TypeRules& r, const std::vector<int>& start_path) : rules(r) {
        types.push_back(static_cast<int8_t>(r.root_type));
        for (int c : start_path) {
            const auto& kids = rules.children_of_type[types.back()];
            if (c < 0 || c >= static_cast<int>(kids.size()))
                throw std::invalid_argument("start path leaves the tree");
            path.push_back(static_cast<int8_t>(c));
            types.push_back(static_cast<int8_t>(kids[c]));
        }
    }

    size_t depth() const { return path.size(); }
    int cur_type() const { return types.back(); }
    size_t child_count() const { return rules.children_of_type[cur_type()].size(); }

    void push(int c) {
        path.push_back(static_cast<int8_t>(c));
        types.push_back(static_cast<int8_t>(rules.children_of_type[types.back()][c]));
    }
    void pop() {
        path.pop_back();
        types.pop_back();
    }

    /// Returns false for a lazy step.
    bool step(WalkModel model, Rng& rng) {
        size_t kids = child_count();
        if (model == WalkModel::CollapsedSimple) {
            size_t choices = kids + (depth() > 0 ? 1 : 0);
            uint32_t r = rng.below(static_cast<uint32_t>(choices));
            if (r < kids) push(static_cast<int>(r));
            else pop();
            return true;
        }
        // generator-uniform: four slots; children, then parent, rest lazy.
        uint32_t r = rng.below(4);
        if (r < kids) {
            push(static_cast<int>(r));
            return true;
        }
        if (r == kids && depth() > 0) {
            pop();
            return true;
        }
        return false;
    }
};

}  // namespace

WalkEstimate run_escape_tree(const TypeRules& rules, const std::vector<int>& start_path,
                             const WalkConfig& config) {
    validate_config(config);
    const size_t start_depth = start_path.size();
    std::vector<uint8_t> escaped(config.walkers, 0);
    run_partitioned(config.walkers, config.threads, [&](uint32_t wi) {
        Rng rng(config.seed, wi);
        TreeWalker walker(rules, start_path);
        // cpl = length of the common prefix of the current path and the start
        // path; the walker is back at the start iff cpl == depth == start depth.
        size_t cpl = start_depth;
        bool returned = false;
        for (uint32_t s = 0; s < config.steps && !returned; ++s) {
            size_t before = walker.depth();
            if (!walker.step(config.model, rng)) continue;
            if (walker.depth() < before) {
                cpl = std::min(cpl, walker.depth());
            } else if (before == cpl && before < start_depth &&
                       walker.path.back() == static_cast<int8_t>(start_path[before])) {
                ++cpl;
            }
            if (walker.depth() == start_depth && cpl == start_depth) returned = true;
        }
        escaped[wi] = returned ? 0 : 1;
    });
    uint64_t count = 0;
    for (uint8_t e : escaped) count += e;
    return make_estimate(count, config.walkers);
}

std::vector<WalkEstimate> run_trap_tree(const TypeRules& rules,
                                        const std::vector<int>& start_path,
                                        const WalkConfig& config, TreeTrapDetails* details) {
    validate_config(config);
    const size_t branches = rules.children_of_type[rules.root_type].size();
    if (branches < 2)
        throw std::invalid_argument("trap analysis needs at least two root branches");
    std::vector<int8_t> final_branch(config.walkers, -1);
    std::vector<uint32_t> last_change(config.walkers, 0);
    run_partitioned(config.walkers, config.threads, [&](uint32_t wi) {
        Rng rng(config.seed, wi);
        TreeWalker walker(rules, start_path);
        int8_t branch = walker.depth() > 0 ? walker.path[0] : -1;
        uint32_t changed_at = 0;
        for (uint32_t s = 1; s <= config.steps; ++s) {
            if (!walker.step(config.model, rng)) continue;
            int8_t now = walker.depth() > 0 ? walker.path[0] : -1;
            if (now != branch) {
                branch = now;
                changed_at = s;
            }
        }
        final_branch[wi] = branch;
        last_change[wi] = changed_at;
    });
    std::vector<uint64_t> settled(branches, 0);
    std::vector<uint8_t> settled_in(config.walkers, 0xff);
    for (uint32_t wi = 0; wi < config.walkers; ++wi) {
        if (final_branch[wi] >= 0 && last_change[wi] <= config.steps / 2) {
            settled[final_branch[wi]]++;
            settled_in[wi] = static_cast<uint8_t>(final_branch[wi]);
        }
    }
    if (details) {
        details->final_branch = std::move(final_branch);
        details->last_change = std::move(last_change);
        details->settled_in = std::move(settled_in);
    }
    std::vector<WalkEstimate> out;
    out.reserve(branches);
    for (size_t b = 0; b < branches; ++b) out.push_back(make_estimate(settled[b], config.walkers));
    return out;
}

// ---------------------------------------------------------------------------
// Graph walks
// ---------------------------------------------------------------------------

WalkEstimate run_escape_graph(const BitWord& start, const WalkConfig& config) {
    validate_config(config);
    if (!start.canonical()) throw std::invalid_argument("invalid start vertex");
    std::vector<uint8_t> escaped(config.walkers, 0);
    run_partitioned(config.walkers, config.threads, [&](uint32_t wi) {
        Rng rng(config.seed, wi);
        BitWord w = start;
        bool returned = false;
        for (uint32_t s = 0; s < config.steps && !returned; ++s) {
            if (!graph_step(w, config.model, rng)) continue;
            if (words_equal(w, start)) returned = true;
        }
        escaped[wi] = returned ? 0 : 1;
    });
    uint64_t count = 0;
    for (uint8_t e : escaped) count += e;
    return make_estimate(count, config.walkers);
}

namespace {

struct TrapContext {
    BitWord cut;
    std::vector<BitWord> entries;
    int8_t start_side = -1;
    bool start_at_cut = false;
};

/// Validates the trap family and resolves which branch the start belongs to.
TrapContext prepare_traps(const BitWord& start, const std::vector<TrapSpec>& traps,
                          int locate_radius = 16) {
    if (traps.empty()) throw std::invalid_argument("no traps given");
    TrapContext ctx;
    ctx.cut = traps[0].cut;
    for (const auto& t : traps) {
        if (!(t.cut == ctx.cut))
            throw std::invalid_argument("overlap check requires a common cut vertex");
        if (t.entry == t.cut) throw std::invalid_argument("trap entry equals its cut vertex");
        for (const auto& seen : ctx.entries)
            if (seen == t.entry) throw std::invalid_argument("overlapping traps: repeated entry");
        ctx.entries.push_back(t.entry);
    }
    // The entry must be a non-loop neighbor of the cut.
    for (const auto& entry : ctx.entries) {
        bool adjacent = false;
        for (const auto& nb : neighbors(ctx.cut))
            if (!nb.loop && nb.image == entry) adjacent = true;
        if (!adjacent)
            throw std::invalid_argument("trap entry is not a neighbor of the cut vertex");
    }
    // Cut-vertex validation: the collapsed neighborhood must be a tree, so
    // removing the cut separates the entries' branches.
    Ball ball = Ball::build(ctx.cut, 8);
    TreeLikenessReport tl = check_tree_likeness(ball);
    if (!tl.collapsed_acyclic())
        throw VerificationError("cut vertex not validated: collapsed ball is not a tree");

    if (words_equal(start, ctx.cut)) {
        ctx.start_at_cut = true;
        return ctx;
    }
    Ball locate = Ball::build(ctx.cut, locate_radius);
    auto idx = locate.find(start);
    if (!idx)
        throw std::invalid_argument("start vertex too far from the cut to resolve its branch");
    uint32_t v = *idx;
    while (locate.dist(v) > 1) v = locate.predecessors(v)[0].to;
    BitWord branch_rep = locate.word(v);
    for (size_t i = 0; i < ctx.entries.size(); ++i)
        if (ctx.entries[i] == branch_rep) ctx.start_side = static_cast<int8_t>(i);
    return ctx;
}

struct TrapWalkOutcome {
    int8_t side = -1;
    uint32_t last_change = 0;
};

template <typename OnStep>
TrapWalkOutcome trap_walk(const BitWord& start, const TrapContext& ctx, const WalkConfig& config,
                          Rng& rng, OnStep&& on_step) {
    BitWord w = start;
    bool at_cut = ctx.start_at_cut;
    int8_t side = ctx.start_side;
    // The branch indicator for trap i is (side == i && !at_cut); a change of
    // (side, at_cut) is recorded as a membership change.
    uint32_t changed_at = 0;
    for (uint32_t s = 1; s <= config.steps; ++s) {
        bool was_at_cut = at_cut;
        if (graph_step(w, config.model, rng)) {
            if (was_at_cut) {
                // Leaving the cut: the target decides the side. Any crossing
                // resets the membership clock, even back into the same branch.
                int8_t now = -1;
                for (size_t i = 0; i < ctx.entries.size(); ++i)
                    if (words_equal(w, ctx.entries[i])) now = static_cast<int8_t>(i);
                at_cut = false;
                side = now;
                changed_at = s;
            } else if (words_equal(w, ctx.cut)) {
                at_cut = true;
                changed_at = s;  // membership drops while sitting on the cut
            }
        }
        on_step(s, w, at_cut ? static_cast<int8_t>(-1) : side);
    }
    TrapWalkOutcome out;
    out.side = at_cut ? static_cast<int8_t>(-1) : side;
    out.last_change = changed_at;
    return out;
}

}  // namespace

std::vector<WalkEstimate> run_trap_graph(const BitWord& start, const std::vector<TrapSpec>& traps,
                                         const WalkConfig& config) {
    validate_config(config);
    TrapContext ctx = prepare_traps(start, traps);
    std::vector<int8_t> final_side(config.walkers, -1);
    std::vector<uint32_t> last_change(config.walkers, 0);
    run_partitioned(config.walkers, config.threads, [&](uint32_t wi) {
        Rng rng(config.seed, wi);
        auto outcome = trap_walk(start, ctx, config, rng, [](uint32_t, const BitWord&, int8_t) {});
        final_side[wi] = outcome.side;
        last_change[wi] = outcome.last_change;
    });
    std::vector<uint64_t> settled(traps.size(), 0);
    for (uint32_t wi = 0; wi < config.walkers; ++wi)
        if (final_side[wi] >= 0 && last_change[wi] <= config.steps / 2) settled[final_side[wi]]++;
    std::vector<WalkEstimate> out;
    out.reserve(traps.size());
    for (size_t i = 0; i < traps.size(); ++i) out.push_back(make_estimate(settled[i], config.walkers));
    return out;
}

std::vector<WalkEstimate> harmonic_estimate(const std::vector<BitWord>& starts,
                                            const TrapSpec& trap, const WalkConfig& config) {
    std::vector<WalkEstimate> out;
    out.reserve(starts.size());
    for (const auto& start : starts)
        out.push_back(run_trap_graph(start, {trap}, config)[0]);
    return out;
}

GraphTrace trace_trap_walker(const BitWord& start, const std::vector<TrapSpec>& traps,
                             const WalkConfig& config, uint32_t walker_index) {
    validate_config(config);
    TrapContext ctx = prepare_traps(start, traps);
    GraphTrace trace;
    trace.states.reserve(config.steps + 1);
    trace.states.push_back(start);
    trace.side.reserve(config.steps);
    Rng rng(config.seed, walker_index);
    auto outcome = trap_walk(start, ctx, config, rng,
                             [&](uint32_t, const BitWord& w, int8_t side) {
                                 trace.states.push_back(w);
                                 trace.side.push_back(side);
                             });
    trace.final_side = outcome.side;
    trace.last_change = outcome.last_change;
    trace.settled_in.assign(traps.size(), 0);
    if (outcome.side >= 0 && outcome.last_change <= config.steps / 2)
        trace.settled_in[outcome.side] = 1;
    return trace;
}

std::vector<BitWord> sample_graph_path(const BitWord& start, const WalkConfig& config,
                                       uint32_t walker_index, uint32_t max_steps) {
    validate_config(config);
    Rng rng(config.seed, walker_index);
    std::vector<BitWord> states{start};
    BitWord w = start;
    uint32_t steps = std::min(config.steps, max_steps);
    for (uint32_t s = 0; s < steps; ++s) {
        graph_step(w, config.model, rng);
        states.push_back(w);
    }
    return states;
}

// ---------------------------------------------------------------------------
// First-step identity
// ---------------------------------------------------------------------------

namespace {

/// Extract the subtree rooted at v as a standalone RootedTree (BFS order).
RootedTree subtree_of(const RootedTree& t, uint32_t v) {
    RootedTree sub;
    std::vector<uint32_t> order{v};
    std::vector<uint32_t> sub_parent{0};
    for (uint32_t i = 0; i < order.size(); ++i) {
        uint32_t u = order[i];
        for (size_t k = 0; k < t.child_count(u); ++k) {
            sub_parent.push_back(i);
            order.push_back(t.child(u, k));
        }
    }
    sub.parent.resize(order.size());
    sub.depth.resize(order.size());
    sub.type.resize(order.size());
    sub.child_off.assign(order.size() + 1, 0);
    sub.parent[0] = -1;
    sub.depth[0] = 0;
    sub.type[0] = t.type.empty() ? int8_t{-1} : t.type[v];
    for (uint32_t i = 1; i < order.size(); ++i) {
        sub.parent[i] = static_cast<int32_t>(sub_parent[i]);
        sub.depth[i] = static_cast<uint16_t>(sub.depth[sub_parent[i]] + 1);
        sub.type[i] = t.type.empty() ? int8_t{-1} : t.type[order[i]];
        sub.child_off[sub_parent[i] + 1]++;
    }
    for (size_t i = 1; i < sub.child_off.size(); ++i) sub.child_off[i] += sub.child_off[i - 1];
    std::vector<uint32_t> cursor(sub.child_off.begin(), sub.child_off.end() - 1);
    sub.child_idx.assign(order.size() - 1, 0);
    for (uint32_t i = 1; i < order.size(); ++i)
        sub.child_idx[cursor[sub.parent[i]]++] = i;
    sub.max_depth = 0;
    for (uint16_t d : sub.depth) sub.max_depth = std::max<int>(sub.max_depth, d);
    return sub;
}

}  // namespace

std::vector<FirstStepIdentity> first_step_identity_check(const RootedTree& t) {
    const int depth = t.max_depth;
    const size_t n = t.child_count(t.root());
    if (n < 2) throw std::invalid_argument("first-step identity needs a root with >= 2 branches");
    if (depth < 1) throw std::invalid_argument("first-step identity needs depth >= 1");

    std::vector<FirstStepIdentity> out;
    BigRational inv_n(1, static_cast<int>(n));

    for (size_t bi = 0; bi < n; ++bi) {
        uint32_t vi = t.child(t.root(), bi);
        FirstStepIdentity item;
        item.branch_child = vi;

        if (depth == 1) {
            // One-step absorption: the walker is absorbed the moment it enters
            // v_i, so everything collapses to the entry probability 1/n.
            item.lhs = inv_n;
            item.rhs = inv_n;
            item.lhs_with_detour = inv_n;
        } else {
            // Full-tree solve: h = P(reach the absorbing level before v_i).
            std::vector<std::optional<BigRational>> boundary(t.size());
            for (uint32_t v = 0; v < t.size(); ++v)
                if (t.depth[v] == depth) boundary[v] = BigRational(1);
            boundary[vi] = BigRational(0);
            auto h = tree_dirichlet_exact(t, boundary);

            const auto deg = static_cast<int>(t.degree(vi));
            BigRational sum_children = 0;
            for (size_t k = 0; k < t.child_count(vi); ++k)
                sum_children += h[t.child(vi, k)];
            item.lhs = inv_n * sum_children / deg;
            item.lhs_with_detour = item.lhs + inv_n * h[t.root()] / deg;

            // Branch-only solve: the subtree at v_i with the same absolute
            // absorption level; P(A') = no-return probability of its own walk.
            RootedTree sub = subtree_of(t, vi);
            if (sub.size() == 1) {
                item.rhs = 0;
            } else {
                std::vector<std::optional<BigRational>> sub_boundary(sub.size());
                for (uint32_t v = 0; v < sub.size(); ++v)
                    if (sub.depth[v] == depth - 1) sub_boundary[v] = BigRational(1);
                sub_boundary[0] = BigRational(0);
                auto hp = tree_dirichlet_exact(sub, sub_boundary);
                BigRational pa = 0;
                for (size_t k = 0; k < sub.child_count(0); ++k) pa += hp[sub.child(0, k)];
                pa /= static_cast<int>(sub.child_count(0));
                item.rhs = inv_n * BigRational(deg - 1, deg) * pa;
            }
        }
        item.exact_equal = item.lhs == item.rhs;
        item.detour_dominates = item.lhs_with_detour >= item.rhs;
        out.push_back(std::move(item));
    }
    return out;
}

}  // namespace fdyadic
