#include "fdyadic/walk.hpp"

#include "fdyadic/electric.hpp"
#include "fdyadic/errors.hpp"
#include "fdyadic/graph.hpp"

#include <doctest.h>

#include <cmath>

using namespace fdyadic;

namespace {

BitWord w(const char* s) { return BitWord::from_string(s); }

WalkConfig config_with(uint32_t walkers, uint32_t steps, uint64_t seed,
                       WalkModel model = WalkModel::CollapsedSimple) {
    WalkConfig c;
    c.model = model;
    c.walkers = walkers;
    c.steps = steps;
    c.seed = seed;
    c.threads = 2;
    return c;
}

/// Exact absorbing solve on the collapsed ball around the cut: probability of
/// reaching the boundary sphere inside the marked branch before any other
/// boundary vertex. Conductances follow the walk model.
BigRational truncation_solve(int radius, const BitWord& entry, const BitWord& start,
                             WalkModel model) {
    Ball ball = Ball::build(w("101"), radius);
    auto bt = ball_as_tree(ball);
    std::vector<std::optional<BigRational>> boundary(bt.tree.size());
    for (uint32_t v = 0; v < bt.tree.size(); ++v) {
        if (ball.dist(v) != radius) continue;
        uint32_t up = v;
        while (ball.dist(up) > 1) up = static_cast<uint32_t>(bt.tree.parent[up]);
        boundary[v] = (ball.word(up) == entry) ? BigRational(1) : BigRational(0);
    }
    std::vector<BigRational> cond(bt.tree.size(), BigRational(1));
    if (model == WalkModel::GeneratorUniform)
        for (uint32_t v = 1; v < bt.tree.size(); ++v) cond[v] = bt.parent_multiplicity[v];
    auto f = tree_dirichlet_exact(bt.tree, boundary, cond);
    return f[*ball.find(start)];
}

}  // namespace

TEST_CASE("estimates carry positive confidence intervals") {
    auto e = make_estimate(0, 100);
    CHECK(e.estimate == 0.0);
    CHECK(e.half_width > 0);
    auto f = make_estimate(50, 100);
    CHECK(f.estimate == 0.5);
    CHECK(f.half_width == doctest::Approx(1.96 * std::sqrt(0.25 / 100)));
    CHECK_THROWS_AS(make_estimate(0, 0), std::invalid_argument);
}

TEST_CASE("walks are deterministic and thread-count independent") {
    auto c1 = config_with(500, 500, 99);
    c1.threads = 1;
    auto c2 = c1;
    c2.threads = 2;
    CHECK(run_escape_tree(TypeRules::fibonacci(), {}, c1).estimate ==
          run_escape_tree(TypeRules::fibonacci(), {}, c2).estimate);
    CHECK(run_escape_graph(w("101"), c1).estimate == run_escape_graph(w("101"), c2).estimate);
}

TEST_CASE("escape from the branching-tree root matches the electric value") {
    auto cap = capacity_report(TypeRules::fibonacci(), 40);
    double target = cap.escape_mid();  // 1/(2 sqrt(2))
    auto est = run_escape_tree(TypeRules::fibonacci(), {}, config_with(4000, 4000, 41));
    double sigma = std::sqrt(target * (1 - target) / 4000);
    CHECK(std::abs(est.estimate - target) < 3 * sigma + 0.01);
}

TEST_CASE("escape from the binary-tree root approaches 1/2") {
    auto est = run_escape_tree(TypeRules::binary(), {}, config_with(4000, 4000, 43));
    CHECK(std::abs(est.estimate - 0.5) < 0.03);
}

TEST_CASE("the path graph is recurrent") {
    auto shallow = run_escape_tree(TypeRules::path(), {}, config_with(2000, 100, 47));
    auto deep = run_escape_tree(TypeRules::path(), {}, config_with(2000, 10000, 47));
    CHECK(deep.estimate <= shallow.estimate);
    CHECK(deep.estimate < 0.05);
}

TEST_CASE("trap frequencies from the root are positive and subadditive") {
    auto traps = run_trap_tree(TypeRules::fibonacci(), {}, config_with(4000, 4000, 53));
    REQUIRE(traps.size() == 2);
    // Quantitative floors from the first-step decomposition with exact branch
    // escape probabilities: (1/2)(2/3)/(2 sqrt(2)) and (1/2)(1/2)(sqrt(2)-1).
    CHECK(traps[0].estimate >= 0.05);
    CHECK(traps[1].estimate >= 0.05);
    CHECK(traps[0].estimate + traps[1].estimate <= 1.0 + traps[0].half_width +
                                                       traps[1].half_width);
}

TEST_CASE("starting deep inside a branch biases its trap") {
    auto traps = run_trap_tree(TypeRules::fibonacci(), {0, 0, 0, 0}, config_with(3000, 3000, 59));
    CHECK(traps[0].estimate > traps[1].estimate);
    CHECK(traps[0].estimate > 0.8);
}

TEST_CASE("generator-uniform agrees with collapsed-simple on the tree") {
    // On the tree the generator-uniform model only adds lazy steps, so both
    // models share the embedded chain and the same settlement limits.
    auto cs = run_trap_tree(TypeRules::fibonacci(), {},
                            config_with(10000, 4000, 61, WalkModel::CollapsedSimple));
    auto gu = run_trap_tree(TypeRules::fibonacci(), {},
                            config_with(10000, 4000, 67, WalkModel::GeneratorUniform));
    for (size_t b = 0; b < cs.size(); ++b) {
        double diff = std::abs(cs[b].estimate - gu[b].estimate);
        CHECK(diff <= cs[b].half_width + gu[b].half_width + 0.01);
    }
}

TEST_CASE("graph escape stays below the truncation bound") {
    // P(no return before exiting the radius-12 sphere) is an upper bound for
    // the true no-return probability; the estimate sits below it.
    Ball ball = Ball::build(w("101"), 12);
    auto bt = ball_as_tree(ball);
    std::vector<std::optional<BigRational>> boundary(bt.tree.size());
    for (uint32_t v = 0; v < bt.tree.size(); ++v)
        if (ball.dist(v) == 12) boundary[v] = BigRational(1);
    boundary[0] = BigRational(0);
    auto f = tree_dirichlet_exact(bt.tree, boundary);
    // First-step average over the root's distinct neighbors.
    BigRational bound_p = 0;
    int nbr = 0;
    for (size_t i = 0; i < bt.tree.child_count(0); ++i) {
        bound_p += f[bt.tree.child(0, i)];
        ++nbr;
    }
    bound_p /= nbr;
    auto est = run_escape_graph(w("101"), config_with(4000, 4000, 71));
    CHECK(est.estimate <= bound_p.convert_to<double>() + 3 * est.half_width);
    CHECK(est.estimate > 0.1);
}

TEST_CASE("trap validation rejects bad specifications") {
    WalkConfig cfg = config_with(10, 10, 1);
    TrapSpec good{w("101"), w("1001")};
    CHECK_THROWS_AS(run_trap_graph(w("101"), {}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(run_trap_graph(w("101"), {good, good}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(run_trap_graph(w("101"), {TrapSpec{w("101"), w("101")}}, cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_trap_graph(w("101"), {TrapSpec{w("101"), w("0101")}}, cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        run_trap_graph(w("101"), {good, TrapSpec{w("11"), w("111")}}, cfg),
        std::invalid_argument);
    // Start too far from the cut to resolve its branch.
    std::vector<Generator> deep(40, Generator::A);
    CHECK_THROWS_AS(run_trap_graph(apply_sequence(deep, w("101")), {good}, cfg),
                    std::invalid_argument);
}

TEST_CASE("harmonic estimates separate the two branches") {
    BitWord cut = w("101");
    BitWord entry = apply_word(Generator::B, cut);  // 1001 = 9/16
    BitWord start1 = apply_sequence(std::vector<Generator>(6, Generator::B), cut);
    std::vector<Generator> other{Generator::AInv, Generator::B, Generator::B,
                                 Generator::B, Generator::B, Generator::B};
    BitWord start2 = apply_sequence(other, cut);

    auto cfg = config_with(3000, 3000, 73);
    auto est = harmonic_estimate({start1, start2}, TrapSpec{cut, entry}, cfg);

    CHECK(est[0].estimate - est[1].estimate > 0.3);
    CHECK(est[0].estimate >= 0.8);

    // Exact truncation solves pin both values; the truncation itself is
    // stable between radius 10 and 12.
    for (int i = 0; i < 2; ++i) {
        const BitWord& start = i == 0 ? start1 : start2;
        BigRational h12 = truncation_solve(12, entry, start, cfg.model);
        BigRational h10 = truncation_solve(10, entry, start, cfg.model);
        double drift = std::abs((h12 - h10).convert_to<double>());
        CHECK(drift < 0.02);
        CHECK(std::abs(est[i].estimate - h12.convert_to<double>()) <
              3 * est[i].half_width + drift + 0.02);
    }
}

TEST_CASE("identical starts agree") {
    BitWord cut = w("101");
    TrapSpec trap{cut, apply_word(Generator::B, cut)};
    BitWord start = apply_sequence(std::vector<Generator>(4, Generator::B), cut);
    auto cfg1 = config_with(2000, 2000, 79);
    auto cfg2 = config_with(2000, 2000, 83);
    auto same_seed = harmonic_estimate({start, start}, trap, cfg1);
    CHECK(same_seed[0].estimate == same_seed[1].estimate);
    auto e1 = harmonic_estimate({start}, trap, cfg1)[0];
    auto e2 = harmonic_estimate({start}, trap, cfg2)[0];
    CHECK(std::abs(e1.estimate - e2.estimate) <= e1.half_width + e2.half_width + 0.01);
}

TEST_CASE("generator-uniform trap estimates agree with the exact weighted solve") {
    BitWord cut = w("101");
    BitWord entry = apply_word(Generator::B, cut);
    BitWord start = apply_sequence(std::vector<Generator>(5, Generator::B), cut);
    auto cfg = config_with(3000, 4000, 89, WalkModel::GeneratorUniform);
    auto est = harmonic_estimate({start}, TrapSpec{cut, entry}, cfg)[0];
    BigRational h12 = truncation_solve(12, entry, start, WalkModel::GeneratorUniform);
    CHECK(std::abs(est.estimate - h12.convert_to<double>()) < 3 * est.half_width + 0.04);
}

TEST_CASE("online membership equals offline recomputation") {
    BitWord cut = w("101");
    std::vector<TrapSpec> traps{{cut, apply_word(Generator::B, cut)},
                                {cut, apply_word(Generator::AInv, cut)}};
    WalkConfig cfg = config_with(1, 1500, 97);
    for (uint32_t walker = 0; walker < 100; ++walker) {
        auto trace = trace_trap_walker(cut, traps, cfg, walker);
        REQUIRE(trace.states.size() == cfg.steps + 1);
        // Recompute membership from the recorded states alone.
        int8_t side = -1;  // starting on the cut
        bool at_cut = true;
        uint32_t last_change = 0;
        for (uint32_t s = 1; s <= cfg.steps; ++s) {
            const BitWord& prev = trace.states[s - 1];
            const BitWord& cur = trace.states[s];
            if (cur == prev) continue;  // lazy step
            if (at_cut) {
                side = -1;
                for (size_t i = 0; i < traps.size(); ++i)
                    if (cur == traps[i].entry) side = static_cast<int8_t>(i);
                at_cut = false;
                last_change = s;
            } else if (cur == cut) {
                at_cut = true;
                last_change = s;
            }
            CHECK(trace.side[s - 1] == (at_cut ? -1 : side));
        }
        int8_t final_side = at_cut ? int8_t{-1} : side;
        CHECK(trace.final_side == final_side);
        CHECK(trace.last_change == last_change);
        for (size_t i = 0; i < traps.size(); ++i) {
            bool settled = final_side == static_cast<int8_t>(i) && last_change <= cfg.steps / 2;
            CHECK(trace.settled_in[i] == (settled ? 1 : 0));
        }
    }
}

TEST_CASE("sampled paths replay the estimator streams") {
    auto cfg = config_with(4, 50, 101);
    auto p0 = sample_graph_path(w("101"), cfg, 0, 50);
    auto p0_again = sample_graph_path(w("101"), cfg, 0, 50);
    auto p1 = sample_graph_path(w("101"), cfg, 1, 50);
    CHECK(p0.size() == 51);
    CHECK(p0 == p0_again);
    CHECK(p0 != p1);
}

TEST_CASE("first-step identity holds exactly") {
    for (int depth : {1, 2, 3, 8}) {
        auto fib = RootedTree::from_rules(TypeRules::fibonacci(), depth);
        for (const auto& item : first_step_identity_check(fib)) {
            CHECK(item.exact_equal);
            CHECK(item.detour_dominates);
            if (depth >= 2) CHECK(item.lhs_with_detour > item.rhs);
        }
        auto bin = RootedTree::from_rules(TypeRules::binary(), depth);
        for (const auto& item : first_step_identity_check(bin)) {
            CHECK(item.exact_equal);
            if (depth >= 2) CHECK(item.lhs_with_detour > item.rhs);
        }
    }
    // Closed form at depth 1: both sides are the entry probability 1/n.
    auto shallow = RootedTree::from_rules(TypeRules::binary(), 1);
    for (const auto& item : first_step_identity_check(shallow)) {
        CHECK(item.lhs == BigRational(1, 2));
        CHECK(item.rhs == BigRational(1, 2));
    }
    auto degenerate = RootedTree::from_rules(TypeRules::path(), 6);
    CHECK_THROWS_AS(first_step_identity_check(degenerate), std::invalid_argument);
}
