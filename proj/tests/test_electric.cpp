#include "fdyadic/electric.hpp"

#include "fdyadic/errors.hpp"

#include <doctest.h>

#include <random>

using namespace fdyadic;

TEST_CASE("series-parallel resistance on the canonical trees") {
    TypeRules fib = TypeRules::fibonacci();
    CHECK(resistance_to_level(fib, 0) == 0);
    CHECK(resistance_to_level(fib, 1) == BigRational(1, 2));
    CHECK(resistance_to_level(fib, 2) == BigRational(6, 7));

    TypeRules bin = TypeRules::binary();
    for (int n = 1; n <= 20; ++n) {
        BigRational expected = 1 - BigRational(1, BigInt(1) << n);
        CHECK(resistance_to_level(bin, n) == expected);
    }

    TypeRules path = TypeRules::path();
    for (int n = 1; n <= 10; ++n) CHECK(resistance_to_level(path, n) == n);
}

TEST_CASE("explicit and typed trees agree") {
    auto tree = RootedTree::from_rules(TypeRules::fibonacci(), 10);
    for (int n = 0; n <= 10; ++n)
        CHECK(resistance_to_level(tree, n) == resistance_to_level(TypeRules::fibonacci(), n));
    CHECK_THROWS_AS(resistance_to_level(tree, 11), std::invalid_argument);
}

TEST_CASE("resistance is monotone and the interval profile brackets it") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        // Random small type system where every type has 1..3 children.
        int types = 1 + static_cast<int>(rng() % 3);
        TypeRules rules;
        rules.root_type = 0;
        for (int t = 0; t < types; ++t) {
            std::vector<int> kids(1 + rng() % 3);
            for (auto& k : kids) k = static_cast<int>(rng() % types);
            rules.children_of_type.push_back(kids);
        }
        auto profile = resistance_profile(rules, 12);
        BigRational prev = 0;
        for (int n = 1; n <= 12; ++n) {
            BigRational exact = resistance_to_level(rules, n);
            CHECK(exact >= prev);
            CHECK(profile[n - 1].lo <= exact);
            CHECK(exact <= profile[n - 1].hi);
            CHECK(profile[n - 1].width() < BigRational(1, BigInt(1) << 150));
            prev = exact;
        }
    }
}

TEST_CASE("fibonacci capacity report") {
    auto report = capacity_report(TypeRules::fibonacci(), 60);
    CHECK(report.monotone_increasing);
    CHECK(report.verdict == CapacityReport::Verdict::Transient);
    CHECK(report.certified);
    CHECK(report.root_degree == 2);
    REQUIRE(report.limit_square.has_value());
    CHECK(*report.limit_square == 2);
    CHECK(report.limit_lower * report.limit_lower < 2);
    CHECK(report.limit_upper * report.limit_upper > 2);
    CHECK(report.limit_upper - report.limit_lower < BigRational(1, 1000000000));
    // R_60^2 within 1e-9 of 2.
    BigRational gap = 2 - report.limit_lower * report.limit_lower;
    CHECK(gap > 0);
    CHECK(gap < BigRational(1, 1000000000));
    CHECK(report.escape_mid() == doctest::Approx(0.3535533906).epsilon(1e-8));
}

TEST_CASE("binary and path capacity reports") {
    auto bin = capacity_report(TypeRules::binary(), 40);
    CHECK(bin.verdict == CapacityReport::Verdict::Transient);
    REQUIRE(bin.limit_exact.has_value());
    CHECK(*bin.limit_exact == 1);
    CHECK(bin.capacity_mid() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(bin.escape_mid() == doctest::Approx(0.5).epsilon(1e-9));

    auto path = capacity_report(TypeRules::path(), 30);
    CHECK(path.verdict == CapacityReport::Verdict::Recurrent);
    CHECK(path.capacity_upper == 0);
    // R_n = n exactly; the dyadic grid represents integers without widening.
    for (size_t i = 0; i < path.resistance.size(); ++i) {
        CHECK(path.resistance[i].exact());
        CHECK(path.resistance[i].lo == BigRational(static_cast<int>(i + 1)));
    }
}

TEST_CASE("bound constants for q = phi") {
    auto fib = capacity_bound_constants(TypeRules::fibonacci(), GoldenNumber::phi(), 30);
    CHECK(fib.c == GoldenNumber(1));
    CHECK(fib.c_argmin == 0);
    CHECK(fib.big_c == GoldenNumber::sqrt5() - GoldenNumber(1));
    CHECK(fib.big_c_argmax == 1);
    CHECK(fib.big_c.str() == "2/phi");
    CHECK(fib.bound == GoldenNumber(BigRational(1, 2)));
    CHECK(fib.conditions_hold);
}

TEST_CASE("bound constants for regular trees are tight") {
    auto bin = capacity_bound_constants(TypeRules::binary(), GoldenNumber(2), 30);
    CHECK(bin.c == GoldenNumber(1));
    CHECK(bin.big_c == GoldenNumber(1));
    CHECK(bin.bound == GoldenNumber(1));
    auto tern = capacity_bound_constants(TypeRules::m_ary(3), GoldenNumber(3), 20);
    CHECK(tern.bound == GoldenNumber(2));  // m - 1
}

TEST_CASE("bound constants errors") {
    CHECK_THROWS_AS(capacity_bound_constants(TypeRules::fibonacci(), GoldenNumber(1), 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        capacity_bound_constants(TypeRules::fibonacci(), GoldenNumber(BigRational(1, 2)), 10),
        std::invalid_argument);
    CHECK_THROWS_AS(capacity_bound_constants(TypeRules::fibonacci(), GoldenNumber::phi(), 0),
                    std::invalid_argument);
    // A finite explicit tree whose root cone dies before the horizon.
    auto tree = RootedTree::from_rules(TypeRules::fibonacci(), 4);
    CHECK_THROWS_AS(capacity_bound_constants(tree, GoldenNumber::phi(), 6),
                    std::invalid_argument);
}

TEST_CASE("explicit-tree bound constants match the typed ones") {
    auto tree = RootedTree::from_rules(TypeRules::fibonacci(), 14);
    auto from_tree = capacity_bound_constants(tree, GoldenNumber::phi(), 7);
    auto typed = capacity_bound_constants(TypeRules::fibonacci(), GoldenNumber::phi(), 7);
    CHECK(from_tree.c == typed.c);
    CHECK(from_tree.big_c == typed.big_c);
    CHECK(from_tree.bound == typed.bound);
}

TEST_CASE("bound is below capacity") {
    auto fib = capacity_bound_constants(TypeRules::fibonacci(), GoldenNumber::phi(), 30);
    auto cap = capacity_report(TypeRules::fibonacci(), 50);
    CHECK(GoldenNumber(cap.capacity_lower) >= fib.bound);

    auto bin = capacity_bound_constants(TypeRules::binary(), GoldenNumber(2), 30);
    auto bin_cap = capacity_report(TypeRules::binary(), 40);
    CHECK(GoldenNumber(BigRational(1) / *bin_cap.limit_exact) == bin.bound);
}

TEST_CASE("exact tree Dirichlet: gambler's ruin") {
    auto path = RootedTree::from_rules(TypeRules::path(), 10);
    std::vector<std::optional<BigRational>> boundary(path.size());
    boundary[0] = BigRational(0);
    // path vertices come in depth order, the deepest is last
    boundary[path.size() - 1] = BigRational(1);
    auto f = tree_dirichlet_exact(path, boundary);
    for (uint32_t v = 0; v < path.size(); ++v)
        CHECK(f[v] == BigRational(path.depth[v], 10));
}

TEST_CASE("dirichlet solver on a single edge") {
    Network net;
    net.node_count = 1;
    net.source = 0;
    net.edges.push_back({0, Network::kGround, 1.0});
    auto sol = dirichlet_solve(net);
    CHECK(sol.potential[0] == doctest::Approx(1.0));
    CHECK(sol.energy == doctest::Approx(1.0));
}

TEST_CASE("dirichlet energy equals tree conductance") {
    for (auto rules : {TypeRules::fibonacci(), TypeRules::binary(), TypeRules::m_ary(3)}) {
        auto tree = RootedTree::from_rules(rules, 9);
        for (int depth : {3, 6, 9}) {
            auto net = network_from_tree(tree, depth);
            auto sol = dirichlet_solve(net, 1e-13);
            double expected = 1.0 / resistance_to_level(tree, depth).convert_to<double>();
            CHECK(sol.energy == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("dirichlet energy decreases with the grounding depth") {
    auto tree = RootedTree::from_rules(TypeRules::fibonacci(), 10);
    double prev = 1e18;
    for (int depth = 2; depth <= 10; depth += 2) {
        auto sol = dirichlet_solve(network_from_tree(tree, depth), 1e-13);
        CHECK(sol.energy < prev + 1e-12);
        prev = sol.energy;
    }
}

TEST_CASE("ball energy dominates the subtree energy") {
    // The ball around the branching root contains the extracted tree plus
    // extra edges; extra edges cannot decrease the conductance.
    Ball ball = Ball::build(BitWord::from_string("101"), 12);
    auto sol = dirichlet_solve(network_from_ball(ball, ball.root(), 12), 1e-12);
    auto tree = RootedTree::from_rules(TypeRules::fibonacci(), 12);
    double tree_energy = 1.0 / resistance_to_level(tree, 12).convert_to<double>();
    CHECK(sol.energy >= tree_energy - 1e-9);
}

TEST_CASE("dirichlet iteration cap raises") {
    auto tree = RootedTree::from_rules(TypeRules::binary(), 10);
    auto net = network_from_tree(tree, 10);
    CHECK_THROWS_AS(dirichlet_solve(net, 1e-14, 1), std::runtime_error);
}
