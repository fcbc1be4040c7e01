#include "fdyadic/verify.hpp"

#include "fdyadic/electric.hpp"
#include "fdyadic/growth.hpp"
#include "fdyadic/walk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace fdyadic::verify {

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.str().empty()) detail << "; ";
            detail << what;
        }
    }
    void note(const std::string& what) {
        if (!detail.str().empty()) detail << "; ";
        detail << what;
    }
};

BitWord half() { return BitWord::from_string("1"); }

BigInt plain_fibonacci(int n) {  // F(1) = F(2) = 1
    BigInt a = 0, b = 1;
    for (int i = 0; i < n; ++i) {
        BigInt next = a + b;
        a = b;
        b = next;
    }
    return a;
}

// --- criterion bodies ------------------------------------------------------

void criterion_sphere_sizes(Check& c) {
    auto t0 = Clock::now();
    Ball ball = Ball::build(half(), 25);
    double build_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    auto sizes = ball.sphere_sizes();
    BigInt cumulative = 0;
    for (int n = 0; n <= 25; ++n) {
        c.require(BigInt(sizes[n]) == fibonacci_sphere(n),
                  "sphere " + std::to_string(n) + " = " + std::to_string(sizes[n]));
        cumulative += sizes[n];
        c.require(cumulative == ball_size(n), "ball size mismatch at " + std::to_string(n));
        // Independent closed form: the telescoped sum is fib(n+4) - 2.
        c.require(cumulative == plain_fibonacci(n + 4) - 2,
                  "closed form mismatch at " + std::to_string(n));
    }
    c.require(build_seconds < 5.0,
              "radius-25 ball took " + std::to_string(build_seconds) + "s");
    c.note(std::to_string(ball.size()) + " vertices in " + std::to_string(build_seconds) + "s");
}

void criterion_geodesic_words(Check& c) {
    Ball ball = Ball::build(half(), 18);
    for (int n = 0; n <= 18; ++n) {
        uint64_t got = geodesic_word_count(ball, n);
        c.require(got == (uint64_t(1) << n),
                  "word count at " + std::to_string(n) + " = " + std::to_string(got));
    }
    for (int n = 0; n <= 6; ++n) {
        uint64_t brute = brute_force_geodesic_word_count(ball, n);
        c.require(brute == geodesic_word_count(ball, n),
                  "brute force disagrees at n = " + std::to_string(n));
    }
    c.note("2^n through n=18; brute force agrees through n=6");
}

void criterion_resolvents(Check& c) {
    auto word = resolvent_vector(TransferMatrix::word_counts());
    auto point = resolvent_vector(TransferMatrix::point_counts());
    const std::vector<RationalFunction> expected_word = {
        RationalFunction({1}, {1, -2}), RationalFunction({1}, {1, -1}),
        RationalFunction({1}, {1, -3, 2}), RationalFunction({1}, {1, -3, 2}),
        RationalFunction({1}, {1, -2})};
    const std::vector<RationalFunction> expected_point = {
        RationalFunction({1, 1}, {1, -1, -1}), RationalFunction({1}, {1, -1}),
        RationalFunction({1, 1}, {1, -2, 0, 1}), RationalFunction({1}, {1, -2, 0, 1}),
        RationalFunction({1}, {1, -1})};
    for (int i = 0; i < kConeTypeCount; ++i) {
        c.require(word[i] == expected_word[i],
                  "word component " + std::to_string(i) + " = " + word[i].str());
        c.require(point[i] == expected_point[i],
                  "point component " + std::to_string(i) + " = " + point[i].str());
    }
    c.note("geodesic growth " + word[0].str() + ", orbit growth " + point[0].str());
}

void criterion_cone_classes(Check& c) {
    Ball ball = Ball::build(half(), 20);
    auto classes = classify_cone_types(ball, 6);
    c.require(classes.classes.size() == 5,
              "found " + std::to_string(classes.classes.size()) + " classes");
    c.require(classes.ok, classes.message);
    uint64_t classified = 0;
    for (const auto& cls : classes.classes) classified += cls.members;
    c.note(std::to_string(classified) + " vertices classified into " +
           std::to_string(classes.classes.size()) + " classes (" + classes.message + ")");
}

void criterion_tree_cone_counts(Check& c) {
    Ball ball = Ball::build(half(), 20);
    auto classes = classify_cone_types(ball, 6);
    auto extracted = extract_fibonacci_tree(ball, classes);
    const RootedTree& t = extracted.tree;
    c.require(extracted.complete_depth >= 12,
              "tree only complete to depth " + std::to_string(extracted.complete_depth));

    auto levels = t.level_sizes();
    for (int n = 0; n <= std::min(extracted.complete_depth, 12); ++n)
        c.require(BigInt(levels[n]) == fibonacci_sphere(n),
                  "tree sphere " + std::to_string(n) + " = " + std::to_string(levels[n]));

    uint64_t checked = 0;
    for (uint32_t v = 0; v < t.size(); ++v) {
        int avail = std::min(extracted.complete_depth - t.depth[v], 12);
        if (avail < 1) continue;
        auto counts = t.descendant_level_counts(v, avail);
        for (int n = 1; n <= avail; ++n) {
            BigInt expected =
                t.type[v] == 0 ? fibonacci_sphere(n) : fibonacci_sphere(n - 1);
            if (BigInt(counts[n]) != expected) {
                c.require(false, "cone count mismatch at tree vertex " + std::to_string(v) +
                                     ", depth " + std::to_string(n));
                return;
            }
            ++checked;
        }
    }
    c.note("verified " + std::to_string(checked) + " cone counts over " +
           std::to_string(t.size()) + " tree vertices (root horizon 12)");
}

void criterion_fibonacci_resistance(Check& c) {
    TypeRules fib = TypeRules::fibonacci();
    auto profile = resistance_profile(fib, 60);
    for (size_t i = 1; i < profile.size(); ++i)
        c.require(profile[i].lo > profile[i - 1].hi,
                  "R not certifiably increasing at " + std::to_string(i));
    RationalInterval r60 = profile.back();
    c.require(r60.hi * r60.hi < 2, "R_60 not certifiably below sqrt(2)");
    BigRational gap = 2 - r60.lo * r60.lo;
    c.require(gap < BigRational(1, 1000000000), "R_60^2 within 1e-9 of 2 fails");

    auto report = capacity_report(fib, 60);
    c.require(report.verdict == CapacityReport::Verdict::Transient && report.certified,
              "fibonacci tree not certified transient");
    c.require(report.limit_square && *report.limit_square == 2, "limit square != 2");
    // The enclosure brackets sqrt(2), so capacity = 1/sqrt(2), escape = 1/(2 sqrt(2)).
    c.require(report.limit_lower * report.limit_lower < 2 &&
                  2 < report.limit_upper * report.limit_upper,
              "enclosure does not bracket sqrt(2)");
    c.require(report.limit_upper - report.limit_lower < BigRational(1, 1000000000),
              "enclosure wider than 1e-9");
    c.note("R_60 = " + std::to_string(r60.mid()) + ", |R_60^2-2| <= " +
           std::to_string(gap.convert_to<double>()) + ", escape = " +
           std::to_string(report.escape_mid()));
}

void criterion_bound_constants(Check& c) {
    auto fib = capacity_bound_constants(TypeRules::fibonacci(), GoldenNumber::phi(), 30);
    c.require(fib.c == GoldenNumber(1), "c = " + fib.c.str());
    c.require(fib.big_c == GoldenNumber::sqrt5() - GoldenNumber(1), "C = " + fib.big_c.str());
    c.require(fib.big_c * GoldenNumber::phi() == GoldenNumber(2), "C != 2/phi");
    c.require(fib.bound == GoldenNumber(BigRational(1, 2)), "bound = " + fib.bound.str());
    c.require(fib.conditions_hold, "growth conditions rejected");
    auto fib_cap = capacity_report(TypeRules::fibonacci(), 40);
    c.require(GoldenNumber(fib_cap.capacity_lower) >= fib.bound,
              "bound exceeds fibonacci capacity");

    auto bin = capacity_bound_constants(TypeRules::binary(), GoldenNumber(2), 30);
    c.require(bin.c == GoldenNumber(1) && bin.big_c == GoldenNumber(1) &&
                  bin.bound == GoldenNumber(1),
              "binary constants: c=" + bin.c.str() + " C=" + bin.big_c.str() +
                  " bound=" + bin.bound.str());
    auto bin_cap = capacity_report(TypeRules::binary(), 40);
    c.require(bin_cap.limit_exact && *bin_cap.limit_exact == 1, "binary limit != 1");
    c.require(bin.bound == GoldenNumber(BigRational(1) / *bin_cap.limit_exact),
              "binary bound != capacity");
    c.note("fibonacci: c=" + fib.c.str() + " C=" + fib.big_c.str() + " bound=" +
           fib.bound.str() + " <= capacity; binary: bound = capacity = 1");
}

void criterion_first_step_identity(Check& c) {
    for (int depth : {1, 2, 3, 6, 12}) {
        auto tree = RootedTree::from_rules(TypeRules::fibonacci(), depth);
        for (const auto& item : first_step_identity_check(tree)) {
            c.require(item.exact_equal, "fibonacci depth " + std::to_string(depth) +
                                            ": lhs " + to_string(item.lhs) + " != rhs " +
                                            to_string(item.rhs));
            c.require(item.detour_dominates,
                      "fibonacci depth " + std::to_string(depth) + ": detour bound fails");
        }
    }
    for (int depth : {1, 4, 8, 12}) {
        auto tree = RootedTree::from_rules(TypeRules::binary(), depth);
        for (const auto& item : first_step_identity_check(tree))
            c.require(item.exact_equal && item.detour_dominates,
                      "binary depth " + std::to_string(depth) + " fails");
    }
    c.note("exact rational equality on fibonacci depths {1,2,3,6,12} and binary {1,4,8,12}");
}

void criterion_monte_carlo(Check& c, const Options& options) {
    WalkConfig config;
    config.model = WalkModel::CollapsedSimple;
    config.walkers = 10000;
    config.steps = 10000;
    config.seed = options.seed;
    config.threads = options.threads;

    TypeRules fib = TypeRules::fibonacci();
    auto cap = capacity_report(fib, 50);
    double target = cap.escape_mid();  // 1/(2 sqrt(2))

    auto escape = run_escape_tree(fib, {}, config);
    c.require(std::abs(escape.estimate - target) <= 0.02,
              "escape estimate " + std::to_string(escape.estimate) + " vs " +
                  std::to_string(target));

    auto traps = run_trap_tree(fib, {}, config);
    c.require(traps.size() == 2, "expected two root branches");
    for (size_t i = 0; i < traps.size(); ++i)
        c.require(traps[i].estimate >= 0.05,
                  "trap " + std::to_string(i) + " frequency " +
                      std::to_string(traps[i].estimate));

    // Harmonic separation on the full graph: two starts six levels deep, one
    // per branch of the branching root.
    BitWord root_word = BitWord::from_string("101");
    BitWord entry_branching = apply_word(Generator::B, root_word);
    std::vector<Generator> path1(6, Generator::B);
    std::vector<Generator> path2{Generator::AInv, Generator::B, Generator::B, Generator::B,
                                 Generator::B, Generator::B};
    BitWord start1 = apply_sequence(path1, root_word);
    BitWord start2 = apply_sequence(path2, root_word);
    TrapSpec trap{root_word, entry_branching};
    auto estimates = harmonic_estimate({start1, start2}, trap, config);
    double gap = estimates[0].estimate - estimates[1].estimate;
    c.require(gap > 0.3, "harmonic gap " + std::to_string(gap));
    c.require(gap > 5.0 * (estimates[0].half_width + estimates[1].half_width),
              "5x confidence intervals overlap");
    c.note("escape " + std::to_string(escape.estimate) + " (target " + std::to_string(target) +
           "), traps " + std::to_string(traps[0].estimate) + "/" +
           std::to_string(traps[1].estimate) + ", harmonic gap " + std::to_string(gap));
}

void criterion_orbit_coverage(Check& c) {
    Ball ball = Ball::build(half(), 30);
    int found = 0, total = 0;
    int max_dist = 0;
    for (unsigned k = 1; k <= 8; ++k) {
        for (BigInt m = 1; m < (BigInt(1) << k); m += 2) {
            ++total;
            auto idx = ball.find(BitWord::from_rational(DyadicRational(m, k)));
            if (idx) {
                ++found;
                max_dist = std::max(max_dist, ball.dist(*idx));
            }
        }
    }
    c.require(found == total, std::to_string(total - found) + " of " + std::to_string(total) +
                                  " dyadics with exponent <= 8 missing at radius 30");
    c.note("all " + std::to_string(total) + " dyadics with exponent <= 8 found; max distance " +
           std::to_string(max_dist));
}

}  // namespace

uint64_t brute_force_geodesic_word_count(const Ball& ball, int n) {
    if (n > ball.radius()) throw std::invalid_argument("oracle needs ball radius >= n");
    BitWord root_word = ball.word(ball.root());
    uint64_t count = 0;
    std::vector<Generator> word(n, Generator::A);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == n) {
            BitWord endpoint = apply_sequence(word, root_word);
            auto idx = ball.find(endpoint);
            if (idx && ball.dist(*idx) == n) ++count;
            return;
        }
        for (Generator g : kGenerators) {
            word[pos] = g;
            rec(pos + 1);
        }
    };
    rec(0);
    return count;
}

std::vector<CriterionResult> run_acceptance(const Options& options) {
    struct Entry {
        int id;
        const char* name;
        std::function<void(Check&)> body;
    };
    const std::vector<Entry> entries = {
        {1, "sphere sizes from 1/2 follow the Fibonacci law through n=25 (under 5s)",
         criterion_sphere_sizes},
        {2, "geodesic word counts are 2^n through n=18, brute-force checked through n=6",
         criterion_geodesic_words},
        {3, "resolvent vectors match the closed-form generating functions exactly",
         criterion_resolvents},
        {4, "cone classification on the radius-20 ball yields exactly five matched classes",
         criterion_cone_classes},
        {5, "extracted-tree cone counts reproduce root sphere sizes (shifted for passing)",
         criterion_tree_cone_counts},
        {6, "fibonacci-tree resistance increases to sqrt(2), |R_60^2-2| < 1e-9",
         criterion_fibonacci_resistance},
        {7, "bound constants: c=1, C=2/phi, bound=1/2 <= capacity; binary tree is tight",
         criterion_bound_constants},
        {8, "first-step no-return identity holds exactly on truncations through depth 12",
         criterion_first_step_identity},
        {9, "seeded Monte Carlo: escape near 1/(2*sqrt(2)), positive traps, harmonic gap",
         [&options](Check& c) { criterion_monte_carlo(c, options); }},
        {10, "every dyadic with exponent <= 8 appears within distance 30 of 1/2",
         criterion_orbit_coverage},
    };

    std::vector<CriterionResult> results;
    for (const auto& entry : entries) {
        if (!options.only.empty() &&
            std::find(options.only.begin(), options.only.end(), entry.id) == options.only.end())
            continue;
        CriterionResult r;
        r.id = entry.id;
        r.name = entry.name;
        auto t0 = Clock::now();
        Check check;
        try {
            entry.body(check);
            r.passed = check.ok;
            r.detail = check.detail.str();
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        results.push_back(std::move(r));
    }
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return !results.empty();
}

}  // namespace fdyadic::verify
