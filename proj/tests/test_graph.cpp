#include "fdyadic/graph.hpp"

#include "fdyadic/growth.hpp"
#include "fdyadic/verify.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

using namespace fdyadic;

namespace {

BitWord w(const char* s) { return BitWord::from_string(s); }

std::map<std::string, std::string> neighbor_map(const char* vertex) {
    std::map<std::string, std::string> out;
    for (const auto& nb : neighbors(w(vertex)))
        out[generator_name(nb.g)] = nb.image.to_rational().str();
    return out;
}

}  // namespace

TEST_CASE("neighbor structure at the first few vertices") {
    auto n_half = neighbor_map("1");
    CHECK(n_half["a"] == "1/4");
    CHECK(n_half["a^-1"] == "3/4");
    CHECK(n_half["b"] == "1/2");
    CHECK(n_half["b^-1"] == "1/2");

    auto n_34 = neighbor_map("11");
    CHECK(n_34["a"] == "1/2");
    CHECK(n_34["a^-1"] == "7/8");
    CHECK(n_34["b"] == "5/8");
    CHECK(n_34["b^-1"] == "7/8");  // parallel with a^-1

    auto n_14 = neighbor_map("01");
    CHECK(n_14["a"] == "1/8");
    CHECK(n_14["a^-1"] == "1/2");
    CHECK(n_14["b"] == "1/4");
    CHECK(n_14["b^-1"] == "1/4");
}

TEST_CASE("small balls") {
    Ball b0 = Ball::build(w("1"), 0);
    CHECK(b0.size() == 1);
    CHECK(b0.sphere_sizes() == std::vector<uint64_t>{1});

    Ball b2 = Ball::build(w("1"), 2);
    CHECK(b2.sphere_sizes() == std::vector<uint64_t>{1, 2, 3});
    std::set<std::string> sphere2;
    auto [lo, hi] = b2.sphere_range(2);
    for (uint32_t v = lo; v < hi; ++v) sphere2.insert(b2.value(v).str());
    CHECK(sphere2 == std::set<std::string>{"1/8", "5/8", "7/8"});

    Ball b4 = Ball::build(w("1"), 4);
    CHECK(b4.sphere_sizes() == std::vector<uint64_t>{1, 2, 3, 5, 8});
}

TEST_CASE("sphere sizes follow the Fibonacci law") {
    auto sizes = sphere_sizes(w("1"), 18);
    for (size_t n = 2; n < sizes.size(); ++n)
        CHECK(sizes[n] == sizes[n - 1] + sizes[n - 2]);
    uint64_t cumulative = 0;
    for (size_t n = 0; n < sizes.size(); ++n) {
        cumulative += sizes[n];
        CHECK(BigInt(cumulative) == ball_size(static_cast<int>(n)));
    }
}

TEST_CASE("resource limits are explicit") {
    BallLimits limits;
    limits.max_vertices = 10;
    CHECK_THROWS_AS(Ball::build(w("1"), 6, limits), ResourceLimitError);
    try {
        Ball::build(w("1"), 6, limits);
    } catch (const ResourceLimitError& e) {
        CHECK(std::string(e.what()).find("radius") != std::string::npos);
    }
}

TEST_CASE("geodesic word counts") {
    Ball ball = Ball::build(w("1"), 12);
    CHECK(geodesic_word_count(ball, 0) == 1);
    CHECK(geodesic_word_count(ball, 2) == 4);
    CHECK(geodesic_word_count(ball, 10) == 1024);
    for (int n = 1; n <= 12; ++n)
        CHECK(geodesic_word_count(ball, n) == 2 * geodesic_word_count(ball, n - 1));
    CHECK_THROWS_AS(geodesic_word_count(ball, 13), std::invalid_argument);
}

TEST_CASE("exhaustive small-word oracle") {
    Ball ball = Ball::build(w("1"), 8);
    for (int n = 0; n <= 6; ++n)
        CHECK(verify::brute_force_geodesic_word_count(ball, n) == geodesic_word_count(ball, n));
}

TEST_CASE("cone counts at named vertices") {
    Ball ball = Ball::build(w("1"), 14);
    // Every geodesic passes through the root.
    for (int n = 0; n <= 10; ++n)
        CHECK(cone_point_count(ball, ball.root(), n) == ball.sphere_size(n));

    uint32_t v58 = *ball.find(w("101"));
    CHECK(cone_point_count(ball, v58, 1) == 3);
    uint32_t v34 = *ball.find(w("11"));
    CHECK(cone_point_count(ball, v34, 2) == 4);
    uint32_t v78 = *ball.find(w("111"));
    uint32_t v14 = *ball.find(w("01"));
    for (int n = 0; n <= 8; ++n) {
        CHECK(cone_word_count(ball, v78, n) == (uint64_t(1) << n));
        CHECK(cone_word_count(ball, v14, n) == 1);
        CHECK(cone_point_count(ball, v14, n) == 1);
    }
    CHECK(cone_word_count(ball, v58, 0) == 1);
    CHECK_THROWS_AS(cone_point_count(ball, v58, 13), std::invalid_argument);
}

TEST_CASE("tree-likeness report") {
    Ball b0 = Ball::build(w("1"), 0);
    auto r0 = check_tree_likeness(b0);
    CHECK(r0.collapsed_acyclic());
    CHECK(r0.interior_count == 0);

    Ball b2 = Ball::build(w("1"), 2);
    auto r2 = check_tree_likeness(b2);
    CHECK(r2.collapsed_acyclic());
    CHECK(r2.parallel_pair_count == 1);
    CHECK(b2.value(r2.parallel_pairs_sample[0].first).str() == "3/4");
    CHECK(b2.value(r2.parallel_pairs_sample[0].second).str() == "7/8");
    std::set<std::string> loop_vertices;
    for (uint32_t v : r2.loop_vertices_sample) loop_vertices.insert(b2.value(v).str());
    CHECK(loop_vertices == std::set<std::string>{"1/2", "1/4"});

    Ball b20 = Ball::build(w("1"), 20);
    CHECK(check_tree_likeness(b20).collapsed_acyclic());
}

TEST_CASE("cone classification finds the five classes") {
    Ball ball = Ball::build(w("1"), 14);
    auto classes = classify_cone_types(ball, 6);
    REQUIRE(classes.ok);
    REQUIRE(classes.classes.size() == 5);

    auto label_of = [&](const char* word) { return classes.label[*ball.find(w(word))]; };
    CHECK(label_of("1") == 0);
    CHECK(label_of("01") == 1);
    CHECK(label_of("101") == 2);
    CHECK(label_of("11") == 3);
    CHECK(label_of("111") == 4);

    for (const auto& cls : classes.classes) {
        if (cls.label == 0) {
            CHECK(cls.signature.points == std::vector<uint64_t>{2, 3, 5, 8, 13, 21});
            CHECK(cls.members == 1);  // only the base point
        }
        if (cls.label == 2)
            CHECK(std::vector<uint64_t>(cls.signature.points.begin(),
                                        cls.signature.points.begin() + 4) ==
                  std::vector<uint64_t>{3, 6, 11, 19});
        if (cls.label == 1) {
            CHECK(cls.signature.points == std::vector<uint64_t>(6, 1));
            CHECK(cls.signature.words == std::vector<uint64_t>(6, 1));
        }
        if (cls.label == 4) {
            CHECK(cls.signature.points == std::vector<uint64_t>(6, 1));
            CHECK(cls.signature.words == std::vector<uint64_t>{2, 4, 8, 16, 32, 64});
        }
    }
}

TEST_CASE("classification horizon too large is reported, not thrown") {
    Ball ball = Ball::build(w("1"), 3);
    auto classes = classify_cone_types(ball, 6);
    CHECK_FALSE(classes.ok);
    CHECK_FALSE(classes.message.empty());
}

TEST_CASE("cone counts depend only on the class") {
    Ball ball = Ball::build(w("1"), 16);
    auto classes = classify_cone_types(ball, 6);
    REQUIRE(classes.ok);
    // For every vertex deep enough for a 10-cone, counts must match the
    // class representative's counts.
    std::map<int, std::vector<uint64_t>> per_label;
    for (uint32_t v = 0; v < ball.size(); ++v) {
        if (classes.label[v] < 0 || ball.dist(v) + 10 > ball.radius()) continue;
        std::vector<uint64_t> counts;
        for (int n = 1; n <= 10; ++n) counts.push_back(cone_point_count(ball, v, n));
        auto [it, fresh] = per_label.try_emplace(classes.label[v], counts);
        if (!fresh) CHECK(it->second == counts);
    }
    CHECK(per_label.size() == 5);
}

TEST_CASE("transfer matrices can be recovered from the graph") {
    Ball ball = Ball::build(w("1"), 14);
    auto classes = classify_cone_types(ball, 6);
    REQUIRE(classes.ok);
    auto a = TransferMatrix::word_counts();
    auto b = TransferMatrix::point_counts();
    for (const auto& cls : classes.classes) {
        uint32_t v = cls.representative;
        std::array<int, kConeTypeCount> words{}, points{};
        for (const auto& e : ball.children(v)) {
            int child_label = classes.label[e.to];
            REQUIRE(child_label >= 0);
            words[child_label] += e.mult;
            points[child_label] += 1;
        }
        for (int j = 0; j < kConeTypeCount; ++j) {
            CHECK(words[j] == a.entries[cls.label][j]);
            CHECK(points[j] == b.entries[cls.label][j]);
        }
    }
}

TEST_CASE("branching subtree extraction") {
    Ball ball = Ball::build(w("1"), 14);
    auto classes = classify_cone_types(ball, 6);
    auto extracted = extract_fibonacci_tree(ball, classes);
    const RootedTree& t = extracted.tree;

    CHECK(ball.word(extracted.root_ball_index) == w("101"));
    CHECK(ball.value(extracted.root_ball_index).str() == "5/8");
    CHECK(ball.dist(extracted.root_ball_index) == 2);
    CHECK(extracted.complete_depth == 6);

    // Root: two children, one of each kind.
    REQUIRE(t.child_count(0) == 2);
    std::multiset<int> kinds{t.type[t.child(0, 0)], t.type[t.child(0, 1)]};
    CHECK(kinds == std::multiset<int>{0, 1});

    auto levels = t.level_sizes();
    for (int n = 0; n <= extracted.complete_depth; ++n)
        CHECK(BigInt(levels[n]) == fibonacci_sphere(n));

    for (uint32_t v = 0; v < t.size(); ++v) {
        if (t.depth[v] >= extracted.complete_depth) continue;
        if (t.type[v] == 1) CHECK(t.child_count(v) == 1);
        if (t.type[v] == 1) CHECK(t.type[t.child(v, 0)] == 0);
    }
}

TEST_CASE("collapsed ball converts to a weighted tree") {
    Ball ball = Ball::build(w("101"), 8);
    auto bt = ball_as_tree(ball);
    CHECK(bt.tree.size() == ball.size());
    // Parallel edges become multiplicity-2 parent links.
    bool found_parallel = false;
    for (uint32_t v = 1; v < bt.tree.size(); ++v) {
        CHECK(bt.tree.depth[v] == ball.dist(v));
        if (bt.parent_multiplicity[v] == 2) found_parallel = true;
    }
    CHECK(found_parallel);
}
