#include "fdyadic/graph.hpp"

#include "fdyadic/growth.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace fdyadic {

NeighborList neighbors(const BitWord& x) {
    NeighborList out;
    for (size_t i = 0; i < kGenerators.size(); ++i) {
        Generator g = kGenerators[i];
        BitWord img = apply_word(g, x);
        bool loop = img == x;
        out[i] = NeighborEntry{g, std::move(img), loop};
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ball construction
// ---------------------------------------------------------------------------

Ball Ball::build(const BitWord& root, int radius, const BallLimits& limits) {
    if (radius < 0) throw std::invalid_argument("ball radius must be nonnegative");
    if (!root.canonical()) throw std::invalid_argument("ball root must be canonical");
    Ball b;
    b.radius_ = radius;
    const uint64_t root_code = root.to_packed();
    b.words_.push_back(root_code);
    b.dist_.push_back(0);
    b.loops_.push_back(0);
    b.index_.reserve(1 << 16);
    b.index_.emplace(root_code, 0);
    b.sphere_off_ = {0, 1};
    b.child_off_.push_back(0);
    b.pred_off_.assign(2, 0);

    // (child, parent, mult) edges of the level being discovered
    std::vector<std::tuple<uint32_t, uint32_t, uint8_t>> level_edges;

    for (int d = 0; d < radius; ++d) {
        const uint32_t begin = b.sphere_off_[d], end = b.sphere_off_[d + 1];
        if (begin == end) break;
        level_edges.clear();
        for (uint32_t v = begin; v < end; ++v) {
            std::array<std::pair<uint32_t, uint8_t>, 4> local;
            int nlocal = 0;
            const uint64_t code = b.words_[v];
            for (Generator g : kGenerators) {
                uint64_t img;
                try {
                    img = apply_packed(g, code);
                } catch (const std::overflow_error&) {
                    throw ResourceLimitError(
                        "word length budget exceeded while expanding to radius " +
                            std::to_string(d + 1) + "; ball complete through radius " +
                            std::to_string(d),
                        d);
                }
                if (img == code) {
                    ++b.loops_[v];
                    continue;
                }
                uint32_t u;
                auto it = b.index_.find(img);
                if (it == b.index_.end()) {
                    if (b.words_.size() >= limits.max_vertices)
                        throw ResourceLimitError(
                            "vertex budget exceeded while expanding to radius " +
                                std::to_string(d + 1) + "; ball complete through radius " +
                                std::to_string(d),
                            d);
                    u = static_cast<uint32_t>(b.words_.size());
                    b.words_.push_back(img);
                    b.dist_.push_back(static_cast<uint8_t>(d + 1));
                    b.loops_.push_back(0);
                    b.index_.emplace(img, u);
                } else {
                    u = it->second;
                    const int du = b.dist_[u];
                    if (du == d) {
                        if (v < u) b.horizontal_.emplace_back(v, u);
                        continue;
                    }
                    if (du == d - 1) continue;  // recorded when u was expanded
                }
                bool merged = false;
                for (int i = 0; i < nlocal; ++i)
                    if (local[i].first == u) {
                        ++local[i].second;
                        merged = true;
                        break;
                    }
                if (!merged) local[nlocal++] = {u, 1};
            }
            for (int i = 0; i < nlocal; ++i) {
                b.child_edges_.push_back({local[i].first, local[i].second});
                level_edges.emplace_back(local[i].first, v, local[i].second);
            }
            b.child_off_.push_back(b.child_edges_.size());
        }
        b.sphere_off_.push_back(static_cast<uint32_t>(b.words_.size()));

        // Predecessor lists of the new sphere, grouped per child by counting sort.
        const uint32_t cbegin = end;
        const uint32_t ccount = static_cast<uint32_t>(b.words_.size()) - cbegin;
        std::vector<uint32_t> counts(ccount + 1, 0);
        for (const auto& [c, p, m] : level_edges) counts[c - cbegin + 1]++;
        for (uint32_t i = 1; i <= ccount; ++i) counts[i] += counts[i - 1];
        const uint64_t base = b.pred_edges_.size();
        b.pred_edges_.resize(base + level_edges.size());
        std::vector<uint32_t> cursor(counts.begin(), counts.end() - 1);
        for (const auto& [c, p, m] : level_edges)
            b.pred_edges_[base + cursor[c - cbegin]++] = DagEdge{p, m};
        for (uint32_t i = 1; i <= ccount; ++i) b.pred_off_.push_back(base + counts[i]);
    }

    while (b.child_off_.size() < b.words_.size() + 1)
        b.child_off_.push_back(b.child_edges_.size());

    // Collapse duplicate horizontal records (two generators can realize one edge).
    std::sort(b.horizontal_.begin(), b.horizontal_.end());
    b.horizontal_.erase(std::unique(b.horizontal_.begin(), b.horizontal_.end()),
                        b.horizontal_.end());
    return b;
}

std::optional<uint32_t> Ball::find(const BitWord& w) const {
    if (w.size() > 62) return std::nullopt;
    return find_packed(w.to_packed());
}

std::optional<uint32_t> Ball::find_packed(uint64_t code) const {
    auto it = index_.find(code);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::pair<uint32_t, uint32_t> Ball::sphere_range(int n) const {
    if (n < 0 || n >= static_cast<int>(sphere_off_.size()) - 1)
        throw std::invalid_argument("sphere index outside built radius");
    return {sphere_off_[n], sphere_off_[n + 1]};
}

uint64_t Ball::sphere_size(int n) const {
    auto [a, b] = sphere_range(n);
    return b - a;
}

std::vector<uint64_t> Ball::sphere_sizes() const {
    std::vector<uint64_t> out;
    out.reserve(radius_ + 1);
    for (int n = 0; n <= radius_; ++n) out.push_back(sphere_size(n));
    return out;
}

std::span<const Ball::DagEdge> Ball::children(uint32_t v) const {
    return {child_edges_.data() + child_off_[v],
            static_cast<size_t>(child_off_[v + 1] - child_off_[v])};
}

std::span<const Ball::DagEdge> Ball::predecessors(uint32_t v) const {
    return {pred_edges_.data() + pred_off_[v],
            static_cast<size_t>(pred_off_[v + 1] - pred_off_[v])};
}

std::vector<uint64_t> sphere_sizes(const BitWord& p, int radius) {
    return Ball::build(p, radius).sphere_sizes();
}

// ---------------------------------------------------------------------------
// Geodesic counting
// ---------------------------------------------------------------------------

uint64_t geodesic_word_count(const Ball& ball, int n) {
    if (n < 0 || n > ball.radius())
        throw std::invalid_argument("geodesic word count needs a ball of radius >= n");
    auto [begin, end] = ball.sphere_range(n);
    std::vector<uint64_t> count(end, 0);
    count[0] = 1;
    for (uint32_t v = 0; v < end; ++v) {
        if (ball.dist(v) >= n) continue;
        for (const auto& e : ball.children(v))
            if (e.to < end) count[e.to] += count[v] * e.mult;
    }
    uint64_t total = 0;
    for (uint32_t v = begin; v < end; ++v) total += count[v];
    return total;
}

namespace {

void require_cone(const Ball& ball, uint32_t x, int n) {
    if (x >= ball.size()) throw std::invalid_argument("vertex outside ball");
    if (n < 0 || ball.dist(x) + n > ball.radius())
        throw std::invalid_argument("cone horizon exceeds built radius");
}

}  // namespace

uint64_t cone_point_count(const Ball& ball, uint32_t x, int n) {
    require_cone(ball, x, n);
    std::vector<uint32_t> frontier{x};
    for (int depth = 0; depth < n; ++depth) {
        std::vector<uint32_t> next;
        for (uint32_t v : frontier)
            for (const auto& e : ball.children(v)) next.push_back(e.to);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        frontier = std::move(next);
    }
    return frontier.size();
}

uint64_t cone_word_count(const Ball& ball, uint32_t x, int n) {
    require_cone(ball, x, n);
    std::vector<std::pair<uint32_t, uint64_t>> frontier{{x, 1}};
    for (int depth = 0; depth < n; ++depth) {
        std::vector<std::pair<uint32_t, uint64_t>> next;
        for (const auto& [v, c] : frontier)
            for (const auto& e : ball.children(v)) next.emplace_back(e.to, c * e.mult);
        std::sort(next.begin(), next.end());
        std::vector<std::pair<uint32_t, uint64_t>> merged;
        for (const auto& [v, c] : next) {
            if (!merged.empty() && merged.back().first == v) merged.back().second += c;
            else merged.emplace_back(v, c);
        }
        frontier = std::move(merged);
    }
    uint64_t total = 0;
    for (const auto& [v, c] : frontier) total += c;
    return total;
}

// ---------------------------------------------------------------------------
// Tree-likeness
// ---------------------------------------------------------------------------

TreeLikenessReport check_tree_likeness(const Ball& ball, size_t sample_cap) {
    TreeLikenessReport r;
    r.radius = ball.radius();
    r.interior_count = ball.radius() == 0 ? 0 : ball.sphere_range(ball.radius()).first;
    for (uint32_t v = 0; v < r.interior_count; ++v) {
        if (ball.loop_count(v) > 0) {
            ++r.loop_vertex_count;
            r.loop_edge_count += ball.loop_count(v);
            if (r.loop_vertices_sample.size() < sample_cap) r.loop_vertices_sample.push_back(v);
        }
        for (const auto& e : ball.children(v)) {
            if (e.mult >= 2) {
                ++r.parallel_pair_count;
                if (r.parallel_pairs_sample.size() < sample_cap)
                    r.parallel_pairs_sample.emplace_back(v, e.to);
            }
        }
    }
    r.horizontal_edge_count = ball.horizontal_edge_count();
    for (uint32_t v = 1; v < ball.size(); ++v)
        if (ball.predecessors(v).size() >= 2) ++r.multi_predecessor_count;
    return r;
}

// ---------------------------------------------------------------------------
// Cone classification
// ---------------------------------------------------------------------------

ConeClassification classify_cone_types(const Ball& ball, int horizon) {
    ConeClassification result;
    result.horizon = horizon;
    result.classified_dist = ball.radius() - horizon;
    result.label.assign(ball.size(), -1);
    if (horizon < 1) {
        result.message = "classification horizon must be at least 1";
        return result;
    }
    if (result.classified_dist < 0) {
        result.message = "ball radius smaller than classification horizon";
        return result;
    }

    // Depth-j cone counts for every vertex whose cone of depth j fits in the
    // ball; entries beyond that line are truncated and never read.
    const uint32_t n = ball.size();
    std::vector<std::vector<uint64_t>> pts(horizon + 1, std::vector<uint64_t>(n, 1));
    std::vector<std::vector<uint64_t>> wds(horizon + 1, std::vector<uint64_t>(n, 1));
    for (int j = 1; j <= horizon; ++j) {
        auto& pj = pts[j];
        auto& wj = wds[j];
        const auto& pprev = pts[j - 1];
        const auto& wprev = wds[j - 1];
        for (uint32_t v = 0; v < n; ++v) {
            uint64_t p = 0, w = 0;
            for (const auto& e : ball.children(v)) {
                p += pprev[e.to];
                w += e.mult * wprev[e.to];
            }
            pj[v] = p;
            wj[v] = w;
        }
    }

    std::map<std::vector<uint64_t>, size_t> class_of_sig;
    const uint32_t classified_end =
        ball.sphere_range(result.classified_dist).second;
    for (uint32_t v = 0; v < classified_end; ++v) {
        std::vector<uint64_t> key;
        key.reserve(2 * horizon);
        for (int j = 1; j <= horizon; ++j) key.push_back(pts[j][v]);
        for (int j = 1; j <= horizon; ++j) key.push_back(wds[j][v]);
        auto [it, inserted] = class_of_sig.try_emplace(key, result.classes.size());
        if (inserted) {
            ConeClass c;
            c.signature.points.assign(key.begin(), key.begin() + horizon);
            c.signature.words.assign(key.begin() + horizon, key.end());
            c.representative = v;
            result.classes.push_back(std::move(c));
        }
        result.classes[it->second].members++;
        result.label[v] = -2;  // provisional: class known, label pending
    }

    // Match against the five expected count sequences.
    auto series_a = recurrence_series(TransferMatrix::word_counts(), horizon);
    auto series_b = recurrence_series(TransferMatrix::point_counts(), horizon);
    std::vector<int> class_label(result.classes.size(), -1);
    for (size_t ci = 0; ci < result.classes.size(); ++ci) {
        for (int t = 0; t < kConeTypeCount; ++t) {
            bool match = true;
            for (int j = 1; j <= horizon && match; ++j) {
                if (BigInt(result.classes[ci].signature.points[j - 1]) != series_b[j][t])
                    match = false;
                if (BigInt(result.classes[ci].signature.words[j - 1]) != series_a[j][t])
                    match = false;
            }
            if (match) {
                class_label[ci] = t;
                break;
            }
        }
        result.classes[ci].label = class_label[ci];
    }

    std::map<std::vector<uint64_t>, size_t> sig_lookup = std::move(class_of_sig);
    for (uint32_t v = 0; v < classified_end; ++v) {
        std::vector<uint64_t> key;
        key.reserve(2 * horizon);
        for (int j = 1; j <= horizon; ++j) key.push_back(pts[j][v]);
        for (int j = 1; j <= horizon; ++j) key.push_back(wds[j][v]);
        result.label[v] = static_cast<int8_t>(class_label[sig_lookup[key]]);
    }

    if (result.classes.size() != static_cast<size_t>(kConeTypeCount)) {
        result.message = "expected 5 signature classes, found " +
                         std::to_string(result.classes.size());
        return result;
    }
    std::array<bool, kConeTypeCount> seen{};
    bool all_matched = true;
    for (size_t ci = 0; ci < result.classes.size(); ++ci) {
        int lbl = class_label[ci];
        if (lbl < 0) {
            all_matched = false;
            result.message = "signature class with representative vertex " +
                             std::to_string(result.classes[ci].representative) +
                             " matches no expected count sequence";
        } else {
            seen[lbl] = true;
        }
    }
    if (all_matched) {
        for (int t = 0; t < kConeTypeCount; ++t)
            if (!seen[t]) {
                all_matched = false;
                result.message = "no class matches type " + std::to_string(t);
            }
    }
    result.ok = all_matched;
    if (result.ok) result.message = "5 classes, all matched";
    return result;
}

// ---------------------------------------------------------------------------
// Branching subtree extraction
// ---------------------------------------------------------------------------

ExtractedTree extract_fibonacci_tree(const Ball& ball, const ConeClassification& classes) {
    if (!classes.ok)
        throw VerificationError("cone classification unavailable: " + classes.message);

    uint32_t root = UINT32_MAX;
    for (uint32_t v = 0; v < classes.label.size(); ++v) {
        if (classes.label[v] == 2) {
            root = v;
            break;
        }
    }
    if (root == UINT32_MAX)
        throw VerificationError("no branching (type-2) vertex found in the classified region");
    {
        auto [a, b] = ball.sphere_range(ball.dist(root));
        int same = 0;
        for (uint32_t v = a; v < b; ++v)
            if (classes.label[v] == 2) ++same;
        if (same != 1)
            throw VerificationError("branching root ambiguous: " + std::to_string(same) +
                                    " type-2 vertices at distance " +
                                    std::to_string(ball.dist(root)));
    }

    ExtractedTree out;
    out.root_ball_index = root;
    out.complete_depth = classes.classified_dist - ball.dist(root);
    if (out.complete_depth < 0)
        throw VerificationError("classified region does not reach the branching root");

    RootedTree& t = out.tree;
    t.max_depth = out.complete_depth;
    std::unordered_map<uint32_t, uint32_t> tree_index;
    out.ball_index.push_back(root);
    t.parent.push_back(-1);
    t.depth.push_back(0);
    t.type.push_back(0);
    tree_index.emplace(root, 0);

    for (uint32_t ti = 0; ti < out.ball_index.size(); ++ti) {
        t.child_off.push_back(static_cast<uint32_t>(t.child_idx.size()));
        if (t.depth[ti] == out.complete_depth) continue;
        const uint32_t bv = out.ball_index[ti];
        for (const auto& e : ball.children(bv)) {
            int lbl = classes.label[e.to];
            if (lbl != 2 && lbl != 3) continue;
            if (e.mult != 1)
                throw VerificationError("parallel edge inside the extracted tree at ball vertex " +
                                        std::to_string(bv));
            if (tree_index.count(e.to))
                throw VerificationError("extracted subgraph is not a tree: vertex " +
                                        std::to_string(e.to) + " has two tree parents");
            uint32_t ci = static_cast<uint32_t>(out.ball_index.size());
            tree_index.emplace(e.to, ci);
            out.ball_index.push_back(e.to);
            t.parent.push_back(static_cast<int32_t>(ti));
            t.depth.push_back(static_cast<uint16_t>(t.depth[ti] + 1));
            t.type.push_back(lbl == 2 ? 0 : 1);
            t.child_idx.push_back(ci);
        }
    }
    t.child_off.push_back(static_cast<uint32_t>(t.child_idx.size()));

    // Child pattern: branching vertices get one branching and one passing
    // child, passing vertices get exactly one branching child.
    for (uint32_t ti = 0; ti < t.size(); ++ti) {
        if (t.depth[ti] >= out.complete_depth) continue;
        size_t branching = 0, passing = 0;
        for (size_t i = 0; i < t.child_count(ti); ++i) {
            int8_t ct = t.type[t.child(ti, i)];
            if (ct == 0) ++branching;
            else ++passing;
        }
        bool ok = t.type[ti] == 0 ? (branching == 1 && passing == 1)
                                  : (branching == 1 && passing == 0);
        if (!ok)
            throw VerificationError(
                "extracted tree child pattern broken at tree vertex " + std::to_string(ti) +
                " (type " + std::to_string(t.type[ti]) + ": " + std::to_string(branching) +
                " branching, " + std::to_string(passing) + " passing children)");
    }

    // Every classified branching vertex must be a descendant of the root.
    for (uint32_t v = 0; v < classes.label.size(); ++v)
        if (classes.label[v] == 2 && !tree_index.count(v) &&
            ball.dist(v) <= ball.dist(root) + out.complete_depth)
            throw VerificationError("branching vertex " + std::to_string(v) +
                                    " is not a descendant of the branching root");

    return out;
}

// ---------------------------------------------------------------------------
// Collapsed ball as a tree
// ---------------------------------------------------------------------------

BallTree ball_as_tree(const Ball& ball) {
    if (ball.horizontal_edge_count() > 0)
        throw VerificationError("collapsed ball is not a tree: same-sphere edges present");
    BallTree out;
    RootedTree& t = out.tree;
    const uint32_t n = ball.size();
    t.parent.resize(n);
    t.depth.resize(n);
    t.type.assign(n, -1);
    t.max_depth = ball.radius();
    out.ball_index.resize(n);
    out.parent_multiplicity.resize(n);
    t.child_off.assign(n + 1, 0);
    t.child_idx.reserve(n == 0 ? 0 : n - 1);
    for (uint32_t v = 0; v < n; ++v) {
        out.ball_index[v] = v;
        t.depth[v] = static_cast<uint16_t>(ball.dist(v));
        auto preds = ball.predecessors(v);
        if (v == 0) {
            t.parent[v] = -1;
            out.parent_multiplicity[v] = 0;
        } else {
            if (preds.size() != 1)
                throw VerificationError("collapsed ball is not a tree: vertex " +
                                        std::to_string(v) + " has " +
                                        std::to_string(preds.size()) + " predecessors");
            t.parent[v] = static_cast<int32_t>(preds[0].to);
            out.parent_multiplicity[v] = preds[0].mult;
        }
    }
    for (uint32_t v = 1; v < n; ++v) t.child_off[t.parent[v] + 1]++;
    for (uint32_t i = 1; i <= n; ++i) t.child_off[i] += t.child_off[i - 1];
    std::vector<uint32_t> cursor(t.child_off.begin(), t.child_off.end() - 1);
    t.child_idx.resize(n == 0 ? 0 : n - 1);
    for (uint32_t v = 1; v < n; ++v) t.child_idx[cursor[t.parent[v]]++] = v;
    return out;
}

}  // namespace fdyadic
