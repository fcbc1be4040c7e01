#include "fdyadic/tree.hpp"

#include <stdexcept>

namespace fdyadic {

TypeRules TypeRules::fibonacci() {
    TypeRules r;
    r.children_of_type = {{0, 1}, {0}};
    r.root_type = 0;
    r.name = "fibonacci";
    return r;
}

TypeRules TypeRules::m_ary(int m) {
    if (m < 1) throw std::invalid_argument("m-ary tree needs m >= 1");
    TypeRules r;
    r.children_of_type = {std::vector<int>(m, 0)};
    r.root_type = 0;
    r.name = m == 1 ? "path" : (m == 2 ? "binary" : std::to_string(m) + "-ary");
    return r;
}

RootedTree RootedTree::from_rules(const TypeRules& rules, int depth) {
    if (depth < 0) throw std::invalid_argument("tree depth must be nonnegative");
    RootedTree t;
    t.max_depth = depth;
    t.parent.push_back(-1);
    t.depth.push_back(0);
    t.type.push_back(static_cast<int8_t>(rules.root_type));
    for (uint32_t v = 0; v < t.parent.size(); ++v) {
        t.child_off.push_back(static_cast<uint32_t>(t.child_idx.size()));
        if (t.depth[v] == depth) continue;
        for (int ct : rules.children_of_type[t.type[v]]) {
            uint32_t c = static_cast<uint32_t>(t.parent.size());
            t.parent.push_back(static_cast<int32_t>(v));
            t.depth.push_back(static_cast<uint16_t>(t.depth[v] + 1));
            t.type.push_back(static_cast<int8_t>(ct));
            t.child_idx.push_back(c);
        }
    }
    t.child_off.push_back(static_cast<uint32_t>(t.child_idx.size()));
    return t;
}

std::vector<uint64_t> RootedTree::descendant_level_counts(uint32_t v, int max_n) const {
    std::vector<uint64_t> counts;
    counts.reserve(max_n + 1);
    std::vector<uint32_t> frontier{v};
    counts.push_back(1);
    for (int n = 1; n <= max_n; ++n) {
        std::vector<uint32_t> next;
        for (uint32_t u : frontier)
            for (uint32_t i = child_off[u]; i < child_off[u + 1]; ++i)
                next.push_back(child_idx[i]);
        counts.push_back(next.size());
        frontier = std::move(next);
    }
    return counts;
}

std::vector<uint64_t> RootedTree::level_sizes() const {
    std::vector<uint64_t> sizes(max_depth + 1, 0);
    for (uint16_t d : depth) sizes[d]++;
    return sizes;
}

}  // namespace fdyadic
