#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fdyadic {

/// Self-similar rooted tree: finitely many vertex types, each type carrying a
/// fixed ordered list of child types. Lets level counts, resistances and
/// random walks be computed to any depth without materializing the tree.
struct TypeRules {
    std::vector<std::vector<int>> children_of_type;
    int root_type = 0;
    std::string name;

    int type_count() const { return static_cast<int>(children_of_type.size()); }

    /// Type 0 has children {0,1}, type 1 has child {0}: level sizes from a
    /// type-0 root follow the Fibonacci recurrence.
    static TypeRules fibonacci();
    static TypeRules m_ary(int m);
    static TypeRules binary() { return m_ary(2); }
    static TypeRules path() { return m_ary(1); }
};

/// Explicit rooted tree in BFS order (parents precede children, depths
/// nondecreasing). `type` entries are -1 when no type information applies.
struct RootedTree {
    std::vector<int32_t> parent;      // -1 at the root
    std::vector<uint32_t> child_off;  // CSR, size() + 1 entries
    std::vector<uint32_t> child_idx;
    std::vector<uint16_t> depth;
    std::vector<int8_t> type;
    int max_depth = 0;  // the tree is complete through this depth

    size_t size() const { return parent.size(); }
    uint32_t root() const { return 0; }
    size_t child_count(uint32_t v) const { return child_off[v + 1] - child_off[v]; }
    uint32_t child(uint32_t v, size_t i) const { return child_idx[child_off[v] + i]; }
    /// Degree in the tree (children plus parent edge).
    size_t degree(uint32_t v) const { return child_count(v) + (v == 0 ? 0 : 1); }

    /// Materialize a type-rules tree down to `depth` levels.
    static RootedTree from_rules(const TypeRules& rules, int depth);

    /// Number of descendants exactly n levels below v, for n = 0..max_n.
    /// Counts are truncated at the built depth; the caller bounds max_n.
    std::vector<uint64_t> descendant_level_counts(uint32_t v, int max_n) const;

    /// Sphere sizes |{x : depth(x) = n}| for n = 0..max_depth.
    std::vector<uint64_t> level_sizes() const;
};

}  // namespace fdyadic
