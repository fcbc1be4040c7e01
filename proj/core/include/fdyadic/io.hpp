#pragma once

#include "fdyadic/electric.hpp"
#include "fdyadic/graph.hpp"
#include "fdyadic/walk.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fdyadic {

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Minimal comma-separated table: no quoting, fields never contain commas
/// (list-valued fields use ';' internally). str() and parse() round-trip.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string str() const;
    static CsvTable parse(const std::string& text);
    bool operator==(const CsvTable&) const = default;
};

CsvTable sphere_table(const Ball& ball);
CsvTable geodesic_table(const Ball& ball);
CsvTable cone_type_table(const Ball& ball, const ConeClassification& classes);
/// Taylor coefficients of all resolvent components, both matrices.
CsvTable growth_coefficient_table(int horizon);

// ---------------------------------------------------------------------------
// DOT
// ---------------------------------------------------------------------------

/// The ball as a DOT digraph: one a-edge and one b-edge per interior vertex
/// (inverse edges are the same arrows read backward), loops and parallel
/// edges drawn, labels show the fraction and the bit word.
std::string ball_dot(const Ball& ball);
std::string extracted_tree_dot(const Ball& ball, const ExtractedTree& tree);

// ---------------------------------------------------------------------------
// JSON reports
// ---------------------------------------------------------------------------

std::string ball_json(const Ball& ball, const TreeLikenessReport& report);
std::string growth_json(int horizon);
std::string cone_types_json(const Ball& ball, const ConeClassification& classes);
std::string extracted_tree_json(const Ball& ball, const ExtractedTree& tree);
std::string capacity_json(const std::string& tree_name, const CapacityReport& report);
std::string bound_json(const std::string& tree_name, const CapacityBoundConstants& constants);
std::string walk_report_json(const std::string& kind, const WalkConfig& config,
                             const std::vector<std::pair<std::string, WalkEstimate>>& estimates,
                             double seconds);

}  // namespace fdyadic
