#pragma once

#include "fdyadic/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fdyadic::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

struct Options {
    uint64_t seed = 20250810;
    int threads = 0;
    std::vector<int> only;  // run the listed criteria only; empty = all
};

/// Runs the end-to-end verification suite (ten numbered criteria covering
/// growth, classification, resistance, bounds, identities, and seeded
/// Monte Carlo). Exceptions inside a criterion mark it failed.
std::vector<CriterionResult> run_acceptance(const Options& options = {});

bool all_passed(const std::vector<CriterionResult>& results);

/// Independent oracle: enumerates all 4^n generator words at the ball's root
/// and counts those whose endpoint lies at distance exactly n.
uint64_t brute_force_geodesic_word_count(const Ball& ball, int n);

}  // namespace fdyadic::verify
