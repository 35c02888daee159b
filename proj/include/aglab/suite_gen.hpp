#pragma once

#include <array>
#include <cstdint>

#include "aglab/screen_graph.hpp"

namespace aglab {

struct TierCounts {
    int trivial = 0;
    int easy = 0;
    int medium = 0;
    int hard = 0;
    int unsolvable = 0;
};

struct SuiteConfig {
    TierCounts counts;
    std::array<int, 2> screens_range{3, 28};    // total screens per task, incl. dead-end sinks
    std::array<int, 2> branching_range{2, 4};   // clickable elements per screen
    std::array<int, 2> distractor_range{0, 2};  // decorative text elements per screen
    int horizon = 50;
    double require_type_fraction = 0.35;   // tasks whose path includes a typed field
    double require_swipe_fraction = 0.35;  // tasks whose path crosses a scroll page
};

// Tier assignment by minimal solution length (including the final Finish).
Tier tier_of_steps(int oracle_min_steps);

// Builds the full task suite for (config, seed). Each task is a small app-like
// screen graph whose BFS-minimal solution length is verified to land in the
// requested tier; unsolvable tasks are verified unreachable. Throws
// GenerationOverBudget when a tier target cannot be met within 1,000 attempts
// for some task slot.
Suite generate_suite(const SuiteConfig& cfg, uint64_t seed);

}  // namespace aglab
