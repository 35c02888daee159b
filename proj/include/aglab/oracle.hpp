#pragma once

#include <optional>

#include "aglab/screen_graph.hpp"

namespace aglab {

// Minimum number of actions (including the terminal Finish) needed to end an
// episode with reward 1, under exactly the candidate action set the agent
// sees. nullopt when no action sequence reaches the goal.
std::optional<int> oracle_min_steps(const ScreenGraph& graph);

}  // namespace aglab
