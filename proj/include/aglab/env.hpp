#pragma once

#include <set>

#include "aglab/screen_graph.hpp"

namespace aglab {

// Mutable episode state over an immutable ScreenGraph. The world itself is
// deterministic; episode_seed is carried for the record (sampling randomness
// lives in the policy, not here).
struct EnvState {
    const ScreenGraph* graph = nullptr;
    TaskRef task;
    uint64_t episode_seed = 0;
    int horizon = 50;

    int screen = 0;
    int prev_screen = -1;  // one-deep back history, -1 = none
    int scroll = 0;
    std::set<std::string> typed;  // strings typed into focused fields so far
    int steps_taken = 0;
    bool done = false;
};

struct StepResult {
    Observation observation;
    int reward = 0;
    bool done = false;
    bool truncated = false;
};

EnvState env_reset(const ScreenGraph& graph, const TaskRef& task, uint64_t episode_seed,
                   int horizon);

Observation make_observation(const EnvState& st);

bool goal_satisfied(const EnvState& st);

// The exact action set the agent may choose from, in canonical order: one Tap
// per visible clickable element (document order), one Type per lexicon string
// when a field has focus, Swipe up/down when the screen scrolls, then Back,
// Home, Wait, Finish.
std::vector<ActionCommand> enumerate_candidates(const EnvState& st);

// Applies one action. Every call consumes a step; reaching the horizon
// without a Finish truncates the episode with reward 0. Tap/LongPress
// rectangles must match a visible clickable exactly (ActionOutOfGrammar
// otherwise); a matching element without an outgoing edge is a no-op.
StepResult env_step(EnvState& st, const ActionCommand& action);

}  // namespace aglab
