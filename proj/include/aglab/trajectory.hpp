#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aglab/action.hpp"

namespace aglab {

enum class Tier { Trivial, Easy, Medium, Hard, Unsolvable };

std::string_view tier_name(Tier t);
Tier tier_from_name(std::string_view name);

struct TaskRef {
    std::string task_id;
    std::string instruction;
    Tier tier = Tier::Trivial;
    bool operator==(const TaskRef&) const = default;
};

// What the agent sees at one step. compressed_ui is the rendered view
// hierarchy after filtering/compression; everything the policy consumes comes
// from here.
struct Observation {
    std::string compressed_ui;
    std::string screen_id;
    std::optional<std::string> focused_field;  // element id, when a field has focus
    int scroll_offset = 0;
    bool operator==(const Observation&) const = default;
};

enum class Origin { Fresh, Replayed };

// One decision point: the observation, the enumerated candidate actions, the
// log-probabilities the behavior policy assigned to each of them at sampling
// time, and which one was taken.
struct Step {
    Observation observation;
    std::vector<ActionCommand> candidates;
    std::vector<double> candidate_behavior_logprobs;
    int action_index = 0;
    double behavior_logprob = 0.0;  // == candidate_behavior_logprobs[action_index]

    const ActionCommand& action() const { return candidates[static_cast<size_t>(action_index)]; }
};

struct Trajectory {
    TaskRef task;
    std::vector<Step> steps;
    int terminal_reward = 0;  // 1 iff the episode finished with the goal satisfied
    bool truncated = false;   // horizon hit before finish
    Origin origin = Origin::Fresh;
    int replay_count = 0;  // times drawn from the buffer (0 for fresh)

    int length() const { return static_cast<int>(steps.size()); }
    bool success() const { return terminal_reward == 1; }
};

// One-line JSON record for trajectory logs:
// {task_id, tier, reward, length, truncated, steps:[{screen_id, action_text,
//  candidate_count, behavior_logprob}]}
std::string trajectory_log_line(const Trajectory& t);

}  // namespace aglab
