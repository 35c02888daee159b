#include "aglab/trajectory.hpp"

#include "json.hpp"

#include "aglab/errors.hpp"

namespace aglab {

std::string_view tier_name(Tier t) {
    switch (t) {
        case Tier::Trivial: return "trivial";
        case Tier::Easy: return "easy";
        case Tier::Medium: return "medium";
        case Tier::Hard: return "hard";
        case Tier::Unsolvable: return "unsolvable";
    }
    return "";
}

Tier tier_from_name(std::string_view name) {
    if (name == "trivial") return Tier::Trivial;
    if (name == "easy") return Tier::Easy;
    if (name == "medium") return Tier::Medium;
    if (name == "hard") return Tier::Hard;
    if (name == "unsolvable") return Tier::Unsolvable;
    throw ConfigError("unknown tier \"" + std::string(name) + "\"");
}

std::string trajectory_log_line(const Trajectory& t) {
    nlohmann::json steps = nlohmann::json::array();
    for (const Step& s : t.steps) {
        steps.push_back({{"screen_id", s.observation.screen_id},
                         {"action_text", serialize_action(s.action())},
                         {"candidate_count", s.candidates.size()},
                         {"behavior_logprob", s.behavior_logprob}});
    }
    nlohmann::json rec = {{"task_id", t.task.task_id},
                          {"tier", tier_name(t.task.tier)},
                          {"reward", t.terminal_reward},
                          {"length", t.length()},
                          {"truncated", t.truncated},
                          {"steps", std::move(steps)}};
    return rec.dump();
}

}  // namespace aglab
