#include "aglab/scheduler.hpp"

#include <cmath>

#include "aglab/errors.hpp"

namespace aglab {

const TaskSchedule& FcfScheduler::schedule(const std::string& task_id) const {
    auto it = tasks_.find(task_id);
    if (it == tasks_.end()) throw UnknownTask("unregistered task \"" + task_id + "\"");
    return it->second;
}

double FcfScheduler::weight(const std::string& task_id) const {
    const TaskSchedule& t = schedule(task_id);
    if (!enabled_) return 1.0;
    switch (t.phase) {
        case TaskPhase::Active: return 1.0;
        case TaskPhase::Cooldown: return std::exp(-t.consecutive_failures);
        case TaskPhase::Removed: return 0.0;
    }
    return 0.0;
}

void FcfScheduler::apply_epoch(const std::map<std::string, bool>& sampled_all_zero) {
    if (!enabled_) return;
    for (const auto& [id, all_zero] : sampled_all_zero) {
        auto it = tasks_.find(id);
        if (it == tasks_.end()) throw UnknownTask("unregistered task \"" + id + "\"");
        TaskSchedule& t = it->second;
        if (t.phase == TaskPhase::Removed) continue;  // absorbing
        if (!all_zero) {
            t = TaskSchedule{};  // success: fully active, counters cleared
            continue;
        }
        t.consecutive_failures += 1;
        if (t.phase == TaskPhase::Active) {
            if (t.consecutive_failures >= 2) {
                t.phase = TaskPhase::Cooldown;
                t.cooldown_sampled = 0;
            }
        } else {  // Cooldown
            t.cooldown_sampled += 1;
            if (t.cooldown_sampled >= 3) t.phase = TaskPhase::Removed;
        }
    }
}

std::vector<std::string> FcfScheduler::sample(int n, Rng& rng) const {
    if (n > selectable_count())
        throw InsufficientTasks("requested " + std::to_string(n) + " tasks but only " +
                                std::to_string(selectable_count()) + " are selectable");
    std::vector<std::pair<const std::string*, double>> pool;
    for (const auto& [id, sched] : tasks_) {
        double w = weight(id);
        if (w > 0.0) pool.push_back({&id, w});
    }
    std::vector<std::string> picked;
    picked.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        double total = 0.0;
        for (const auto& [id, w] : pool) total += w;
        double u = rng.uniform01() * total;
        size_t chosen = pool.size() - 1;
        double cum = 0.0;
        for (size_t i = 0; i < pool.size(); ++i) {
            cum += pool[i].second;
            if (u < cum) {
                chosen = i;
                break;
            }
        }
        picked.push_back(*pool[chosen].first);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(chosen));
    }
    return picked;
}

FcfScheduler::Counts FcfScheduler::counts() const {
    Counts c;
    for (const auto& [id, t] : tasks_) {
        switch (t.phase) {
            case TaskPhase::Active: ++c.active; break;
            case TaskPhase::Cooldown: ++c.cooldown; break;
            case TaskPhase::Removed: ++c.removed; break;
        }
    }
    return c;
}

int FcfScheduler::selectable_count() const {
    Counts c = counts();
    return c.active + c.cooldown + (enabled_ ? 0 : c.removed);
}

}  // namespace aglab
