#pragma once

#include <map>
#include <string>
#include <vector>

#include "aglab/hash.hpp"

namespace aglab {

enum class TaskPhase { Active, Cooldown, Removed };

struct TaskSchedule {
    TaskPhase phase = TaskPhase::Active;
    int consecutive_failures = 0;   // sampled epochs with every rollout at reward 0
    int cooldown_sampled = 0;       // sampled epochs spent in cooldown
};

// Failure-count task filter. A task sampled through two consecutive all-zero
// epochs drops to cooldown with weight exp(-failures); three sampled cooldown
// epochs without a success remove it for good (weight 0). Any success makes
// it active again. Tasks not sampled in an epoch keep their state untouched.
// With enabled=false every task keeps weight 1 and nothing ever transitions —
// plain uniform sampling.
class FcfScheduler {
public:
    explicit FcfScheduler(bool enabled = true) : enabled_(enabled) {}

    void register_task(const std::string& task_id) { tasks_[task_id]; }
    bool enabled() const { return enabled_; }

    const TaskSchedule& schedule(const std::string& task_id) const;
    double weight(const std::string& task_id) const;

    // Epoch-boundary update; keys are sampled task ids, value true when every
    // rollout of the task across the epoch came back with reward 0.
    void apply_epoch(const std::map<std::string, bool>& sampled_all_zero);

    // Weighted sampling without replacement in registration (id) order.
    // Throws InsufficientTasks when n exceeds the non-removed task count.
    std::vector<std::string> sample(int n, Rng& rng) const;

    struct Counts {
        int active = 0, cooldown = 0, removed = 0;
    };
    Counts counts() const;
    int selectable_count() const;

private:
    bool enabled_;
    std::map<std::string, TaskSchedule> tasks_;
};

}  // namespace aglab
