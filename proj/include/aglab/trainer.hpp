#pragma once

#include "aglab/config.hpp"
#include "aglab/rollout.hpp"
#include "aglab/scheduler.hpp"

namespace aglab {

// One metrics.jsonl line. wall_ms is kept in the schema but always written as
// 0 so the file stays byte-identical across reruns and worker counts; real
// timings go to a separate sidecar.
struct IterationMetrics {
    int iter = 0;
    int epoch = 0;
    int tasks_sampled = 0;
    double frac_unsolvable_sampled = 0.0;
    double mean_reward = 0.0;      // mean length-shaped reward over fresh rollouts
    double success_rate = 0.0;     // fraction of fresh rollouts with reward 1
    double mean_success_len = 0.0;
    int buffer_size = 0;
    int replayed_count = 0;
    int pruned_negatives = 0;
    int active_tasks = 0;
    int cooldown_tasks = 0;
    int removed_tasks = 0;
    double loss = 0.0;
    double clip_frac = 0.0;
    double mean_kl = 0.0;
    double mean_entropy = 0.0;
    double grad_norm = 0.0;
    long long wall_ms = 0;

    std::string to_json_line() const;
};

// Drives the whole algorithm: scheduler-weighted task sampling, grouped
// rollouts, length-shaped group advantages, replay mixing, negative pruning,
// one clipped-surrogate Adam step, then buffer/scheduler commits. Every
// mutation happens after the loss is validated, so a NonFiniteValue aborts
// the iteration with no partial state.
class Trainer {
public:
    Trainer(const Suite& suite, TrainConfig cfg);

    IterationMetrics run_iteration();

    const PolicyParams& params() const { return params_; }
    const TrainConfig& config() const { return cfg_; }
    const FcfScheduler& scheduler() const { return scheduler_; }
    const ReplayBuffer& buffer() const { return buffer_; }
    int iterations_done() const { return iter_; }
    // Rollouts of the most recent iteration, fresh then replayed, in
    // deterministic (task, slot) order; for trajectory logging.
    const std::vector<Trajectory>& last_fresh() const { return last_fresh_; }
    const std::vector<Trajectory>& last_replayed() const { return last_replayed_; }

private:
    const Suite* suite_;
    TrainConfig cfg_;
    PolicyParams params_;
    PolicyParams ref_params_;  // frozen copy of the initial weights
    Featurizer featurizer_;
    AdamOptimizer opt_;
    ReplayBuffer buffer_;
    FcfScheduler scheduler_;
    std::map<std::string, const SuiteTask*> by_id_;
    std::map<std::string, bool> epoch_all_zero_;  // sampled task -> all rollouts failed so far
    int iter_ = 0;
    std::vector<Trajectory> last_fresh_;
    std::vector<Trajectory> last_replayed_;
};

}  // namespace aglab
