#pragma once

#include "aglab/env.hpp"
#include "aglab/policy.hpp"

namespace aglab {

// Episode seed from (run seed, task, rollout slot): FNV the task id into the
// seed, finalize, fold in the slot, finalize again. Collision-resistant and
// independent of scheduling, so results never depend on worker count.
uint64_t derive_seed(uint64_t global_seed, std::string_view task_id, uint32_t rollout_index);

// Plays one episode with inverse-CDF sampling from the policy (or argmax when
// greedy), recording candidates and behavior log-probabilities at every step.
Trajectory run_episode(const ScreenGraph& graph, const TaskRef& task,
                       const PolicyParams& params, Featurizer& feat, uint64_t episode_seed,
                       int horizon, double temperature, bool greedy = false);

// group_size episodes per task, fanned out over a fixed-size worker pool.
// Work items are indexed (task, rollout), each with its own derived seed and
// per-worker featurizer, and land in a preallocated slot — the returned
// groups are byte-identical for any worker count.
std::vector<std::vector<Trajectory>> run_rollouts(const std::vector<const SuiteTask*>& tasks,
                                                  const PolicyParams& params,
                                                  const PolicyConfig& cfg, int group_size,
                                                  int workers, uint64_t global_seed,
                                                  int horizon);

}  // namespace aglab
