#include "aglab/rollout.hpp"

#include <atomic>
#include <mutex>
#include <thread>

namespace aglab {

uint64_t derive_seed(uint64_t global_seed, std::string_view task_id, uint32_t rollout_index) {
    uint64_t h = mix64(global_seed ^ fnv1a64(task_id));
    return mix64(h ^ ((static_cast<uint64_t>(rollout_index) + 1) * kGolden));
}

Trajectory run_episode(const ScreenGraph& graph, const TaskRef& task,
                       const PolicyParams& params, Featurizer& feat, uint64_t episode_seed,
                       int horizon, double temperature, bool greedy) {
    Trajectory traj;
    traj.task = task;

    EnvState st = env_reset(graph, task, episode_seed, horizon);
    Observation obs = make_observation(st);
    Rng rng(episode_seed);

    for (;;) {
        std::vector<ActionCommand> candidates = enumerate_candidates(st);
        ActionDistribution dist =
            action_distribution(params, feat, obs, candidates, temperature);
        int idx = greedy ? argmax_index(dist) : sample_action(dist, rng).first;

        Step step;
        step.observation = std::move(obs);
        step.candidates = std::move(candidates);
        step.candidate_behavior_logprobs = dist.logprobs;
        step.action_index = idx;
        step.behavior_logprob = dist.logprobs[static_cast<size_t>(idx)];

        StepResult res = env_step(st, step.candidates[static_cast<size_t>(idx)]);
        traj.steps.push_back(std::move(step));
        obs = std::move(res.observation);
        if (res.done) {
            traj.terminal_reward = res.reward;
            traj.truncated = res.truncated;
            break;
        }
    }
    return traj;
}

std::vector<std::vector<Trajectory>> run_rollouts(const std::vector<const SuiteTask*>& tasks,
                                                  const PolicyParams& params,
                                                  const PolicyConfig& cfg, int group_size,
                                                  int workers, uint64_t global_seed,
                                                  int horizon) {
    const size_t n_jobs = tasks.size() * static_cast<size_t>(group_size);
    std::vector<std::vector<Trajectory>> groups(tasks.size());
    for (auto& g : groups) g.resize(static_cast<size_t>(group_size));
    if (n_jobs == 0) return groups;

    workers = std::clamp(workers, 1, 256);

    auto run_job = [&](size_t job, Featurizer& feat) {
        const size_t task_i = job / static_cast<size_t>(group_size);
        const uint32_t rollout_i = static_cast<uint32_t>(job % static_cast<size_t>(group_size));
        const SuiteTask& st = *tasks[task_i];
        groups[task_i][rollout_i] =
            run_episode(st.graph, st.task, params, feat, derive_seed(global_seed, st.task.task_id, rollout_i),
                        horizon, cfg.temperature);
    };

    if (workers == 1 || n_jobs == 1) {
        Featurizer feat(cfg);
        for (size_t j = 0; j < n_jobs; ++j) run_job(j, feat);
        return groups;
    }

    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        Featurizer feat(cfg);
        try {
            for (;;) {
                size_t j = next.fetch_add(1);
                if (j >= n_jobs) return;
                run_job(j, feat);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return groups;
}

}  // namespace aglab
