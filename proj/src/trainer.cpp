#include "aglab/trainer.hpp"

#include "json.hpp"

#include "aglab/errors.hpp"

namespace aglab {

std::string IterationMetrics::to_json_line() const {
    nlohmann::json j = {{"iter", iter},
                        {"epoch", epoch},
                        {"tasks_sampled", tasks_sampled},
                        {"frac_unsolvable_sampled", frac_unsolvable_sampled},
                        {"mean_reward", mean_reward},
                        {"success_rate", success_rate},
                        {"mean_success_len", mean_success_len},
                        {"buffer_size", buffer_size},
                        {"replayed_count", replayed_count},
                        {"pruned_negatives", pruned_negatives},
                        {"active_tasks", active_tasks},
                        {"cooldown_tasks", cooldown_tasks},
                        {"removed_tasks", removed_tasks},
                        {"loss", loss},
                        {"clip_frac", clip_frac},
                        {"mean_kl", mean_kl},
                        {"mean_entropy", mean_entropy},
                        {"grad_norm", grad_norm},
                        {"wall_ms", wall_ms}};
    return j.dump();
}

namespace {

// Independent deterministic streams per (seed, purpose, iteration).
uint64_t stream_seed(uint64_t seed, std::string_view tag, int iter) {
    return mix64(mix64(seed ^ fnv1a64(tag)) ^ (static_cast<uint64_t>(iter) * kGolden));
}

}  // namespace

Trainer::Trainer(const Suite& suite, TrainConfig cfg)
    : suite_(&suite),
      cfg_(cfg),
      params_(make_params(cfg.policy())),
      ref_params_(params_),
      featurizer_(cfg.policy()),
      opt_(cfg.feature_dim, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps),
      buffer_(static_cast<size_t>(cfg.buffer_capacity)),
      scheduler_(cfg.fcf_enabled) {
    for (const SuiteTask& t : suite.tasks) {
        scheduler_.register_task(t.task.task_id);
        by_id_[t.task.task_id] = &t;
    }
}

IterationMetrics Trainer::run_iteration() {
    const int iter = iter_ + 1;
    IterationMetrics m;
    m.iter = iter;
    m.epoch = (iter - 1) / cfg_.epoch_length + 1;

    // Task sampling, clamped to what the scheduler can still offer so long
    // runs keep going after removals shrink the pool.
    const int n = std::min(cfg_.tasks_per_iteration, scheduler_.selectable_count());
    Rng sample_rng(stream_seed(cfg_.global_seed, "task-sample", iter));
    std::vector<std::string> ids = n > 0 ? scheduler_.sample(n, sample_rng)
                                         : std::vector<std::string>{};
    std::vector<const SuiteTask*> tasks;
    for (const std::string& id : ids) tasks.push_back(by_id_.at(id));

    m.tasks_sampled = n;
    if (n > 0) {
        int unsolvable = 0;
        for (const SuiteTask* t : tasks)
            if (t->task.tier == Tier::Unsolvable) ++unsolvable;
        m.frac_unsolvable_sampled = static_cast<double>(unsolvable) / n;
    }

    // Fresh rollouts: G per task, deterministic per (iteration seed, task,
    // slot) regardless of worker count.
    auto groups = run_rollouts(tasks, params_, cfg_.policy(), cfg_.group_size,
                               cfg_.resolved_workers(),
                               stream_seed(cfg_.global_seed, "rollout", iter), cfg_.horizon);

    // Shaped rewards and standardized advantages per group.
    std::vector<BatchItem> batch;
    std::vector<std::pair<const Trajectory*, double>> fresh_pairs;
    std::map<std::string, bool> iter_all_zero;
    int fresh_total = 0, fresh_success = 0, fresh_nondegenerate = 0;
    double reward_sum = 0.0;
    long long success_len_sum = 0;

    for (size_t g = 0; g < groups.size(); ++g) {
        const std::vector<Trajectory>& group = groups[g];
        std::vector<double> spa = spa_rewards(group, cfg_.spa_alpha);
        GroupAdvantages adv = group_advantages(spa);

        bool any_success = false;
        for (size_t i = 0; i < group.size(); ++i) {
            ++fresh_total;
            reward_sum += spa[i];
            if (group[i].success()) {
                ++fresh_success;
                success_len_sum += group[i].length();
                any_success = true;
            }
        }
        const std::string& id = tasks[g]->task.task_id;
        auto [it, inserted] = iter_all_zero.emplace(id, !any_success);
        if (!inserted) it->second = it->second && !any_success;

        if (adv.degenerate) continue;
        fresh_nondegenerate += static_cast<int>(group.size());
        for (size_t i = 0; i < group.size(); ++i) {
            batch.push_back({&group[i], adv.values[i]});
            fresh_pairs.push_back({&group[i], adv.values[i]});
        }
    }

    if (fresh_total > 0) {
        m.mean_reward = reward_sum / fresh_total;
        m.success_rate = static_cast<double>(fresh_success) / fresh_total;
    }
    if (fresh_success > 0)
        m.mean_success_len = static_cast<double>(success_len_sum) / fresh_success;

    // Replay mix-in, planned against the buffer but not committed yet.
    ReplayBuffer::DrawPlan plan = buffer_.plan_draw(fresh_nondegenerate, cfg_.replay());
    std::vector<std::pair<Trajectory, double>> drawn = buffer_.materialize(plan);
    for (const auto& [traj, adv] : drawn) batch.push_back({&traj, adv});
    m.replayed_count = static_cast<int>(drawn.size());

    // Negative pruning on the combined batch.
    Rng prune_rng(stream_seed(cfg_.global_seed, "prune", iter));
    batch = prune_negatives(std::move(batch), prune_rng, &m.pruned_negatives);

    // Loss, gradient, optimizer step. An empty batch leaves the policy
    // untouched; a non-finite value aborts before any state mutation.
    if (!batch.empty()) {
        LossResult res;
        try {
            res = surrogate_loss_and_grad(batch, params_, ref_params_, cfg_.loss(),
                                          featurizer_);
        } catch (const NonFiniteValue& e) {
            throw NonFiniteValue(e.what(), iter);
        }
        opt_.step(params_, res.grad, cfg_.learning_rate);
        m.loss = res.loss;
        m.clip_frac = res.stats.clip_fraction;
        m.mean_kl = res.stats.mean_kl;
        m.mean_entropy = res.stats.mean_entropy;
        m.grad_norm = res.stats.grad_norm;
    }

    // Commit phase: replay bookkeeping, buffer growth, scheduler outcomes.
    buffer_.commit_draw(plan);
    buffer_.insert_eligible(fresh_pairs, cfg_.kappa);
    m.buffer_size = static_cast<int>(buffer_.size());

    for (const auto& [id, all_zero] : iter_all_zero) {
        auto [it, inserted] = epoch_all_zero_.emplace(id, all_zero);
        if (!inserted) it->second = it->second && all_zero;
    }
    if (iter % cfg_.epoch_length == 0) {
        scheduler_.apply_epoch(epoch_all_zero_);
        epoch_all_zero_.clear();
    }
    FcfScheduler::Counts counts = scheduler_.counts();
    m.active_tasks = counts.active;
    m.cooldown_tasks = counts.cooldown;
    m.removed_tasks = counts.removed;

    last_fresh_.clear();
    for (auto& group : groups)
        for (Trajectory& t : group) last_fresh_.push_back(std::move(t));
    last_replayed_.clear();
    for (auto& [traj, adv] : drawn) last_replayed_.push_back(std::move(traj));

    iter_ = iter;
    return m;
}

}  // namespace aglab
