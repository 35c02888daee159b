#pragma once

#include "aglab/policy.hpp"
#include "aglab/trajectory.hpp"

namespace aglab {

// Length-shaped rewards for one rollout group: a success of length T is worth
// 1 - alpha * (T - T_min) / T with T_min the shortest success in this group,
// so the quickest solve keeps its full reward and slower ones shrink toward
// (1 - alpha). Failures are exactly 0, and an all-failure group stays all
// zero.
std::vector<double> spa_rewards(const std::vector<Trajectory>& group, double alpha);

// Group-standardized advantages (population sigma). A group whose shaped
// rewards have sigma < 1e-8 is degenerate: every advantage is 0 and the group
// carries no gradient signal.
struct GroupAdvantages {
    std::vector<double> values;
    bool degenerate = false;
};
GroupAdvantages group_advantages(const std::vector<double>& spa);

struct BatchItem {
    const Trajectory* trajectory = nullptr;
    double advantage = 0.0;
};

// Caps failures at twice the success count by dropping the lowest-advantage
// failures (seeded-random tie-break). Successes are never dropped and the
// surviving batch keeps its original order.
std::vector<BatchItem> prune_negatives(std::vector<BatchItem> batch, Rng& rng,
                                       int* dropped = nullptr);

struct LossConfig {
    double clip_epsilon = 0.2;
    double kl_beta = 0.001;
    double temperature = 1.0;   // must match the sampling temperature
    double grad_clip_norm = 1.0;  // <= 0 disables clipping
};

struct LossStats {
    double clip_fraction = 0.0;
    double mean_kl = 0.0;
    double mean_entropy = 0.0;
    double grad_norm = 0.0;  // L2 norm before clipping
    int64_t step_count = 0;
};

struct LossResult {
    double loss = 0.0;
    std::vector<double> grad;
    LossStats stats;
};

// Clipped importance-weighted surrogate with a KL penalty to the reference
// policy:
//   loss = -(1/B) sum_i (1/T_i) sum_t min(r*A, clip(r,1-eps,1+eps)*A)
//          + beta * (1/sum T) * sum_{i,t} KL(pi || pi_ref)
// where r = exp(logpi(a) - behavior_logprob). The gradient is computed
// analytically over the hashed features; the policy-gradient part flows only
// when the unclipped branch attains the min. Throws NonFiniteValue if the
// loss or gradient goes non-finite.
LossResult surrogate_loss_and_grad(const std::vector<BatchItem>& batch,
                                   const PolicyParams& params, const PolicyParams& ref,
                                   const LossConfig& cfg, Featurizer& feat);

class AdamOptimizer {
public:
    explicit AdamOptimizer(size_t dim, double beta1 = 0.9, double beta2 = 0.999,
                           double eps = 1e-8);
    // In-place update; bumps params.version.
    void step(PolicyParams& params, const std::vector<double>& grad, double lr);
    int64_t steps_taken() const { return t_; }

private:
    std::vector<double> m_, v_;
    double beta1_, beta2_, eps_;
    int64_t t_ = 0;
};

}  // namespace aglab
