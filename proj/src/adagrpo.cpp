#include "aglab/adagrpo.hpp"

#include <algorithm>
#include <cmath>

#include "aglab/errors.hpp"

namespace aglab {

std::vector<double> spa_rewards(const std::vector<Trajectory>& group, double alpha) {
    int t_min = 0;
    bool any_success = false;
    for (const Trajectory& t : group) {
        if (!t.success()) continue;
        if (!any_success || t.length() < t_min) t_min = t.length();
        any_success = true;
    }
    std::vector<double> out(group.size(), 0.0);
    if (!any_success) return out;
    for (size_t i = 0; i < group.size(); ++i) {
        const Trajectory& t = group[i];
        if (!t.success()) continue;
        double len = static_cast<double>(t.length());
        out[i] = 1.0 - alpha * (len - static_cast<double>(t_min)) / len;
    }
    return out;
}

GroupAdvantages group_advantages(const std::vector<double>& spa) {
    GroupAdvantages res;
    res.values.assign(spa.size(), 0.0);
    if (spa.empty()) {
        res.degenerate = true;
        return res;
    }
    double mean = 0.0;
    for (double v : spa) mean += v;
    mean /= static_cast<double>(spa.size());
    double var = 0.0;
    for (double v : spa) var += (v - mean) * (v - mean);
    var /= static_cast<double>(spa.size());
    double sigma = std::sqrt(var);
    if (sigma < 1e-8) {
        res.degenerate = true;
        return res;
    }
    for (size_t i = 0; i < spa.size(); ++i) res.values[i] = (spa[i] - mean) / sigma;
    return res;
}

std::vector<BatchItem> prune_negatives(std::vector<BatchItem> batch, Rng& rng, int* dropped) {
    if (dropped) *dropped = 0;
    int successes = 0, failures = 0;
    for (const BatchItem& b : batch) (b.trajectory->success() ? successes : failures)++;
    int excess = failures - 2 * successes;
    if (excess <= 0) return batch;

    // Order failures by advantage, breaking ties with a seeded shuffle key so
    // equal-advantage drops don't depend on batch position.
    struct Victim {
        size_t pos;
        double advantage;
        uint64_t key;
    };
    std::vector<Victim> victims;
    for (size_t i = 0; i < batch.size(); ++i)
        if (!batch[i].trajectory->success())
            victims.push_back({i, batch[i].advantage, rng.next_u64()});
    std::sort(victims.begin(), victims.end(), [](const Victim& a, const Victim& b) {
        if (a.advantage != b.advantage) return a.advantage < b.advantage;
        return a.key < b.key;
    });

    std::vector<bool> drop(batch.size(), false);
    for (int k = 0; k < excess; ++k) drop[victims[static_cast<size_t>(k)].pos] = true;

    std::vector<BatchItem> kept;
    kept.reserve(batch.size() - static_cast<size_t>(excess));
    for (size_t i = 0; i < batch.size(); ++i)
        if (!drop[i]) kept.push_back(batch[i]);
    if (dropped) *dropped = excess;
    return kept;
}

LossResult surrogate_loss_and_grad(const std::vector<BatchItem>& batch,
                                   const PolicyParams& params, const PolicyParams& ref,
                                   const LossConfig& cfg, Featurizer& feat) {
    LossResult res;
    res.grad.assign(params.weights.size(), 0.0);
    if (batch.empty()) return res;

    int64_t total_steps = 0;
    for (const BatchItem& b : batch) total_steps += b.trajectory->length();
    if (total_steps == 0) return res;

    const double inv_batch = 1.0 / static_cast<double>(batch.size());
    const double inv_total = 1.0 / static_cast<double>(total_steps);
    const double inv_temp = 1.0 / cfg.temperature;

    double pg_sum = 0.0;  // sum over i of (1/T_i) sum_t min(...)
    double kl_sum = 0.0;
    double entropy_sum = 0.0;
    int64_t clipped_steps = 0;

    std::vector<std::vector<uint32_t>> rows;
    std::vector<uint32_t> row;
    for (const BatchItem& b : batch) {
        const Trajectory& traj = *b.trajectory;
        const double inv_len = 1.0 / static_cast<double>(traj.length());
        for (const Step& step : traj.steps) {
            const auto& sig = feat.ui_signature(step.observation.compressed_ui);
            rows.assign(step.candidates.size(), {});
            for (size_t c = 0; c < step.candidates.size(); ++c) {
                feat.features_into(sig, feat.candidate_hash(step.candidates[c]), row);
                rows[c] = row;
            }
            ActionDistribution cur = distribution_from_rows(params, rows, cfg.temperature);
            ActionDistribution reference = distribution_from_rows(ref, rows, cfg.temperature);

            const size_t a = static_cast<size_t>(step.action_index);
            const double rho = std::exp(cur.logprobs[a] - step.behavior_logprob);
            const double unclipped = rho * b.advantage;
            const double clipped =
                std::clamp(rho, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon) * b.advantage;
            const double term = std::min(unclipped, clipped);
            pg_sum += inv_len * term;
            if (clipped < unclipped) ++clipped_steps;

            const double kl = kl_divergence(cur.probs, reference.probs);
            kl_sum += kl;
            entropy_sum += entropy(cur.probs);

            // Per-candidate gradient coefficient; see header for the algebra.
            const bool use_pg = unclipped <= clipped;
            const double s_pg =
                use_pg ? -inv_batch * inv_len * rho * b.advantage * inv_temp : 0.0;
            const double s_kl = cfg.kl_beta * inv_total * inv_temp;
            for (size_t c = 0; c < rows.size(); ++c) {
                const double u = cur.logprobs[c] - reference.logprobs[c];
                double g = s_pg * ((c == a ? 1.0 : 0.0) - cur.probs[c]) +
                           s_kl * cur.probs[c] * (u - kl);
                if (g == 0.0) continue;
                for (uint32_t idx : rows[c]) res.grad[idx] += g;
            }
        }
    }

    res.loss = -inv_batch * pg_sum + cfg.kl_beta * inv_total * kl_sum;

    double norm_sq = 0.0;
    for (double g : res.grad) norm_sq += g * g;
    double norm = std::sqrt(norm_sq);
    if (!std::isfinite(res.loss) || !std::isfinite(norm))
        throw NonFiniteValue("non-finite loss or gradient", 0);
    if (cfg.grad_clip_norm > 0.0 && norm > cfg.grad_clip_norm) {
        double scale = cfg.grad_clip_norm / norm;
        for (double& g : res.grad) g *= scale;
    }

    res.stats.grad_norm = norm;
    res.stats.clip_fraction = static_cast<double>(clipped_steps) / static_cast<double>(total_steps);
    res.stats.mean_kl = kl_sum * inv_total;
    res.stats.mean_entropy = entropy_sum * inv_total;
    res.stats.step_count = total_steps;
    return res;
}

AdamOptimizer::AdamOptimizer(size_t dim, double beta1, double beta2, double eps)
    : m_(dim, 0.0), v_(dim, 0.0), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void AdamOptimizer::step(PolicyParams& params, const std::vector<double>& grad, double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (size_t i = 0; i < grad.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        params.weights[i] -= lr * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + eps_);
    }
    params.version += 1;
}

}  // namespace aglab
