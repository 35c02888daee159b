#pragma once

#include <string>

#include "json.hpp"

#include "aglab/adagrpo.hpp"
#include "aglab/replay_buffer.hpp"
#include "aglab/suite_gen.hpp"

namespace aglab {

struct TrainConfig {
    int group_size = 16;  // rollouts per task per iteration
    int tasks_per_iteration = 16;
    int iterations = 100;
    int epoch_length = 1;  // iterations per scheduler epoch
    int horizon = 50;
    double clip_epsilon = 0.2;
    double kl_beta = 0.001;
    double spa_alpha = 1.0;
    double kappa = 0.25;
    int buffer_capacity = 256;
    double replay_gamma = 1.0;
    double replay_fraction = 0.25;
    int replay_reuse_cap = 2;
    double learning_rate = 0.05;
    double grad_clip_norm = 1.0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    uint32_t feature_dim = 65536;
    uint32_t features_per_candidate = 32;
    double temperature = 1.0;
    int workers = 0;  // 0 = hardware concurrency (capped at 256)
    uint64_t global_seed = 0;
    int checkpoint_every = 0;  // extra checkpoints every N iterations; 0 = final only
    bool fcf_enabled = true;
    bool log_trajectories = false;

    LossConfig loss() const;
    PolicyConfig policy() const;
    ReplayDrawConfig replay() const;
    int resolved_workers() const;
};

enum class Ablation { None, Spa, Adapr, Fcf, All };

Ablation ablation_from_name(const std::string& name);  // "spa"|"adapr"|"fcf"|"all"
void apply_ablation(TrainConfig& cfg, Ablation a);

// Strict parsers: unknown keys, wrong types, and out-of-range values all
// throw ConfigError naming the offending field.
TrainConfig train_config_from_json(const nlohmann::json& j);
SuiteConfig suite_config_from_json(const nlohmann::json& j);

// Full dumps with every default applied; what lands in resolved_config.json.
nlohmann::json train_config_to_json(const TrainConfig& cfg);
nlohmann::json suite_config_to_json(const SuiteConfig& cfg);

// FNV-1a of the canonical (sorted-key) dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& canonical);

}  // namespace aglab
