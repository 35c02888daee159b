#include "aglab/config.hpp"

#include <cstdio>
#include <thread>

#include "aglab/errors.hpp"

namespace aglab {

using nlohmann::json;

LossConfig TrainConfig::loss() const {
    return {.clip_epsilon = clip_epsilon,
            .kl_beta = kl_beta,
            .temperature = temperature,
            .grad_clip_norm = grad_clip_norm};
}

PolicyConfig TrainConfig::policy() const {
    PolicyConfig p;
    p.feature_dim = feature_dim;
    p.features_per_candidate = features_per_candidate;
    p.temperature = temperature;
    return p;
}

ReplayDrawConfig TrainConfig::replay() const {
    return {.replay_fraction = replay_fraction, .gamma = replay_gamma,
            .reuse_cap = replay_reuse_cap};
}

int TrainConfig::resolved_workers() const {
    if (workers > 0) return std::min(workers, 256);
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(hw == 0 ? 1u : hw, 256u));
}

Ablation ablation_from_name(const std::string& name) {
    if (name == "spa") return Ablation::Spa;
    if (name == "adapr") return Ablation::Adapr;
    if (name == "fcf") return Ablation::Fcf;
    if (name == "all") return Ablation::All;
    throw ConfigError("unknown ablation \"" + name + "\" (expected spa|adapr|fcf|all)");
}

void apply_ablation(TrainConfig& cfg, Ablation a) {
    if (a == Ablation::Spa || a == Ablation::All) cfg.spa_alpha = 0.0;
    if (a == Ablation::Adapr || a == Ablation::All) cfg.replay_fraction = 0.0;
    if (a == Ablation::Fcf || a == Ablation::All) cfg.fcf_enabled = false;
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const char* scope) {
    if (!j.is_object()) throw ConfigError(std::string(scope) + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok) throw ConfigError("unknown " + std::string(scope) + " key \"" + key + "\"");
    }
}

template <typename T>
T read(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for \"") + key + "\"");
    }
}

void require(bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(std::string("\"") + key + "\" " + what);
}

std::array<int, 2> read_range(const json& j, const char* key, std::array<int, 2> fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
        !v[1].is_number_integer())
        throw ConfigError(std::string("\"") + key + "\" must be [lo, hi]");
    std::array<int, 2> r{v[0].get<int>(), v[1].get<int>()};
    require(r[0] <= r[1], key, "must satisfy lo <= hi");
    return r;
}

}  // namespace

TrainConfig train_config_from_json(const json& j) {
    reject_unknown(j,
                   {"group_size", "tasks_per_iteration", "iterations", "epoch_length",
                    "horizon", "clip_epsilon", "kl_beta", "spa_alpha", "kappa",
                    "buffer_capacity", "replay_gamma", "replay_fraction", "replay_reuse_cap",
                    "learning_rate", "grad_clip_norm", "adam_beta1", "adam_beta2", "adam_eps",
                    "feature_dim", "features_per_candidate", "temperature", "workers",
                    "global_seed", "checkpoint_every", "fcf_enabled", "log_trajectories"},
                   "train config");
    TrainConfig c;
    c.group_size = read(j, "group_size", c.group_size);
    c.tasks_per_iteration = read(j, "tasks_per_iteration", c.tasks_per_iteration);
    c.iterations = read(j, "iterations", c.iterations);
    c.epoch_length = read(j, "epoch_length", c.epoch_length);
    c.horizon = read(j, "horizon", c.horizon);
    c.clip_epsilon = read(j, "clip_epsilon", c.clip_epsilon);
    c.kl_beta = read(j, "kl_beta", c.kl_beta);
    c.spa_alpha = read(j, "spa_alpha", c.spa_alpha);
    c.kappa = read(j, "kappa", c.kappa);
    c.buffer_capacity = read(j, "buffer_capacity", c.buffer_capacity);
    c.replay_gamma = read(j, "replay_gamma", c.replay_gamma);
    c.replay_fraction = read(j, "replay_fraction", c.replay_fraction);
    c.replay_reuse_cap = read(j, "replay_reuse_cap", c.replay_reuse_cap);
    c.learning_rate = read(j, "learning_rate", c.learning_rate);
    c.grad_clip_norm = read(j, "grad_clip_norm", c.grad_clip_norm);
    c.adam_beta1 = read(j, "adam_beta1", c.adam_beta1);
    c.adam_beta2 = read(j, "adam_beta2", c.adam_beta2);
    c.adam_eps = read(j, "adam_eps", c.adam_eps);
    c.feature_dim = read(j, "feature_dim", c.feature_dim);
    c.features_per_candidate = read(j, "features_per_candidate", c.features_per_candidate);
    c.temperature = read(j, "temperature", c.temperature);
    c.workers = read(j, "workers", c.workers);
    c.global_seed = read(j, "global_seed", c.global_seed);
    c.checkpoint_every = read(j, "checkpoint_every", c.checkpoint_every);
    c.fcf_enabled = read(j, "fcf_enabled", c.fcf_enabled);
    c.log_trajectories = read(j, "log_trajectories", c.log_trajectories);

    require(c.group_size >= 1, "group_size", "must be >= 1");
    require(c.tasks_per_iteration >= 1, "tasks_per_iteration", "must be >= 1");
    require(c.iterations >= 1, "iterations", "must be >= 1");
    require(c.epoch_length >= 1, "epoch_length", "must be >= 1");
    require(c.horizon >= 1, "horizon", "must be >= 1");
    require(c.clip_epsilon > 0.0 && c.clip_epsilon < 1.0, "clip_epsilon", "must be in (0,1)");
    require(c.kl_beta >= 0.0, "kl_beta", "must be >= 0");
    require(c.spa_alpha >= 0.0 && c.spa_alpha <= 1.0, "spa_alpha", "must be in [0,1]");
    require(c.kappa >= 0.0 && c.kappa <= 1.0, "kappa", "must be in [0,1]");
    require(c.buffer_capacity >= 0, "buffer_capacity", "must be >= 0");
    require(c.replay_gamma >= 0.0, "replay_gamma", "must be >= 0");
    require(c.replay_fraction >= 0.0 && c.replay_fraction <= 1.0, "replay_fraction",
            "must be in [0,1]");
    require(c.replay_reuse_cap >= 0, "replay_reuse_cap", "must be >= 0");
    require(c.learning_rate > 0.0, "learning_rate", "must be > 0");
    require(c.adam_beta1 >= 0.0 && c.adam_beta1 < 1.0, "adam_beta1", "must be in [0,1)");
    require(c.adam_beta2 >= 0.0 && c.adam_beta2 < 1.0, "adam_beta2", "must be in [0,1)");
    require(c.adam_eps > 0.0, "adam_eps", "must be > 0");
    require(c.feature_dim >= 2, "feature_dim", "must be >= 2");
    require(c.features_per_candidate >= 1, "features_per_candidate", "must be >= 1");
    require(c.temperature > 0.0, "temperature", "must be > 0");
    require(c.workers >= 0, "workers", "must be >= 0");
    require(c.checkpoint_every >= 0, "checkpoint_every", "must be >= 0");
    return c;
}

SuiteConfig suite_config_from_json(const json& j) {
    reject_unknown(j,
                   {"counts", "screens_range", "branching_range", "distractor_range",
                    "horizon", "require_type_fraction", "require_swipe_fraction"},
                   "suite config");
    SuiteConfig c;
    if (j.contains("counts")) {
        const json& counts = j.at("counts");
        reject_unknown(counts, {"trivial", "easy", "medium", "hard", "unsolvable"},
                       "suite config counts");
        c.counts.trivial = read(counts, "trivial", 0);
        c.counts.easy = read(counts, "easy", 0);
        c.counts.medium = read(counts, "medium", 0);
        c.counts.hard = read(counts, "hard", 0);
        c.counts.unsolvable = read(counts, "unsolvable", 0);
        require(c.counts.trivial >= 0, "counts.trivial", "must be >= 0");
        require(c.counts.easy >= 0, "counts.easy", "must be >= 0");
        require(c.counts.medium >= 0, "counts.medium", "must be >= 0");
        require(c.counts.hard >= 0, "counts.hard", "must be >= 0");
        require(c.counts.unsolvable >= 0, "counts.unsolvable", "must be >= 0");
    }
    c.screens_range = read_range(j, "screens_range", c.screens_range);
    c.branching_range = read_range(j, "branching_range", c.branching_range);
    c.distractor_range = read_range(j, "distractor_range", c.distractor_range);
    require(c.screens_range[0] >= 2, "screens_range", "needs at least two screens");
    require(c.branching_range[0] >= 0, "branching_range", "must be >= 0");
    require(c.distractor_range[0] >= 0, "distractor_range", "must be >= 0");
    c.horizon = read(j, "horizon", c.horizon);
    require(c.horizon >= 1, "horizon", "must be >= 1");
    c.require_type_fraction = read(j, "require_type_fraction", c.require_type_fraction);
    c.require_swipe_fraction = read(j, "require_swipe_fraction", c.require_swipe_fraction);
    require(c.require_type_fraction >= 0.0 && c.require_type_fraction <= 1.0,
            "require_type_fraction", "must be in [0,1]");
    require(c.require_swipe_fraction >= 0.0 && c.require_swipe_fraction <= 1.0,
            "require_swipe_fraction", "must be in [0,1]");
    return c;
}

json train_config_to_json(const TrainConfig& c) {
    return json{{"group_size", c.group_size},
                {"tasks_per_iteration", c.tasks_per_iteration},
                {"iterations", c.iterations},
                {"epoch_length", c.epoch_length},
                {"horizon", c.horizon},
                {"clip_epsilon", c.clip_epsilon},
                {"kl_beta", c.kl_beta},
                {"spa_alpha", c.spa_alpha},
                {"kappa", c.kappa},
                {"buffer_capacity", c.buffer_capacity},
                {"replay_gamma", c.replay_gamma},
                {"replay_fraction", c.replay_fraction},
                {"replay_reuse_cap", c.replay_reuse_cap},
                {"learning_rate", c.learning_rate},
                {"grad_clip_norm", c.grad_clip_norm},
                {"adam_beta1", c.adam_beta1},
                {"adam_beta2", c.adam_beta2},
                {"adam_eps", c.adam_eps},
                {"feature_dim", c.feature_dim},
                {"features_per_candidate", c.features_per_candidate},
                {"temperature", c.temperature},
                {"workers", c.workers},
                {"global_seed", c.global_seed},
                {"checkpoint_every", c.checkpoint_every},
                {"fcf_enabled", c.fcf_enabled},
                {"log_trajectories", c.log_trajectories}};
}

json suite_config_to_json(const SuiteConfig& c) {
    return json{{"counts",
                 {{"trivial", c.counts.trivial},
                  {"easy", c.counts.easy},
                  {"medium", c.counts.medium},
                  {"hard", c.counts.hard},
                  {"unsolvable", c.counts.unsolvable}}},
                {"screens_range", c.screens_range},
                {"branching_range", c.branching_range},
                {"distractor_range", c.distractor_range},
                {"horizon", c.horizon},
                {"require_type_fraction", c.require_type_fraction},
                {"require_swipe_fraction", c.require_swipe_fraction}};
}

std::string config_hash(const json& canonical) {
    uint64_t h = fnv1a64(canonical.dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace aglab
