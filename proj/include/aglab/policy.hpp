#pragma once

#include <cstdint>
#include <filesystem>
#include <unordered_map>
#include <vector>

#include "aglab/hash.hpp"
#include "aglab/trajectory.hpp"

namespace aglab {

struct PolicyConfig {
    uint32_t feature_dim = 1u << 16;        // D: hashed weight table size
    uint32_t features_per_candidate = 32;   // k: indices per (observation, candidate)
    uint64_t hash_salt = 0xA61AB5EEDull;    // namespaces the whole feature space
    double temperature = 1.0;
};

struct PolicyParams {
    std::vector<double> weights;  // length = feature_dim
    uint64_t version = 0;         // bumped on every optimizer step
};

PolicyParams make_params(const PolicyConfig& cfg);

// Maps (observation, candidate) to k weight indices. The observation side is
// a k-slot min-hash signature over unigrams and bigrams of the
// whitespace-split compressed UI text, so nearby screens share signature
// slots; each candidate then salts the signature into concrete indices. Pure
// integer arithmetic end to end — identical indices on every platform.
// Signatures are memoized per UI string; instances are cheap and meant to be
// per-thread.
class Featurizer {
public:
    explicit Featurizer(PolicyConfig cfg);

    const PolicyConfig& config() const { return cfg_; }

    const std::vector<uint64_t>& ui_signature(const std::string& compressed_ui);
    uint64_t candidate_hash(const ActionCommand& cand) const;
    void features_into(const std::vector<uint64_t>& sig, uint64_t cand_hash,
                       std::vector<uint32_t>& out) const;
    std::vector<uint32_t> features(const Observation& obs, const ActionCommand& cand);

private:
    PolicyConfig cfg_;
    std::vector<uint64_t> slot_salts_;
    std::unordered_map<std::string, std::vector<uint64_t>> memo_;
};

struct ActionDistribution {
    std::vector<double> probs;
    std::vector<double> logprobs;
};

// Softmax over candidate logits, where each logit is the sum of the
// candidate's k hashed weights. Throws EmptyCandidateSet on an empty list and
// ConfigError on temperature <= 0.
ActionDistribution action_distribution(const PolicyParams& params, Featurizer& feat,
                                       const Observation& obs,
                                       const std::vector<ActionCommand>& candidates,
                                       double temperature);

// Same softmax from precomputed feature rows (the training loop reuses rows
// between the current and reference policies).
ActionDistribution distribution_from_rows(const PolicyParams& params,
                                          const std::vector<std::vector<uint32_t>>& rows,
                                          double temperature);

// Inverse-CDF sampling: smallest index whose cumulative probability exceeds u.
int sample_index(const ActionDistribution& dist, double u);
// Returns (index, logprob at index).
std::pair<int, double> sample_action(const ActionDistribution& dist, Rng& rng);
int argmax_index(const ActionDistribution& dist);  // first index on ties

// KL(p||q) over one candidate set. Throws SupportMismatch when p puts mass
// where q has none (or the sizes differ).
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q);
double entropy(const std::vector<double>& p);

// Binary checkpoint: 16-byte header (magic "AGLB", format version, D, k, all
// little-endian u32 after the magic) followed by D little-endian f64 weights.
// A JSON sidecar at <path>.json records {version, seed, config_hash}.
struct Checkpoint {
    PolicyParams params;
    uint32_t feature_dim = 0;
    uint32_t features_per_candidate = 0;
    uint64_t sidecar_version = 0;
    uint64_t sidecar_seed = 0;
    std::string sidecar_config_hash;
};

void save_checkpoint(const std::filesystem::path& path, const PolicyParams& params,
                     const PolicyConfig& cfg, uint64_t seed, const std::string& config_hash);
// Throws CheckpointMismatch on bad magic/version or a size that contradicts
// the header.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace aglab
