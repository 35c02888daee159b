#include "aglab/policy.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>

#include "json.hpp"

#include "aglab/errors.hpp"

namespace aglab {

PolicyParams make_params(const PolicyConfig& cfg) {
    PolicyParams p;
    p.weights.assign(cfg.feature_dim, 0.0);
    return p;
}

Featurizer::Featurizer(PolicyConfig cfg) : cfg_(cfg) {
    slot_salts_.reserve(cfg_.features_per_candidate);
    for (uint32_t j = 0; j < cfg_.features_per_candidate; ++j)
        slot_salts_.push_back(mix64(cfg_.hash_salt + (j + 1) * kGolden));
}

const std::vector<uint64_t>& Featurizer::ui_signature(const std::string& compressed_ui) {
    auto it = memo_.find(compressed_ui);
    if (it != memo_.end()) return it->second;

    // Unigram and bigram FNV hashes over whitespace-separated tokens.
    std::vector<uint64_t> grams;
    size_t pos = 0;
    uint64_t prev = 0;
    bool have_prev = false;
    while (pos < compressed_ui.size()) {
        while (pos < compressed_ui.size() && std::isspace(static_cast<unsigned char>(
                                                 compressed_ui[pos])))
            ++pos;
        size_t start = pos;
        while (pos < compressed_ui.size() && !std::isspace(static_cast<unsigned char>(
                                                 compressed_ui[pos])))
            ++pos;
        if (pos == start) break;
        uint64_t h = fnv1a64({compressed_ui.data() + start, pos - start});
        grams.push_back(h);
        if (have_prev) grams.push_back(mix64(prev ^ (h * kGolden)));
        prev = h;
        have_prev = true;
    }

    std::vector<uint64_t> sig(cfg_.features_per_candidate);
    for (uint32_t j = 0; j < cfg_.features_per_candidate; ++j) {
        uint64_t best = mix64(slot_salts_[j] ^ 0x5349474Eull);  // empty-UI fallback
        bool first = true;
        for (uint64_t g : grams) {
            uint64_t v = mix64(g ^ slot_salts_[j]);
            if (first || v < best) best = v;
            first = false;
        }
        sig[j] = best;
    }
    return memo_.emplace(compressed_ui, std::move(sig)).first->second;
}

uint64_t Featurizer::candidate_hash(const ActionCommand& cand) const {
    return fnv1a64(serialize_action(cand));
}

void Featurizer::features_into(const std::vector<uint64_t>& sig, uint64_t cand_hash,
                               std::vector<uint32_t>& out) const {
    out.resize(cfg_.features_per_candidate);
    for (uint32_t j = 0; j < cfg_.features_per_candidate; ++j)
        out[j] = static_cast<uint32_t>(mix64(sig[j] ^ mix64(cand_hash ^ slot_salts_[j])) %
                                       cfg_.feature_dim);
}

std::vector<uint32_t> Featurizer::features(const Observation& obs, const ActionCommand& cand) {
    std::vector<uint32_t> out;
    features_into(ui_signature(obs.compressed_ui), candidate_hash(cand), out);
    return out;
}

namespace {

ActionDistribution softmax_logits(std::vector<double> logits, double temperature) {
    if (logits.empty()) throw EmptyCandidateSet("no candidates to score");
    if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");

    double max_logit = logits[0];
    for (double z : logits) max_logit = std::max(max_logit, z);
    double sum = 0.0;
    std::vector<double> shifted(logits.size());
    for (size_t i = 0; i < logits.size(); ++i) {
        shifted[i] = (logits[i] - max_logit) / temperature;
        sum += std::exp(shifted[i]);
    }
    double log_sum = std::log(sum);

    ActionDistribution dist;
    dist.probs.resize(logits.size());
    dist.logprobs.resize(logits.size());
    for (size_t i = 0; i < logits.size(); ++i) {
        dist.logprobs[i] = shifted[i] - log_sum;
        dist.probs[i] = std::exp(dist.logprobs[i]);
    }
    return dist;
}

}  // namespace

ActionDistribution distribution_from_rows(const PolicyParams& params,
                                          const std::vector<std::vector<uint32_t>>& rows,
                                          double temperature) {
    std::vector<double> logits(rows.size(), 0.0);
    for (size_t c = 0; c < rows.size(); ++c)
        for (uint32_t idx : rows[c]) logits[c] += params.weights[idx];
    return softmax_logits(std::move(logits), temperature);
}

ActionDistribution action_distribution(const PolicyParams& params, Featurizer& feat,
                                       const Observation& obs,
                                       const std::vector<ActionCommand>& candidates,
                                       double temperature) {
    if (candidates.empty()) throw EmptyCandidateSet("no candidates to score");
    const auto& sig = feat.ui_signature(obs.compressed_ui);
    std::vector<double> logits(candidates.size(), 0.0);
    std::vector<uint32_t> row;
    for (size_t c = 0; c < candidates.size(); ++c) {
        feat.features_into(sig, feat.candidate_hash(candidates[c]), row);
        for (uint32_t idx : row) logits[c] += params.weights[idx];
    }
    return softmax_logits(std::move(logits), temperature);
}

int sample_index(const ActionDistribution& dist, double u) {
    double cum = 0.0;
    for (size_t i = 0; i < dist.probs.size(); ++i) {
        cum += dist.probs[i];
        if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(dist.probs.size()) - 1;
}

std::pair<int, double> sample_action(const ActionDistribution& dist, Rng& rng) {
    int idx = sample_index(dist, rng.uniform01());
    return {idx, dist.logprobs[static_cast<size_t>(idx)]};
}

int argmax_index(const ActionDistribution& dist) {
    int best = 0;
    for (size_t i = 1; i < dist.probs.size(); ++i)
        if (dist.probs[i] > dist.probs[static_cast<size_t>(best)]) best = static_cast<int>(i);
    return best;
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size())
        throw SupportMismatch("distributions have different candidate counts");
    double kl = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) throw SupportMismatch("p has mass where q has none");
        kl += p[i] * (std::log(p[i]) - std::log(q[i]));
    }
    return kl;
}

double entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log(v);
    return h;
}

// ---- checkpoints -------------------------------------------------------------

namespace {

constexpr uint32_t kFormatVersion = 1;

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

uint32_t get_u32(const unsigned char* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const PolicyParams& params,
                     const PolicyConfig& cfg, uint64_t seed, const std::string& config_hash) {
    std::string blob = "AGLB";
    put_u32(blob, kFormatVersion);
    put_u32(blob, cfg.feature_dim);
    put_u32(blob, cfg.features_per_candidate);
    blob.reserve(blob.size() + params.weights.size() * 8);
    for (double w : params.weights) {
        uint64_t bits = std::bit_cast<uint64_t>(w);
        for (int i = 0; i < 8; ++i) blob.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write checkpoint " + path.string());
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));

    nlohmann::json sidecar = {{"version", params.version},
                              {"seed", seed},
                              {"config_hash", config_hash}};
    std::ofstream side(path.string() + ".json", std::ios::binary);
    side << sidecar.dump(2) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointMismatch("cannot open checkpoint " + path.string());
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (blob.size() < 16 || blob.compare(0, 4, "AGLB") != 0)
        throw CheckpointMismatch("bad checkpoint magic in " + path.string());
    const unsigned char* p = reinterpret_cast<const unsigned char*>(blob.data());
    uint32_t version = get_u32(p + 4);
    if (version != kFormatVersion)
        throw CheckpointMismatch("unsupported checkpoint format version " +
                                 std::to_string(version));
    Checkpoint ck;
    ck.feature_dim = get_u32(p + 8);
    ck.features_per_candidate = get_u32(p + 12);
    if (ck.feature_dim == 0 || blob.size() != 16 + static_cast<size_t>(ck.feature_dim) * 8)
        throw CheckpointMismatch("checkpoint size does not match header in " + path.string());

    ck.params.weights.resize(ck.feature_dim);
    for (uint32_t i = 0; i < ck.feature_dim; ++i) {
        uint64_t bits = 0;
        const unsigned char* q = p + 16 + static_cast<size_t>(i) * 8;
        for (int b = 0; b < 8; ++b) bits |= static_cast<uint64_t>(q[b]) << (8 * b);
        ck.params.weights[i] = std::bit_cast<double>(bits);
    }

    std::ifstream side(path.string() + ".json");
    if (side) {
        nlohmann::json j = nlohmann::json::parse(side, nullptr, false);
        if (!j.is_discarded()) {
            ck.sidecar_version = j.value("version", uint64_t{0});
            ck.sidecar_seed = j.value("seed", uint64_t{0});
            ck.sidecar_config_hash = j.value("config_hash", std::string{});
            ck.params.version = ck.sidecar_version;
        }
    }
    return ck;
}

}  // namespace aglab
