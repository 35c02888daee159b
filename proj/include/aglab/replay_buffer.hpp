#pragma once

#include "aglab/trajectory.hpp"

namespace aglab {

struct ReplayEntry {
    Trajectory trajectory;  // stored as sampled, behavior logprobs intact
    double stored_advantage = 0.0;
    int reuse_count = 0;
    uint64_t seq = 0;  // insertion order, used for deterministic tie-breaks
};

struct ReplayDrawConfig {
    double replay_fraction = 0.25;  // replayed : fresh ratio cap
    double gamma = 1.0;             // hard cap as a multiple of fresh count
    int reuse_cap = 2;              // max draws per stored entry
};

// Bounded store of high-advantage successful trajectories. Insertion keeps
// the top ceil(kappa * |eligible|) fresh successes with positive advantage;
// overflow evicts the lowest stored advantage (oldest first on ties), so the
// buffer's minimum never decreases from an overflowing insert. Draws are
// planned (pure) and committed separately so a failed training iteration
// leaves no trace.
class ReplayBuffer {
public:
    explicit ReplayBuffer(size_t capacity) : capacity_(capacity) {}

    size_t size() const { return entries_.size(); }
    size_t capacity() const { return capacity_; }
    const std::vector<ReplayEntry>& entries() const { return entries_; }

    // Takes every fresh (trajectory, advantage) pair of the iteration;
    // filters to successes with advantage > 0 internally. Returns how many
    // entries were inserted.
    int insert_eligible(const std::vector<std::pair<const Trajectory*, double>>& fresh,
                        double kappa);

    struct DrawPlan {
        std::vector<size_t> entry_indices;
    };
    // Top stored advantages among entries under the reuse cap, limited to
    // min(floor(replay_fraction*fresh), floor(gamma*fresh), eligible).
    DrawPlan plan_draw(int fresh_count, const ReplayDrawConfig& cfg) const;
    // Clones for the batch: origin=Replayed, replay_count = reuse after draw.
    std::vector<std::pair<Trajectory, double>> materialize(const DrawPlan& plan) const;
    void commit_draw(const DrawPlan& plan);

private:
    size_t capacity_;
    std::vector<ReplayEntry> entries_;
    uint64_t next_seq_ = 0;
};

}  // namespace aglab
