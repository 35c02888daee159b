#include "aglab/replay_buffer.hpp"

#include <algorithm>
#include <cmath>

namespace aglab {

int ReplayBuffer::insert_eligible(
    const std::vector<std::pair<const Trajectory*, double>>& fresh, double kappa) {
    std::vector<std::pair<const Trajectory*, double>> eligible;
    for (const auto& [traj, adv] : fresh)
        if (traj->success() && adv > 0.0) eligible.push_back({traj, adv});
    if (eligible.empty() || kappa <= 0.0) return 0;

    size_t take = static_cast<size_t>(
        std::ceil(kappa * static_cast<double>(eligible.size())));
    take = std::min(take, eligible.size());
    std::stable_sort(eligible.begin(), eligible.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    for (size_t i = 0; i < take; ++i) {
        ReplayEntry e;
        e.trajectory = *eligible[i].first;
        e.stored_advantage = eligible[i].second;
        e.seq = next_seq_++;
        entries_.push_back(std::move(e));
    }
    while (entries_.size() > capacity_) {
        size_t worst = 0;
        for (size_t i = 1; i < entries_.size(); ++i) {
            if (entries_[i].stored_advantage < entries_[worst].stored_advantage ||
                (entries_[i].stored_advantage == entries_[worst].stored_advantage &&
                 entries_[i].seq < entries_[worst].seq))
                worst = i;
        }
        entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(worst));
    }
    return static_cast<int>(take);
}

ReplayBuffer::DrawPlan ReplayBuffer::plan_draw(int fresh_count,
                                               const ReplayDrawConfig& cfg) const {
    DrawPlan plan;
    if (fresh_count <= 0) return plan;
    size_t want = std::min(
        static_cast<size_t>(std::floor(cfg.replay_fraction * fresh_count)),
        static_cast<size_t>(std::floor(cfg.gamma * fresh_count)));
    if (want == 0) return plan;

    std::vector<size_t> ranked;
    for (size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].reuse_count < cfg.reuse_cap) ranked.push_back(i);
    std::sort(ranked.begin(), ranked.end(), [&](size_t a, size_t b) {
        if (entries_[a].stored_advantage != entries_[b].stored_advantage)
            return entries_[a].stored_advantage > entries_[b].stored_advantage;
        return entries_[a].seq < entries_[b].seq;
    });
    ranked.resize(std::min(want, ranked.size()));
    plan.entry_indices = std::move(ranked);
    return plan;
}

std::vector<std::pair<Trajectory, double>> ReplayBuffer::materialize(
    const DrawPlan& plan) const {
    std::vector<std::pair<Trajectory, double>> out;
    out.reserve(plan.entry_indices.size());
    for (size_t idx : plan.entry_indices) {
        Trajectory t = entries_[idx].trajectory;
        t.origin = Origin::Replayed;
        t.replay_count = entries_[idx].reuse_count + 1;
        out.push_back({std::move(t), entries_[idx].stored_advantage});
    }
    return out;
}

void ReplayBuffer::commit_draw(const DrawPlan& plan) {
    for (size_t idx : plan.entry_indices) entries_[idx].reuse_count += 1;
}

}  // namespace aglab
