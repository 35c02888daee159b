#include "aglab/oracle.hpp"

#include <cstdint>
#include <deque>
#include <unordered_set>

namespace aglab {

namespace {

// Search state, packed for the visited set: current screen, one-deep back
// history, scroll page, and the set of lexicon words typed so far. Focus is a
// function of the screen, so it needs no slot.
struct State {
    int screen;
    int prev;  // -1 = none
    int scroll;
    uint32_t typed;  // bitmask over graph.lexicon

    uint64_t pack() const {
        return static_cast<uint64_t>(screen) | (static_cast<uint64_t>(prev + 1) << 12) |
               (static_cast<uint64_t>(scroll) << 24) | (static_cast<uint64_t>(typed) << 32);
    }
};

struct Tables {
    // [screen][page] -> list of tap destinations (-1 for no-edge elements).
    std::vector<std::vector<std::vector<int>>> tap_to;
    // [screen][lexicon index] -> type destination, -1 when no transition.
    std::vector<std::vector<int>> type_to;
    std::vector<bool> has_field;
    std::vector<int> scroll_pages;
    int start = 0;
    int goal = -1;
    int required_bit = -1;  // lexicon index of goal.required_typed, -1 if none
};

Tables build_tables(const ScreenGraph& g) {
    Tables t;
    size_t n = g.screens.size();
    t.tap_to.resize(n);
    t.type_to.resize(n);
    t.has_field.resize(n);
    t.scroll_pages.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const Screen& s = g.screens[i];
        t.scroll_pages[i] = s.scroll_pages;
        t.has_field[i] = g.focus_field[i] >= 0;
        t.tap_to[i].resize(static_cast<size_t>(s.scroll_pages));
        for (int p = 0; p < s.scroll_pages; ++p) {
            for (int idx : g.pages[i][static_cast<size_t>(p)].visible_clickables) {
                auto it = g.edges.find({s.screen_id, s.elements[static_cast<size_t>(idx)].id});
                t.tap_to[i][static_cast<size_t>(p)].push_back(
                    it == g.edges.end() ? -1 : g.index_of(it->second));
            }
        }
        t.type_to[i].assign(g.lexicon.size(), -1);
        if (t.has_field[i]) {
            const std::string& field =
                s.elements[static_cast<size_t>(g.focus_field[i])].id;
            for (size_t w = 0; w < g.lexicon.size(); ++w) {
                auto it = g.type_targets.find({s.screen_id, field, g.lexicon[w]});
                if (it != g.type_targets.end()) t.type_to[i][w] = g.index_of(it->second);
            }
        }
    }
    t.start = g.index_of(g.start_screen);
    t.goal = g.index_of(g.goal.screen_id);
    if (g.goal.required_typed)
        for (size_t w = 0; w < g.lexicon.size(); ++w)
            if (g.lexicon[w] == *g.goal.required_typed) t.required_bit = static_cast<int>(w);
    return t;
}

bool satisfied(const Tables& t, const State& s) {
    if (s.screen != t.goal) return false;
    return t.required_bit < 0 || (s.typed >> t.required_bit) & 1u;
}

}  // namespace

std::optional<int> oracle_min_steps(const ScreenGraph& graph) {
    Tables t = build_tables(graph);
    if (t.start < 0 || t.goal < 0) return std::nullopt;
    if (graph.goal.required_typed && t.required_bit < 0) return std::nullopt;

    State start{t.start, -1, 0, 0};
    if (satisfied(t, start)) return 1;  // Finish alone

    std::deque<std::pair<State, int>> queue{{start, 0}};
    std::unordered_set<uint64_t> seen{start.pack()};

    auto push = [&](State next, int dist) -> std::optional<int> {
        if (!seen.insert(next.pack()).second) return std::nullopt;
        if (satisfied(t, next)) return dist + 2;  // the move plus Finish
        queue.emplace_back(next, dist + 1);
        return std::nullopt;
    };

    while (!queue.empty()) {
        auto [s, dist] = queue.front();
        queue.pop_front();

        const size_t si = static_cast<size_t>(s.screen);
        // Taps on the current page; no-edge elements change nothing.
        for (int to : t.tap_to[si][static_cast<size_t>(s.scroll)]) {
            if (to < 0) continue;
            if (auto r = push({to, s.screen, 0, s.typed}, dist)) return r;
        }
        // Typing any lexicon word when a field has focus.
        if (t.has_field[si]) {
            for (size_t w = 0; w < t.type_to[si].size(); ++w) {
                uint32_t typed = s.typed | (1u << w);
                int to = t.type_to[si][w];
                State next = to >= 0 ? State{to, s.screen, 0, typed}
                                     : State{s.screen, s.prev, s.scroll, typed};
                if (next.pack() == s.pack()) continue;
                if (auto r = push(next, dist)) return r;
            }
        }
        // Swipes, skipping the clamped no-ops at either end.
        if (t.scroll_pages[si] > 1) {
            if (s.scroll + 1 < t.scroll_pages[si])
                if (auto r = push({s.screen, s.prev, s.scroll + 1, s.typed}, dist)) return r;
            if (s.scroll > 0)
                if (auto r = push({s.screen, s.prev, s.scroll - 1, s.typed}, dist)) return r;
        }
        // Back and Home.
        if (s.prev >= 0)
            if (auto r = push({s.prev, -1, 0, s.typed}, dist)) return r;
        if (auto r = push({t.start, s.screen, 0, s.typed}, dist)) return r;
    }
    return std::nullopt;
}

}  // namespace aglab
