#include "aglab/suite_gen.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "aglab/errors.hpp"
#include "aglab/hash.hpp"
#include "aglab/oracle.hpp"

namespace aglab {

Tier tier_of_steps(int n) {
    if (n <= 3) return Tier::Trivial;
    if (n <= 6) return Tier::Easy;
    if (n <= 12) return Tier::Medium;
    return Tier::Hard;
}

namespace {

const char* kNouns[] = {"Inbox",    "Recorder", "Settings", "Gallery",  "Notes",   "Alarm",
                        "Contacts", "Weather",  "Music",    "Files",    "Camera",  "Calendar",
                        "Tasks",    "Wallet",   "Maps",     "Chat",     "Profile", "Backup",
                        "Radio",    "Podcasts", "Timer",    "Scanner",  "Library", "Albums",
                        "Reports",  "Drafts",   "Archive",  "Labels",   "Themes",  "Widgets",
                        "Storage",  "Network",  "Privacy",  "Sensors",  "Battery", "Display",
                        "Sound",    "Keyboard", "Accounts", "Updates"};
const char* kAdjectives[] = {"Audio",  "Smart",  "Quick",   "Shared", "Hidden", "Local",
                             "Cloud",  "Daily",  "Secure",  "Offline", "Recent", "Pinned"};
const char* kVerbs[] = {"Open", "View", "Browse", "Manage", "Show", "Configure", "Inspect",
                        "Review"};
const char* kLexiconPool[] = {"alpha", "bravo", "delta",  "echo",  "lima",   "nova",
                              "oscar", "tango", "umber",  "vista", "zephyr", "quartz"};
const char* kDecor[] = {"Synced 5 minutes ago", "3 new items",        "Storage 82% full",
                        "Connected",            "Last backup done",   "Do not disturb is on",
                        "2 drafts pending",     "Updates available"};

template <size_t N>
const char* pick(Rng& rng, const char* (&pool)[N]) {
    return pool[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(N) - 1))];
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(i) - 1))]);
}

enum class Hop { Tap, TypeWord, SwipeTap };

// Rows of fixed height stacked down each scroll page.
struct Placer {
    std::array<int, 2> next_row{0, 0};
    axml::Bounds place(int page) {
        int r = next_row[static_cast<size_t>(page)]++;
        return {40, 80 + r * 180, 1040, 220 + r * 180};
    }
};

struct ScreenBuilder {
    Screen screen;
    Placer placer;
    int next_id = 0;

    std::string add(UiElement e, int page) {
        e.id = "e" + std::to_string(next_id++);
        e.page = page;
        e.bounds = placer.place(page);
        screen.elements.push_back(e);
        if (page > 0 && screen.scroll_pages <= page) screen.scroll_pages = page + 1;
        return screen.elements.back().id;
    }

    void add_title(const std::string& title) {
        add({.class_name = "android.widget.TextView", .text = title}, 0);
    }

    void add_decor(Rng& rng) {
        add({.class_name = "android.widget.TextView", .text = pick(rng, kDecor)}, 0);
    }

    std::string add_button(const std::string& label, int page) {
        return add({.class_name = "android.widget.Button", .text = label, .clickable = true},
                   page);
    }

    std::string add_field(Rng& rng) {
        return add({.class_name = "android.widget.EditText",
                    .content_desc = std::string(pick(rng, kNouns)) + " input",
                    .focusable = true},
                   0);
    }
};

std::string fresh_title(Rng& rng, std::set<std::string>& used) {
    for (int tries = 0; tries < 16; ++tries) {
        std::string t = std::string(pick(rng, kAdjectives)) + " " + pick(rng, kNouns);
        if (rng.uniform01() < 0.25) t += " " + std::to_string(rng.uniform_int(2, 19));
        if (used.insert(t).second) return t;
    }
    std::string t = std::string(pick(rng, kAdjectives)) + " " + pick(rng, kNouns) + " " +
                    std::to_string(used.size());
    used.insert(t);
    return t;
}

std::string make_instruction(Rng& rng, const std::string& goal_title,
                             const std::optional<std::string>& typed_word, bool has_swipe) {
    std::string s;
    switch (rng.uniform_int(0, 3)) {
        case 0: s = "Open the " + goal_title + " screen."; break;
        case 1: s = "Navigate to " + goal_title + "."; break;
        case 2: s = "Go to the " + goal_title + " page."; break;
        default: s = "Find your way to " + goal_title + "."; break;
    }
    if (typed_word) {
        if (rng.uniform01() < 0.5)
            s = "Enter \"" + *typed_word + "\" where prompted, then " +
                (char)std::tolower(s[0]) + s.substr(1);
        else
            s += " You will need to type \"" + *typed_word + "\" along the way.";
    }
    if (has_swipe && rng.uniform01() < 0.5) s += " Scroll down if something is out of view.";
    return s;
}

// One construction attempt. Returns an unverified graph (the caller runs the
// BFS check) or nullopt when the screen budget cannot fit the plan.
std::optional<SuiteTask> build_attempt(const SuiteConfig& cfg, Rng& rng, Tier tier, int target) {
    int budget = target - 1;  // moves before the final Finish

    std::vector<Hop> hops;
    int rem = budget;
    if (rem >= 2 && rng.uniform01() < cfg.require_swipe_fraction) {
        hops.push_back(Hop::SwipeTap);
        rem -= 2;
    }
    if (rem >= 1 && rng.uniform01() < cfg.require_type_fraction) {
        hops.push_back(Hop::TypeWord);
        rem -= 1;
    }
    while (rem > 0) {
        hops.push_back(Hop::Tap);
        rem -= 1;
    }
    shuffle(hops, rng);

    int chain = static_cast<int>(hops.size()) + 1;
    if (chain > cfg.screens_range[1]) return std::nullopt;
    int sinks = static_cast<int>(rng.uniform_int(1, 2));
    sinks = std::min(sinks, cfg.screens_range[1] - chain);
    while (chain + sinks < cfg.screens_range[0]) ++sinks;

    ScreenGraph g;
    std::set<std::string> used_titles;
    std::vector<std::string> titles;
    std::vector<ScreenBuilder> builders(static_cast<size_t>(chain + sinks));
    for (int i = 0; i < chain; ++i) {
        builders[static_cast<size_t>(i)].screen.screen_id = "s" + std::to_string(i);
        titles.push_back(fresh_title(rng, used_titles));
    }
    for (int d = 0; d < sinks; ++d) {
        builders[static_cast<size_t>(chain + d)].screen.screen_id = "d" + std::to_string(d);
        titles.push_back(fresh_title(rng, used_titles));
    }

    // Lexicon: a small shuffled sample of typeable words.
    std::vector<std::string> lex(std::begin(kLexiconPool), std::end(kLexiconPool));
    shuffle(lex, rng);
    lex.resize(static_cast<size_t>(rng.uniform_int(2, 4)));
    g.lexicon = lex;

    std::optional<std::string> typed_word;
    bool has_swipe = false;

    for (int i = 0; i < chain + sinks; ++i) {
        ScreenBuilder& b = builders[static_cast<size_t>(i)];
        b.add_title(titles[static_cast<size_t>(i)]);
        int decor = static_cast<int>(
            rng.uniform_int(cfg.distractor_range[0], cfg.distractor_range[1]));
        for (int k = 0; k < decor; ++k) b.add_decor(rng);

        bool is_chain = i < chain;
        bool is_hop_screen = is_chain && i + 1 < chain;
        int clickables = static_cast<int>(
            rng.uniform_int(cfg.branching_range[0], cfg.branching_range[1]));

        if (is_hop_screen) {
            Hop hop = hops[static_cast<size_t>(i)];
            const std::string& next_id = builders[static_cast<size_t>(i + 1)].screen.screen_id;
            std::string label =
                std::string(pick(rng, kVerbs)) + " " + titles[static_cast<size_t>(i + 1)];
            switch (hop) {
                case Hop::Tap: {
                    std::string id = b.add_button(label, 0);
                    g.edges[{b.screen.screen_id, id}] = next_id;
                    clickables -= 1;
                    break;
                }
                case Hop::SwipeTap: {
                    std::string id = b.add_button(label, 1);
                    g.edges[{b.screen.screen_id, id}] = next_id;
                    clickables -= 1;
                    has_swipe = true;
                    break;
                }
                case Hop::TypeWord: {
                    std::string field = b.add_field(rng);
                    std::string word = lex[static_cast<size_t>(
                        rng.uniform_int(0, static_cast<int64_t>(lex.size()) - 1))];
                    g.type_targets[{b.screen.screen_id, field, word}] = next_id;
                    typed_word = word;
                    break;
                }
            }
        }

        // Wrong-path buttons: dead-end sinks, hops backward, or inert.
        for (int k = 0; k < clickables; ++k) {
            std::string label = std::string(pick(rng, kVerbs)) + " " + pick(rng, kNouns);
            double r = rng.uniform01();
            // Sinks get only inert buttons so they stay dead ends.
            bool inert = !is_chain || r >= 0.7;
            int page = (b.screen.scroll_pages > 1 && rng.uniform01() < 0.35) ? 1 : 0;
            std::string id = b.add_button(label, page);
            if (inert) continue;
            if (r < 0.4 && sinks > 0) {
                int d = static_cast<int>(rng.uniform_int(0, sinks - 1));
                g.edges[{b.screen.screen_id, id}] =
                    builders[static_cast<size_t>(chain + d)].screen.screen_id;
            } else {
                int j = static_cast<int>(rng.uniform_int(0, i));
                g.edges[{b.screen.screen_id, id}] =
                    builders[static_cast<size_t>(std::min(j, i))].screen.screen_id;
            }
        }
    }

    SuiteTask out;
    for (ScreenBuilder& b : builders) g.screens.push_back(std::move(b.screen));
    g.start_screen = "s0";
    g.goal.screen_id = "s" + std::to_string(chain - 1);
    if (typed_word && rng.uniform01() < 0.5) g.goal.required_typed = typed_word;

    if (tier == Tier::Unsolvable) {
        // Sever the last forward hop; nothing else ever points at the goal.
        const std::string goal_id = g.goal.screen_id;
        for (auto it = g.edges.begin(); it != g.edges.end();)
            it = it->second == goal_id ? g.edges.erase(it) : std::next(it);
        for (auto it = g.type_targets.begin(); it != g.type_targets.end();)
            it = it->second == goal_id ? g.type_targets.erase(it) : std::next(it);
    }

    g.finalize();
    out.graph = std::move(g);
    out.task.tier = tier;
    out.task.instruction =
        make_instruction(rng, titles[static_cast<size_t>(chain - 1)], typed_word, has_swipe);
    return out;
}

int pick_target(Rng& rng, Tier tier) {
    switch (tier) {
        case Tier::Trivial: return static_cast<int>(rng.uniform_int(2, 3));
        case Tier::Easy: return static_cast<int>(rng.uniform_int(4, 6));
        case Tier::Medium: return static_cast<int>(rng.uniform_int(7, 12));
        case Tier::Hard: return static_cast<int>(rng.uniform_int(13, 24));
        case Tier::Unsolvable: return static_cast<int>(rng.uniform_int(4, 8));
    }
    return 2;
}

SuiteTask generate_task(const SuiteConfig& cfg, uint64_t suite_seed, int slot, Tier tier) {
    for (uint64_t attempt = 0; attempt < 1000; ++attempt) {
        Rng rng(mix64(suite_seed ^ (static_cast<uint64_t>(slot) * kGolden) ^
                      (attempt + 0x51A7ull)));
        int target = pick_target(rng, tier);
        auto built = build_attempt(cfg, rng, tier, target);
        if (!built) continue;

        auto min_steps = oracle_min_steps(built->graph);
        if (tier == Tier::Unsolvable) {
            if (min_steps) continue;
        } else {
            if (!min_steps || *min_steps != target || tier_of_steps(*min_steps) != tier ||
                *min_steps >= cfg.horizon)
                continue;
            built->oracle_min_steps = min_steps;
        }
        built->task.task_id = "t" + std::string(slot < 10 ? "00" : slot < 100 ? "0" : "") +
                              std::to_string(slot);
        return std::move(*built);
    }
    throw GenerationOverBudget("could not generate a " + std::string(tier_name(tier)) +
                               " task within 1000 attempts (slot " + std::to_string(slot) + ")");
}

}  // namespace

Suite generate_suite(const SuiteConfig& cfg, uint64_t seed) {
    auto require_nonneg = [](int v, const char* name) {
        if (v < 0) throw ConfigError(std::string("negative count for ") + name);
    };
    require_nonneg(cfg.counts.trivial, "trivial");
    require_nonneg(cfg.counts.easy, "easy");
    require_nonneg(cfg.counts.medium, "medium");
    require_nonneg(cfg.counts.hard, "hard");
    require_nonneg(cfg.counts.unsolvable, "unsolvable");

    Suite suite;
    suite.suite_seed = seed;
    std::vector<std::pair<Tier, int>> plan = {{Tier::Trivial, cfg.counts.trivial},
                                              {Tier::Easy, cfg.counts.easy},
                                              {Tier::Medium, cfg.counts.medium},
                                              {Tier::Hard, cfg.counts.hard},
                                              {Tier::Unsolvable, cfg.counts.unsolvable}};
    int slot = 0;
    for (auto [tier, count] : plan)
        for (int k = 0; k < count; ++k) suite.tasks.push_back(generate_task(cfg, seed, slot++, tier));
    return suite;
}

}  // namespace aglab
