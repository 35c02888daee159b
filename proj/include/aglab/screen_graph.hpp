#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "aglab/axml.hpp"
#include "aglab/trajectory.hpp"

namespace aglab {

// One interactive (or decorative) widget on a screen. Bounds are viewport
// coordinates within the element's own scroll page; elements never straddle
// pages.
struct UiElement {
    std::string id;
    std::string class_name;
    std::string text;
    std::string content_desc;
    bool clickable = false;
    bool focusable = false;   // text fields; focused automatically on entry
    bool scrollable = false;
    bool checkable = false;
    bool long_clickable = false;
    int page = 0;
    axml::Bounds bounds;
};

struct Screen {
    std::string screen_id;
    int scroll_pages = 1;
    std::vector<UiElement> elements;  // document order
};

struct GoalSpec {
    std::string screen_id;
    std::optional<std::string> required_typed;
};

// Rendering of one (screen, scroll page): the compressed UI text plus which
// elements are tappable there. Built once per graph; episodes only read it.
struct PageView {
    std::string compressed_ui;
    std::vector<int> visible_clickables;  // indices into Screen::elements
};

struct ScreenGraph {
    int screen_w = 1080;
    int screen_h = 2400;
    std::vector<Screen> screens;
    // (screen_id, element_id) -> destination screen for Tap.
    std::map<std::pair<std::string, std::string>, std::string> edges;
    // (screen_id, element_id, text) -> destination screen for Type.
    std::map<std::tuple<std::string, std::string, std::string>, std::string> type_targets;
    std::string start_screen;
    GoalSpec goal;
    std::vector<std::string> lexicon;  // the finite set of typeable strings

    // Derived state; rebuilt by finalize() after construction/deserialization.
    std::map<std::string, int> screen_index;
    std::vector<std::vector<PageView>> pages;  // [screen][scroll page]
    std::vector<int> focus_field;              // first focusable element per screen, -1 if none

    void finalize();
    int index_of(const std::string& screen_id) const;

    // The full node tree rendered for (screen, scroll): a viewport root whose
    // children are every element shifted by the scroll offset, so offscreen
    // filtering sees the neighbours of the visible page.
    axml::UiNode render_tree(int screen, int scroll) const;
};

struct SuiteTask {
    TaskRef task;
    ScreenGraph graph;
    std::optional<int> oracle_min_steps;  // nullopt when the goal is unreachable
};

struct Suite {
    uint64_t suite_seed = 0;
    std::vector<SuiteTask> tasks;

    const SuiteTask& find(const std::string& task_id) const;  // throws UnknownTask
};

std::string suite_to_json(const Suite& suite);
Suite suite_from_json(const std::string& text);
void save_suite(const std::filesystem::path& path, const Suite& suite);
Suite load_suite(const std::filesystem::path& path);

}  // namespace aglab
