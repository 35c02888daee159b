#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace aglab::axml {

struct Bounds {
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    bool operator==(const Bounds&) const = default;
};

// One node of an Android view-hierarchy dump. Only the attributes the
// compressor cares about are modeled; everything else is dropped at parse
// time.
struct UiNode {
    std::string class_name;  // fully qualified, e.g. android.widget.TextView
    std::string text;
    std::string content_desc;
    std::string resource_id;
    std::string package;
    int index = 0;
    Bounds bounds;
    bool checkable = false;
    bool checked = false;
    bool clickable = false;
    bool enabled = false;
    bool focusable = false;
    bool focused = false;
    bool scrollable = false;
    bool long_clickable = false;
    bool password = false;
    bool selected = false;
    std::vector<UiNode> children;
};

struct CompressedLine {
    int depth = 0;
    std::string text;
    bool operator==(const CompressedLine&) const = default;
};

struct CompressedUi {
    std::vector<CompressedLine> lines;
    // Two spaces of indent per depth level, lines joined with '\n', no
    // trailing newline.
    std::string to_text() const;
};

// A node carries interaction semantics or content; everything else is layout
// scaffolding. 'enabled' and 'focused' deliberately do not count.
bool is_functional(const UiNode& n);

// Keeps a node only if its bounds lie entirely inside the screen and inside
// its parent's bounds; a removed node takes its whole subtree with it.
// Returns the surviving forest (the root itself may be removed).
std::vector<UiNode> filter_offscreen(const UiNode& root, int screen_w, int screen_h);

// Splices out non-functional nodes, promoting their children into the
// parent's child list at the same position. Applied bottom-up.
std::vector<UiNode> filter_redundant(const std::vector<UiNode>& forest);

// One line per node: ShortClass;content-desc;text;[x1,y1][x2,y2] followed by
// ';flag' for each set flag in fixed order. ';' inside text fields is escaped
// as '\;'.
std::string compress_node(const UiNode& n);

// Full pipeline: offscreen filter (unless keep_offscreen), redundancy filter,
// then pre-order rendering with depth = nesting level in the filtered forest.
CompressedUi compress(const UiNode& root, int screen_w, int screen_h, bool keep_offscreen = false);
CompressedUi compress_forest(const std::vector<UiNode>& roots, int screen_w, int screen_h,
                             bool keep_offscreen = false);

// Reads a standard hierarchy dump: XML elements named 'node' with the
// attribute names used above ('content-desc', 'resource-id', 'long-clickable',
// bounds as "[x1,y1][x2,y2]", booleans as "true"/"false"). Returns the
// top-level node elements in document order. Throws MalformedSyntax on bad
// XML.
std::vector<UiNode> parse_hierarchy_dump(std::string_view xml);

}  // namespace aglab::axml
