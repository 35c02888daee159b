#include "aglab/axml.hpp"

#include <cctype>
#include <charconv>

#include "aglab/errors.hpp"

namespace aglab::axml {

std::string CompressedUi::to_text() const {
    std::string out;
    for (size_t i = 0; i < lines.size(); ++i) {
        if (i > 0) out.push_back('\n');
        out.append(static_cast<size_t>(lines[i].depth) * 2, ' ');
        out.append(lines[i].text);
    }
    return out;
}

bool is_functional(const UiNode& n) {
    return n.checkable || n.checked || n.clickable || n.focusable || n.scrollable ||
           n.long_clickable || n.password || n.selected || !n.text.empty() ||
           !n.content_desc.empty();
}

namespace {

bool inside(const Bounds& inner, const Bounds& outer) {
    return inner.x1 >= outer.x1 && inner.y1 >= outer.y1 && inner.x2 <= outer.x2 &&
           inner.y2 <= outer.y2;
}

void filter_offscreen_rec(const UiNode& n, const Bounds& limit, std::vector<UiNode>& out) {
    if (!inside(n.bounds, limit)) return;  // drops the whole subtree
    UiNode kept = n;
    kept.children.clear();
    for (const UiNode& c : n.children) filter_offscreen_rec(c, n.bounds, kept.children);
    out.push_back(std::move(kept));
}

void splice_rec(const UiNode& n, std::vector<UiNode>& out) {
    std::vector<UiNode> kids;
    for (const UiNode& c : n.children) splice_rec(c, kids);
    if (is_functional(n)) {
        UiNode kept = n;
        kept.children = std::move(kids);
        out.push_back(std::move(kept));
    } else {
        for (UiNode& k : kids) out.push_back(std::move(k));
    }
}

void append_escaped(std::string& out, const std::string& s) {
    for (char c : s) {
        if (c == ';') out.push_back('\\');
        out.push_back(c);
    }
}

void render_rec(const UiNode& n, int depth, CompressedUi& ui) {
    ui.lines.push_back({depth, compress_node(n)});
    for (const UiNode& c : n.children) render_rec(c, depth + 1, ui);
}

}  // namespace

std::vector<UiNode> filter_offscreen(const UiNode& root, int screen_w, int screen_h) {
    std::vector<UiNode> out;
    filter_offscreen_rec(root, Bounds{0, 0, screen_w, screen_h}, out);
    return out;
}

std::vector<UiNode> filter_redundant(const std::vector<UiNode>& forest) {
    std::vector<UiNode> out;
    for (const UiNode& n : forest) splice_rec(n, out);
    return out;
}

std::string compress_node(const UiNode& n) {
    std::string short_class = n.class_name;
    if (auto dot = short_class.rfind('.'); dot != std::string::npos)
        short_class = short_class.substr(dot + 1);

    std::string out = short_class;
    out.push_back(';');
    append_escaped(out, n.content_desc);
    out.push_back(';');
    append_escaped(out, n.text);
    out += ";[" + std::to_string(n.bounds.x1) + "," + std::to_string(n.bounds.y1) + "][" +
           std::to_string(n.bounds.x2) + "," + std::to_string(n.bounds.y2) + "]";

    if (n.checkable) out += ";checkable";
    if (n.checked) out += ";checked";
    if (n.clickable) out += ";clickable";
    if (n.focusable) out += ";focusable";
    if (n.scrollable) out += ";scrollable";
    if (n.long_clickable) out += ";long-clickable";
    if (n.password) out += ";password";
    if (n.selected) out += ";selected";
    return out;
}

CompressedUi compress_forest(const std::vector<UiNode>& roots, int screen_w, int screen_h,
                             bool keep_offscreen) {
    std::vector<UiNode> forest;
    if (keep_offscreen) {
        forest = roots;
    } else {
        for (const UiNode& r : roots) {
            auto kept = filter_offscreen(r, screen_w, screen_h);
            for (UiNode& n : kept) forest.push_back(std::move(n));
        }
    }
    forest = filter_redundant(forest);
    CompressedUi ui;
    for (const UiNode& n : forest) render_rec(n, 0, ui);
    return ui;
}

CompressedUi compress(const UiNode& root, int screen_w, int screen_h, bool keep_offscreen) {
    return compress_forest({root}, screen_w, screen_h, keep_offscreen);
}

// ---- hierarchy dump parsing -------------------------------------------------

namespace {

struct XmlElement {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<XmlElement> children;

    const std::string* attr(std::string_view key) const {
        for (const auto& [k, v] : attrs)
            if (k == key) return &v;
        return nullptr;
    }
};

// Just enough XML for uiautomator-style dumps: prolog, elements, attributes,
// and the five named entities plus numeric character references.
class XmlReader {
public:
    explicit XmlReader(std::string_view s) : s_(s) {}

    std::vector<XmlElement> parse_document() {
        std::vector<XmlElement> roots;
        skip_misc();
        while (pos_ < s_.size()) {
            roots.push_back(parse_element());
            skip_misc();
        }
        if (roots.empty()) throw MalformedSyntax("empty XML document");
        return roots;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    void skip_misc() {
        for (;;) {
            skip_ws();
            if (s_.compare(pos_, 2, "<?") == 0) {
                size_t end = s_.find("?>", pos_);
                if (end == std::string_view::npos) throw MalformedSyntax("unterminated prolog");
                pos_ = end + 2;
            } else if (s_.compare(pos_, 4, "<!--") == 0) {
                size_t end = s_.find("-->", pos_);
                if (end == std::string_view::npos) throw MalformedSyntax("unterminated comment");
                pos_ = end + 3;
            } else {
                return;
            }
        }
    }

    XmlElement parse_element() {
        if (pos_ >= s_.size() || s_[pos_] != '<') throw MalformedSyntax("expected '<'");
        ++pos_;
        XmlElement el;
        el.name = read_name();
        for (;;) {
            skip_ws();
            if (pos_ >= s_.size()) throw MalformedSyntax("unterminated element");
            if (s_[pos_] == '/') {
                if (s_.compare(pos_, 2, "/>") != 0) throw MalformedSyntax("expected '/>'");
                pos_ += 2;
                return el;
            }
            if (s_[pos_] == '>') {
                ++pos_;
                parse_children(el);
                return el;
            }
            std::string key = read_name();
            skip_ws();
            if (pos_ >= s_.size() || s_[pos_] != '=') throw MalformedSyntax("expected '='");
            ++pos_;
            skip_ws();
            el.attrs.emplace_back(std::move(key), read_quoted());
        }
    }

    void parse_children(XmlElement& el) {
        for (;;) {
            // Dumps carry no meaningful text content; skip to the next tag.
            size_t lt = s_.find('<', pos_);
            if (lt == std::string_view::npos) throw MalformedSyntax("missing close tag");
            pos_ = lt;
            if (s_.compare(pos_, 2, "</") == 0) {
                pos_ += 2;
                std::string name = read_name();
                if (name != el.name) throw MalformedSyntax("mismatched close tag");
                skip_ws();
                if (pos_ >= s_.size() || s_[pos_] != '>') throw MalformedSyntax("expected '>'");
                ++pos_;
                return;
            }
            if (s_.compare(pos_, 4, "<!--") == 0) {
                size_t end = s_.find("-->", pos_);
                if (end == std::string_view::npos) throw MalformedSyntax("unterminated comment");
                pos_ = end + 3;
                continue;
            }
            el.children.push_back(parse_element());
        }
    }

    std::string read_name() {
        size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' ||
                s_[pos_] == '_' || s_[pos_] == ':' || s_[pos_] == '.'))
            ++pos_;
        if (pos_ == start) throw MalformedSyntax("expected XML name");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string read_quoted() {
        if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\''))
            throw MalformedSyntax("expected quoted attribute value");
        char quote = s_[pos_++];
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != quote) {
            char c = s_[pos_];
            if (c == '&') {
                out += read_entity();
            } else {
                out.push_back(c);
                ++pos_;
            }
        }
        if (pos_ >= s_.size()) throw MalformedSyntax("unterminated attribute value");
        ++pos_;
        return out;
    }

    std::string read_entity() {
        size_t semi = s_.find(';', pos_);
        if (semi == std::string_view::npos) throw MalformedSyntax("unterminated entity");
        std::string_view body = s_.substr(pos_ + 1, semi - pos_ - 1);
        pos_ = semi + 1;
        if (body == "amp") return "&";
        if (body == "lt") return "<";
        if (body == "gt") return ">";
        if (body == "quot") return "\"";
        if (body == "apos") return "'";
        if (!body.empty() && body[0] == '#') {
            int code = 0;
            bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
            std::string_view digits = body.substr(hex ? 2 : 1);
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), code,
                                           hex ? 16 : 10);
            if (ec != std::errc() || p != digits.data() + digits.size() || code <= 0 ||
                code > 127)
                throw MalformedSyntax("unsupported character reference");
            return std::string(1, static_cast<char>(code));
        }
        throw MalformedSyntax("unknown entity '&" + std::string(body) + ";'");
    }

    std::string_view s_;
    size_t pos_ = 0;
};

Bounds parse_bounds_attr(const std::string& s) {
    Bounds b;
    int vals[4];
    size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        while (pos < s.size() && (s[pos] == '[' || s[pos] == ']' || s[pos] == ',')) ++pos;
        size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                                  s[pos] == '-'))
            ++pos;
        auto [p, ec] = std::from_chars(s.data() + start, s.data() + pos, vals[i]);
        if (ec != std::errc() || p != s.data() + pos || start == pos)
            throw MalformedSyntax("bad bounds attribute \"" + s + "\"");
    }
    b.x1 = vals[0];
    b.y1 = vals[1];
    b.x2 = vals[2];
    b.y2 = vals[3];
    return b;
}

bool parse_bool_attr(const std::string& s) { return s == "true"; }

UiNode node_from_element(const XmlElement& el) {
    UiNode n;
    auto str = [&](std::string_view key, std::string& dst) {
        if (const std::string* v = el.attr(key)) dst = *v;
    };
    auto flag = [&](std::string_view key, bool& dst) {
        if (const std::string* v = el.attr(key)) dst = parse_bool_attr(*v);
    };
    str("class", n.class_name);
    str("text", n.text);
    str("content-desc", n.content_desc);
    str("resource-id", n.resource_id);
    str("package", n.package);
    if (const std::string* v = el.attr("index")) {
        auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), n.index);
        if (ec != std::errc()) throw MalformedSyntax("bad index attribute");
    }
    if (const std::string* v = el.attr("bounds")) n.bounds = parse_bounds_attr(*v);
    flag("checkable", n.checkable);
    flag("checked", n.checked);
    flag("clickable", n.clickable);
    flag("enabled", n.enabled);
    flag("focusable", n.focusable);
    flag("focused", n.focused);
    flag("scrollable", n.scrollable);
    flag("long-clickable", n.long_clickable);
    flag("password", n.password);
    flag("selected", n.selected);
    for (const XmlElement& c : el.children)
        if (c.name == "node") n.children.push_back(node_from_element(c));
    return n;
}

void collect_nodes(const XmlElement& el, std::vector<UiNode>& out) {
    if (el.name == "node") {
        out.push_back(node_from_element(el));
        return;
    }
    for (const XmlElement& c : el.children) collect_nodes(c, out);
}

}  // namespace

std::vector<UiNode> parse_hierarchy_dump(std::string_view xml) {
    XmlReader reader(xml);
    std::vector<UiNode> out;
    for (const XmlElement& root : reader.parse_document()) collect_nodes(root, out);
    if (out.empty()) throw MalformedSyntax("no <node> elements in document");
    return out;
}

}  // namespace aglab::axml
