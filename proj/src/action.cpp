#include "aglab/action.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <vector>

#include "aglab/errors.hpp"

namespace aglab {

ActionCommand ActionCommand::tap(Rect r) { return {.kind = ActionKind::Tap, .element = r}; }
ActionCommand ActionCommand::type_text(std::string t) {
    return {.kind = ActionKind::Type, .text = std::move(t)};
}
ActionCommand ActionCommand::swipe(SwipeDirection d, SwipeDist dist, std::optional<Rect> r) {
    return {.kind = ActionKind::Swipe, .element = r, .direction = d, .dist = dist};
}
ActionCommand ActionCommand::long_press(Rect r) {
    return {.kind = ActionKind::LongPress, .element = r};
}
ActionCommand ActionCommand::launch(std::string app) {
    return {.kind = ActionKind::Launch, .app = std::move(app)};
}
ActionCommand ActionCommand::back() { return {.kind = ActionKind::Back}; }
ActionCommand ActionCommand::home() { return {.kind = ActionKind::Home}; }
ActionCommand ActionCommand::wait() { return {.kind = ActionKind::Wait}; }
ActionCommand ActionCommand::finish(std::optional<std::string> message) {
    return {.kind = ActionKind::Finish, .message = std::move(message)};
}

std::string_view kind_name(ActionKind k) {
    switch (k) {
        case ActionKind::Tap: return "Tap";
        case ActionKind::Type: return "Type";
        case ActionKind::Swipe: return "Swipe";
        case ActionKind::LongPress: return "Long Press";
        case ActionKind::Launch: return "Launch";
        case ActionKind::Back: return "Back";
        case ActionKind::Home: return "Home";
        case ActionKind::Wait: return "Wait";
        case ActionKind::Finish: return "Finish";
    }
    return "";
}

std::string_view direction_name(SwipeDirection d) {
    switch (d) {
        case SwipeDirection::Up: return "up";
        case SwipeDirection::Down: return "down";
        case SwipeDirection::Left: return "left";
        case SwipeDirection::Right: return "right";
    }
    return "";
}

std::string_view dist_name(SwipeDist d) {
    switch (d) {
        case SwipeDist::Short: return "short";
        case SwipeDist::Medium: return "medium";
        case SwipeDist::Long: return "long";
    }
    return "";
}

void ActionCommand::validate() const {
    auto require = [&](bool present, const char* name) {
        if (!present)
            throw MissingArgument(std::string(kind_name(kind)) + " requires argument '" + name +
                                  "'");
    };
    auto forbid = [&](bool present, const char* name) {
        if (present)
            throw MalformedSyntax(std::string(kind_name(kind)) + " does not take argument '" +
                                  name + "'");
    };
    if (element && (element->x1 > element->x2 || element->y1 > element->y2))
        throw MalformedSyntax("element rectangle has inverted corners");

    switch (kind) {
        case ActionKind::Tap:
        case ActionKind::LongPress:
            require(element.has_value(), "element");
            forbid(text.has_value(), "text");
            forbid(direction.has_value(), "direction");
            forbid(dist.has_value(), "dist");
            forbid(app.has_value(), "app");
            break;
        case ActionKind::Type:
            require(text.has_value(), "text");
            forbid(element.has_value(), "element");
            forbid(direction.has_value(), "direction");
            forbid(dist.has_value(), "dist");
            forbid(app.has_value(), "app");
            break;
        case ActionKind::Swipe:
            require(direction.has_value(), "direction");
            require(dist.has_value(), "dist");
            forbid(text.has_value(), "text");
            forbid(app.has_value(), "app");
            break;
        case ActionKind::Launch:
            require(app.has_value(), "app");
            forbid(element.has_value(), "element");
            forbid(text.has_value(), "text");
            forbid(direction.has_value(), "direction");
            forbid(dist.has_value(), "dist");
            break;
        case ActionKind::Back:
        case ActionKind::Home:
        case ActionKind::Wait:
            forbid(element.has_value(), "element");
            forbid(text.has_value(), "text");
            forbid(direction.has_value(), "direction");
            forbid(dist.has_value(), "dist");
            forbid(app.has_value(), "app");
            break;
        case ActionKind::Finish:
            forbid(element.has_value(), "element");
            forbid(text.has_value(), "text");
            forbid(direction.has_value(), "direction");
            forbid(dist.has_value(), "dist");
            forbid(app.has_value(), "app");
            break;
    }
    if (kind != ActionKind::Finish && message.has_value())
        throw MalformedSyntax("only finish() takes a message");
}

namespace {

// ---- tokenizer -------------------------------------------------------------

enum class Tok { Ident, String, Int, LParen, RParen, LBracket, RBracket, Comma, Equals, End };

struct Token {
    Tok tok;
    std::string text;  // ident name, unescaped string payload, or digits
    long value = 0;    // for Int
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    Token next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ >= s_.size()) return {Tok::End, ""};
        char c = s_[pos_];
        switch (c) {
            case '(': ++pos_; return {Tok::LParen, "("};
            case ')': ++pos_; return {Tok::RParen, ")"};
            case '[': ++pos_; return {Tok::LBracket, "["};
            case ']': ++pos_; return {Tok::RBracket, "]"};
            case ',': ++pos_; return {Tok::Comma, ","};
            case '=': ++pos_; return {Tok::Equals, "="};
            case '"': return lex_string();
            default: break;
        }
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return lex_int();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident();
        throw MalformedSyntax(std::string("unexpected character '") + c + "'");
    }

private:
    Token lex_string() {
        ++pos_;  // opening quote
        std::string out;
        while (pos_ < s_.size()) {
            char c = s_[pos_++];
            if (c == '"') return {Tok::String, std::move(out)};
            if (c == '\\') {
                if (pos_ >= s_.size()) break;
                char e = s_[pos_++];
                if (e != '"' && e != '\\')
                    throw MalformedSyntax(std::string("unsupported escape '\\") + e + "'");
                out.push_back(e);
            } else {
                out.push_back(c);
            }
        }
        throw MalformedSyntax("unterminated string literal");
    }

    Token lex_int() {
        size_t start = pos_;
        if (s_[pos_] == '-') ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string_view digits = s_.substr(start, pos_ - start);
        long v = 0;
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (ec != std::errc() || p != digits.data() + digits.size())
            throw MalformedSyntax("bad integer literal");
        return {Tok::Int, std::string(digits), v};
    }

    Token lex_ident() {
        size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                    s_[pos_] == '_'))
            ++pos_;
        return {Tok::Ident, std::string(s_.substr(start, pos_ - start))};
    }

    std::string_view s_;
    size_t pos_ = 0;
};

ActionKind kind_from_verb(const std::string& verb) {
    if (verb == "Tap") return ActionKind::Tap;
    if (verb == "Type") return ActionKind::Type;
    if (verb == "Swipe") return ActionKind::Swipe;
    // Accept the variants seen in the wild for the long-press verb.
    if (verb == "Long Press" || verb == "LongPress" || verb == "Long_Press" ||
        verb == "Long_Pres")
        return ActionKind::LongPress;
    if (verb == "Launch") return ActionKind::Launch;
    if (verb == "Back") return ActionKind::Back;
    if (verb == "Home") return ActionKind::Home;
    if (verb == "Wait") return ActionKind::Wait;
    if (verb == "Finish") return ActionKind::Finish;
    throw UnknownAction("unknown action verb \"" + verb + "\"");
}

SwipeDirection direction_from_name(const std::string& s) {
    if (s == "up") return SwipeDirection::Up;
    if (s == "down") return SwipeDirection::Down;
    if (s == "left") return SwipeDirection::Left;
    if (s == "right") return SwipeDirection::Right;
    throw MalformedSyntax("bad direction \"" + s + "\"");
}

SwipeDist dist_from_name(const std::string& s) {
    if (s == "short") return SwipeDist::Short;
    if (s == "medium") return SwipeDist::Medium;
    if (s == "long") return SwipeDist::Long;
    throw MalformedSyntax("bad dist \"" + s + "\"");
}

class Parser {
public:
    explicit Parser(std::string_view line) : lex_(line) { advance(); }

    ActionCommand parse() {
        if (cur_.tok != Tok::Ident) throw MalformedSyntax("expected 'do' or 'finish'");
        std::string head = cur_.text;
        advance();
        ActionCommand cmd;
        if (head == "finish") {
            cmd = parse_finish();
        } else if (head == "do") {
            cmd = parse_do();
        } else {
            throw UnknownAction("unknown command head '" + head + "'");
        }
        expect(Tok::End, "trailing input after command");
        cmd.validate();
        return cmd;
    }

private:
    void advance() { cur_ = lex_.next(); }

    void expect(Tok t, const char* what) {
        if (cur_.tok != t) throw MalformedSyntax(what);
    }

    void eat(Tok t, const char* what) {
        expect(t, what);
        advance();
    }

    ActionCommand parse_finish() {
        ActionCommand cmd = ActionCommand::finish();
        eat(Tok::LParen, "expected '(' after finish");
        if (cur_.tok == Tok::Ident) {
            if (cur_.text != "message") throw MalformedSyntax("finish() only takes 'message'");
            advance();
            eat(Tok::Equals, "expected '=' after 'message'");
            expect(Tok::String, "message must be a quoted string");
            cmd.message = cur_.text;
            advance();
        }
        eat(Tok::RParen, "expected ')' to close finish");
        return cmd;
    }

    ActionCommand parse_do() {
        eat(Tok::LParen, "expected '(' after do");
        if (cur_.tok != Tok::Ident || cur_.text != "action")
            throw MalformedSyntax("do() must start with action=...");
        advance();
        eat(Tok::Equals, "expected '=' after 'action'");
        expect(Tok::String, "action verb must be a quoted string");
        ActionCommand cmd;
        cmd.kind = kind_from_verb(cur_.text);
        advance();

        while (cur_.tok == Tok::Comma) {
            advance();
            expect(Tok::Ident, "expected argument name");
            std::string key = cur_.text;
            advance();
            eat(Tok::Equals, "expected '=' after argument name");
            set_arg(cmd, key);
        }
        eat(Tok::RParen, "expected ')' to close do");
        return cmd;
    }

    void set_arg(ActionCommand& cmd, const std::string& key) {
        auto dup = [&](bool present) {
            if (present) throw MalformedSyntax("duplicate argument '" + key + "'");
        };
        if (key == "element") {
            dup(cmd.element.has_value());
            cmd.element = parse_rect();
        } else if (key == "text") {
            dup(cmd.text.has_value());
            expect(Tok::String, "text must be a quoted string");
            cmd.text = cur_.text;
            advance();
        } else if (key == "direction") {
            dup(cmd.direction.has_value());
            expect(Tok::String, "direction must be a quoted string");
            cmd.direction = direction_from_name(cur_.text);
            advance();
        } else if (key == "dist") {
            dup(cmd.dist.has_value());
            expect(Tok::String, "dist must be a quoted string");
            cmd.dist = dist_from_name(cur_.text);
            advance();
        } else if (key == "app") {
            dup(cmd.app.has_value());
            expect(Tok::String, "app must be a quoted string");
            cmd.app = cur_.text;
            advance();
        } else {
            throw MalformedSyntax("unknown argument '" + key + "'");
        }
    }

    Rect parse_rect() {
        Rect r;
        eat(Tok::LBracket, "element must be [x1,y1,x2,y2]");
        int* fields[4] = {&r.x1, &r.y1, &r.x2, &r.y2};
        for (int i = 0; i < 4; ++i) {
            if (i > 0) eat(Tok::Comma, "element must have four comma-separated integers");
            expect(Tok::Int, "element coordinates must be integers");
            *fields[i] = static_cast<int>(cur_.value);
            advance();
        }
        eat(Tok::RBracket, "expected ']' to close element");
        return r;
    }

    Lexer lex_;
    Token cur_{Tok::End, ""};
};

void append_quoted(std::string& out, std::string_view s) {
    out.push_back('"');
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
}

}  // namespace

ActionCommand parse_action(std::string_view line) { return Parser(line).parse(); }

std::string serialize_action(const ActionCommand& cmd) {
    cmd.validate();
    std::string out;
    if (cmd.kind == ActionKind::Finish) {
        out = "finish(";
        if (cmd.message) {
            out += "message=";
            append_quoted(out, *cmd.message);
        }
        out.push_back(')');
        return out;
    }
    out = "do(action=";
    append_quoted(out, kind_name(cmd.kind));
    if (cmd.element) {
        out += ", element=[" + std::to_string(cmd.element->x1) + "," +
               std::to_string(cmd.element->y1) + "," + std::to_string(cmd.element->x2) + "," +
               std::to_string(cmd.element->y2) + "]";
    }
    if (cmd.text) {
        out += ", text=";
        append_quoted(out, *cmd.text);
    }
    if (cmd.direction) {
        out += ", direction=";
        append_quoted(out, direction_name(*cmd.direction));
    }
    if (cmd.dist) {
        out += ", dist=";
        append_quoted(out, dist_name(*cmd.dist));
    }
    if (cmd.app) {
        out += ", app=";
        append_quoted(out, *cmd.app);
    }
    out.push_back(')');
    return out;
}

}  // namespace aglab
