#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace aglab {

enum class ActionKind { Tap, Type, Swipe, LongPress, Launch, Back, Home, Wait, Finish };

struct Rect {
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    bool operator==(const Rect&) const = default;
};

enum class SwipeDirection { Up, Down, Left, Right };
enum class SwipeDist { Short, Medium, Long };

// One agent action in the textual command grammar:
//   do(action="Tap", element=[x1,y1,x2,y2])
//   do(action="Type", text="hello")
//   do(action="Swipe", element=[...], direction="down", dist="medium")
//   finish(message="done")
// Which optional fields may be set depends on the kind; validate() enforces
// the pairing and parse/serialize only produce valid commands.
struct ActionCommand {
    ActionKind kind = ActionKind::Wait;
    std::optional<Rect> element;
    std::optional<std::string> text;
    std::optional<SwipeDirection> direction;
    std::optional<SwipeDist> dist;
    std::optional<std::string> app;
    std::optional<std::string> message;

    bool operator==(const ActionCommand&) const = default;

    static ActionCommand tap(Rect r);
    static ActionCommand type_text(std::string t);
    static ActionCommand swipe(SwipeDirection d, SwipeDist dist, std::optional<Rect> r = {});
    static ActionCommand long_press(Rect r);
    static ActionCommand launch(std::string app);
    static ActionCommand back();
    static ActionCommand home();
    static ActionCommand wait();
    static ActionCommand finish(std::optional<std::string> message = {});

    // Throws MalformedSyntax/MissingArgument when fields don't match the kind.
    void validate() const;
};

std::string_view kind_name(ActionKind k);
std::string_view direction_name(SwipeDirection d);
std::string_view dist_name(SwipeDist d);

// Parses one command line. Whitespace between tokens is ignored. Throws
// UnknownAction for a verb outside the grammar, MissingArgument when a
// required argument is absent, MalformedSyntax for anything else.
ActionCommand parse_action(std::string_view line);

// Canonical single-line form: fixed argument order (element, text, direction,
// dist, app), double-quoted strings with backslash escapes for '"' and '\'.
std::string serialize_action(const ActionCommand& cmd);

}  // namespace aglab
