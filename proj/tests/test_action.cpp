#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "aglab/action.hpp"
#include "aglab/errors.hpp"
#include "aglab/hash.hpp"

using namespace aglab;

TEST_CASE("parses the prompt-grammar forms") {
    ActionCommand tap = parse_action("do(action=\"Tap\", element=[221,1095,858,1222])");
    CHECK(tap.kind == ActionKind::Tap);
    REQUIRE(tap.element.has_value());
    CHECK(*tap.element == Rect{221, 1095, 858, 1222});
    CHECK_FALSE(tap.text.has_value());

    ActionCommand fin = parse_action("finish(message=\"done\")");
    CHECK(fin.kind == ActionKind::Finish);
    CHECK(fin.message == "done");

    ActionCommand bare = parse_action("finish()");
    CHECK(bare.kind == ActionKind::Finish);
    CHECK_FALSE(bare.message.has_value());

    ActionCommand swipe =
        parse_action("do(action=\"Swipe\", direction=\"down\", dist=\"medium\")");
    CHECK(swipe.kind == ActionKind::Swipe);
    CHECK(swipe.direction == SwipeDirection::Down);
    CHECK(swipe.dist == SwipeDist::Medium);
    CHECK_FALSE(swipe.element.has_value());
}

TEST_CASE("whitespace between tokens is irrelevant") {
    ActionCommand a = parse_action("do(action=\"Tap\",element=[1,2,3,4])");
    ActionCommand b = parse_action("  do ( action = \"Tap\" , element = [ 1 , 2 , 3 , 4 ] )  ");
    CHECK(a == b);
    CHECK(parse_action("finish (  )").kind == ActionKind::Finish);
}

TEST_CASE("string arguments unescape quote and backslash") {
    ActionCommand t = parse_action("do(action=\"Type\", text=\"he said \\\"hi\\\" \\\\ twice\")");
    CHECK(t.text == "he said \"hi\" \\ twice");
    // Any other escape is an error, not a passthrough.
    CHECK_THROWS_AS(parse_action("do(action=\"Type\", text=\"a\\n\")"), MalformedSyntax);
}

TEST_CASE("long press verb variants all map to the same kind") {
    for (const char* verb : {"Long Press", "LongPress", "Long_Press", "Long_Pres"}) {
        ActionCommand c =
            parse_action("do(action=\"" + std::string(verb) + "\", element=[0,0,5,5])");
        CHECK(c.kind == ActionKind::LongPress);
    }
    CHECK(kind_name(ActionKind::LongPress) == "Long Press");
}

TEST_CASE("unknown verbs are rejected") {
    CHECK_THROWS_AS(parse_action("do(action=\"Fly\")"), UnknownAction);
    CHECK_THROWS_AS(parse_action("do(action=\"tap\", element=[0,0,1,1])"), UnknownAction);
    CHECK_THROWS_AS(parse_action("undo(action=\"Tap\")"), UnknownAction);
}

TEST_CASE("required arguments are enforced per kind") {
    CHECK_THROWS_AS(parse_action("do(action=\"Tap\")"), MissingArgument);
    CHECK_THROWS_AS(parse_action("do(action=\"Type\")"), MissingArgument);
    CHECK_THROWS_AS(parse_action("do(action=\"Swipe\", direction=\"up\")"), MissingArgument);
    CHECK_THROWS_AS(parse_action("do(action=\"Swipe\", dist=\"short\")"), MissingArgument);
    CHECK_THROWS_AS(parse_action("do(action=\"Launch\")"), MissingArgument);
}

TEST_CASE("malformed syntax covers structure, keys and rectangles") {
    CHECK_THROWS_AS(parse_action("do(action=\"Tap\", element=[1,2,3,4]"), MalformedSyntax);
    CHECK_THROWS_AS(parse_action("do(action=\"Tap\", element=[1,2,3)"), MalformedSyntax);
    CHECK_THROWS_AS(parse_action("do(action=\"Type\", text=\"unterminated)"), MalformedSyntax);
    CHECK_THROWS_AS(parse_action("do(action=\"Tap\", element=[1,2,3,4], element=[1,2,3,4])"),
                    MalformedSyntax);
    CHECK_THROWS_AS(parse_action("do(action=\"Tap\", element=[1,2,3,4], speed=\"fast\")"),
                    MalformedSyntax);
    // Parameterless kinds reject stray arguments.
    CHECK_THROWS_AS(parse_action("do(action=\"Back\", element=[1,2,3,4])"), MalformedSyntax);
    CHECK_THROWS_AS(parse_action("do(action=\"Wait\", text=\"x\")"), MalformedSyntax);
    // Inverted rectangle: x2 < x1.
    CHECK_THROWS_AS(parse_action("do(action=\"Tap\", element=[10,2,3,4])"), MalformedSyntax);
    // Trailing garbage after a complete command.
    CHECK_THROWS_AS(parse_action("do(action=\"Back\") extra"), MalformedSyntax);
    CHECK_THROWS_AS(parse_action(""), MalformedSyntax);
}

TEST_CASE("serialization is canonical") {
    CHECK(serialize_action(ActionCommand::back()) == "do(action=\"Back\")");
    CHECK(serialize_action(ActionCommand::type_text("hi")) == "do(action=\"Type\", text=\"hi\")");
    CHECK(serialize_action(ActionCommand::tap({221, 1095, 858, 1222})) ==
          "do(action=\"Tap\", element=[221,1095,858,1222])");
    CHECK(serialize_action(ActionCommand::swipe(SwipeDirection::Up, SwipeDist::Long,
                                                Rect{0, 0, 9, 9})) ==
          "do(action=\"Swipe\", element=[0,0,9,9], direction=\"up\", dist=\"long\")");
    CHECK(serialize_action(ActionCommand::long_press({1, 2, 3, 4})) ==
          "do(action=\"Long Press\", element=[1,2,3,4])");
    CHECK(serialize_action(ActionCommand::finish()) == "finish()");
    CHECK(serialize_action(ActionCommand::finish("ok")) == "finish(message=\"ok\")");
    CHECK(serialize_action(ActionCommand::type_text("a\"b\\c")) ==
          "do(action=\"Type\", text=\"a\\\"b\\\\c\")");
}

namespace {

std::string random_string(Rng& rng) {
    // Deliberately includes the characters the lexer treats specially.
    static const std::string alphabet = "abcXYZ 09_:;,()[]\"\\";
    std::string s;
    int len = static_cast<int>(rng.uniform_int(0, 12));
    for (int i = 0; i < len; ++i)
        s += alphabet[static_cast<size_t>(rng.uniform_int(0, (int)alphabet.size() - 1))];
    return s;
}

Rect random_rect(Rng& rng) {
    int x1 = static_cast<int>(rng.uniform_int(0, 1000));
    int y1 = static_cast<int>(rng.uniform_int(0, 2000));
    return {x1, y1, x1 + static_cast<int>(rng.uniform_int(0, 300)),
            y1 + static_cast<int>(rng.uniform_int(0, 300))};
}

ActionCommand random_command(Rng& rng) {
    switch (rng.uniform_int(0, 8)) {
        case 0: return ActionCommand::tap(random_rect(rng));
        case 1: return ActionCommand::type_text(random_string(rng));
        case 2: {
            auto dir = static_cast<SwipeDirection>(rng.uniform_int(0, 3));
            auto dist = static_cast<SwipeDist>(rng.uniform_int(0, 2));
            std::optional<Rect> r;
            if (rng.uniform_int(0, 1)) r = random_rect(rng);
            return ActionCommand::swipe(dir, dist, r);
        }
        case 3: return ActionCommand::long_press(random_rect(rng));
        case 4: return ActionCommand::launch(random_string(rng));
        case 5: return ActionCommand::back();
        case 6: return ActionCommand::home();
        case 7: return ActionCommand::wait();
        default:
            return rng.uniform_int(0, 1) ? ActionCommand::finish(random_string(rng))
                                         : ActionCommand::finish();
    }
}

}  // namespace

TEST_CASE("round-trip holds over 1000 random commands") {
    Rng rng(0xAC710Full);
    for (int i = 0; i < 1000; ++i) {
        ActionCommand cmd = random_command(rng);
        std::string line = serialize_action(cmd);
        ActionCommand back = parse_action(line);
        CAPTURE(line);
        CHECK(back == cmd);
        // A second serialize of the reparsed command is byte-identical.
        CHECK(serialize_action(back) == line);
    }
}

TEST_CASE("parse then serialize normalizes spacing") {
    const char* loose = "do( action=\"Swipe\" ,direction= \"left\",dist=\"short\" )";
    ActionCommand c = parse_action(loose);
    CHECK(serialize_action(c) == "do(action=\"Swipe\", direction=\"left\", dist=\"short\")");
    CHECK(parse_action(serialize_action(c)) == c);
}
