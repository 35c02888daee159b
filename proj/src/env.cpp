#include "aglab/env.hpp"

#include <cassert>

#include "aglab/errors.hpp"

namespace aglab {

namespace {

const Screen& cur_screen(const EnvState& st) {
    return st.graph->screens[static_cast<size_t>(st.screen)];
}

int focused_element(const EnvState& st) {
    return st.graph->focus_field[static_cast<size_t>(st.screen)];
}

const PageView& page_view(const EnvState& st) {
    return st.graph->pages[static_cast<size_t>(st.screen)][static_cast<size_t>(st.scroll)];
}

// Screen changes land on page 0 of the destination with focus re-derived.
void enter_screen(EnvState& st, int screen) {
    st.screen = screen;
    st.scroll = 0;
}

}  // namespace

EnvState env_reset(const ScreenGraph& graph, const TaskRef& task, uint64_t episode_seed,
                   int horizon) {
    EnvState st;
    st.graph = &graph;
    st.task = task;
    st.episode_seed = episode_seed;
    st.horizon = horizon;
    int start = graph.index_of(graph.start_screen);
    if (start < 0) throw UnknownTask("start screen missing from graph");
    st.screen = start;
    return st;
}

Observation make_observation(const EnvState& st) {
    Observation obs;
    obs.compressed_ui = page_view(st).compressed_ui;
    obs.screen_id = cur_screen(st).screen_id;
    obs.scroll_offset = st.scroll;
    if (int f = focused_element(st); f >= 0)
        obs.focused_field = cur_screen(st).elements[static_cast<size_t>(f)].id;
    return obs;
}

bool goal_satisfied(const EnvState& st) {
    if (cur_screen(st).screen_id != st.graph->goal.screen_id) return false;
    if (!st.graph->goal.required_typed) return true;
    return st.typed.count(*st.graph->goal.required_typed) > 0;
}

std::vector<ActionCommand> enumerate_candidates(const EnvState& st) {
    std::vector<ActionCommand> out;
    const Screen& s = cur_screen(st);
    for (int idx : page_view(st).visible_clickables)
        out.push_back(ActionCommand::tap(Rect{s.elements[static_cast<size_t>(idx)].bounds.x1,
                                              s.elements[static_cast<size_t>(idx)].bounds.y1,
                                              s.elements[static_cast<size_t>(idx)].bounds.x2,
                                              s.elements[static_cast<size_t>(idx)].bounds.y2}));
    if (focused_element(st) >= 0)
        for (const std::string& w : st.graph->lexicon) out.push_back(ActionCommand::type_text(w));
    if (s.scroll_pages > 1) {
        out.push_back(ActionCommand::swipe(SwipeDirection::Up, SwipeDist::Medium));
        out.push_back(ActionCommand::swipe(SwipeDirection::Down, SwipeDist::Medium));
    }
    out.push_back(ActionCommand::back());
    out.push_back(ActionCommand::home());
    out.push_back(ActionCommand::wait());
    out.push_back(ActionCommand::finish());
    return out;
}

StepResult env_step(EnvState& st, const ActionCommand& action) {
    assert(!st.done && "step after episode end");
    action.validate();
    st.steps_taken += 1;

    StepResult res;
    switch (action.kind) {
        case ActionKind::Finish:
            st.done = true;
            res.reward = goal_satisfied(st) ? 1 : 0;
            break;

        case ActionKind::Tap:
        case ActionKind::LongPress: {
            const Screen& s = cur_screen(st);
            int hit = -1;
            for (int idx : page_view(st).visible_clickables) {
                const axml::Bounds& b = s.elements[static_cast<size_t>(idx)].bounds;
                if (b.x1 == action.element->x1 && b.y1 == action.element->y1 &&
                    b.x2 == action.element->x2 && b.y2 == action.element->y2) {
                    hit = idx;
                    break;
                }
            }
            if (hit < 0)
                throw ActionOutOfGrammar("no visible clickable element at " +
                                         serialize_action(action));
            if (action.kind == ActionKind::Tap) {
                auto it = st.graph->edges.find(
                    {s.screen_id, s.elements[static_cast<size_t>(hit)].id});
                if (it != st.graph->edges.end()) {
                    int to = st.graph->index_of(it->second);
                    st.prev_screen = st.screen;
                    enter_screen(st, to);
                }
            }
            // Long press never navigates here; a matched element is a no-op.
            break;
        }

        case ActionKind::Type: {
            int f = focused_element(st);
            if (f >= 0) {
                st.typed.insert(*action.text);
                const Screen& s = cur_screen(st);
                auto it = st.graph->type_targets.find(
                    {s.screen_id, s.elements[static_cast<size_t>(f)].id, *action.text});
                if (it != st.graph->type_targets.end()) {
                    int to = st.graph->index_of(it->second);
                    st.prev_screen = st.screen;
                    enter_screen(st, to);
                }
            }
            break;
        }

        case ActionKind::Swipe: {
            int pages = cur_screen(st).scroll_pages;
            // Swiping down moves toward later pages, up toward earlier ones;
            // both clamp at the ends.
            if (*action.direction == SwipeDirection::Down)
                st.scroll = std::min(st.scroll + 1, pages - 1);
            else if (*action.direction == SwipeDirection::Up)
                st.scroll = std::max(st.scroll - 1, 0);
            break;
        }

        case ActionKind::Back:
            if (st.prev_screen >= 0) {
                int to = st.prev_screen;
                st.prev_screen = -1;
                enter_screen(st, to);
            }
            break;

        case ActionKind::Home: {
            int start = st.graph->index_of(st.graph->start_screen);
            st.prev_screen = st.screen;
            enter_screen(st, start);
            break;
        }

        case ActionKind::Launch:
        case ActionKind::Wait:
            break;  // single-app world: both just consume the step
    }

    if (!st.done && st.steps_taken >= st.horizon) {
        st.done = true;
        res.truncated = true;
    }
    res.done = st.done;
    res.observation = make_observation(st);
    return res;
}

}  // namespace aglab
