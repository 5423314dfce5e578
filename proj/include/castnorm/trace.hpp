/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include "castnorm/pretty.hpp"

#include <json.hpp>

namespace castnorm {

// One localized rewrite. Replacing `before` at `path` in the pre-state tree
// yields the post-state tree exactly.
struct Step {
    std::string pass; // "1" | "2" | "3" | "4" | "split" | "push" | "rw"
    std::string rule; // rule name or builtin tag
    Dir dir = Dir::L2R;
    Path path;
    ExprPtr before;
    ExprPtr after;
    std::string note; // optional annotation (binary numeral view)
};

struct Trace {
    ExprPtr input;
    ExprPtr output;
    std::vector<Step> steps;
    long long fuel_used = 0;
    bool fuel_exhausted = false;
};

inline nlohmann::json step_to_json(const Step& s) {
    nlohmann::json j{
        {"pass", s.pass},   {"rule", s.rule},
        {"dir", dir_name(s.dir)},
        {"path", s.path},
        {"before", pretty(s.before)},
        {"after", pretty(s.after)},
    };
    if (!s.note.empty()) j["note"] = s.note;
    return j;
}

inline nlohmann::json trace_to_json(const Trace& t) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : t.steps) steps.push_back(step_to_json(s));
    return nlohmann::json{
        {"input", pretty(t.input)},
        {"output", pretty(t.output)},
        {"fuel_used", t.fuel_used},
        {"steps", std::move(steps)},
    };
}

// Mechanically replays the steps from the input; true iff every step's
// `before` matches in place and the final tree equals the output.
inline bool trace_replays(const Trace& t) {
    ExprPtr cur = t.input;
    for (const Step& s : t.steps) {
        ExprPtr at;
        try {
            at = subterm_at(cur, s.path);
        } catch (const Error&) {
            return false;
        }
        if (!equal(at, s.before)) return false;
        cur = replace_at(cur, s.path, s.after);
    }
    return equal(cur, t.output);
}

} // namespace castnorm
