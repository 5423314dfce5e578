/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include "castnorm/rules.hpp"
#include "castnorm/trace.hpp"

#include <functional>

namespace castnorm {

// Discharges one instantiated side condition (a closed prop).
using DischargeFn = std::function<bool(const ExprPtr&)>;

inline DischargeFn no_discharge() {
    return [](const ExprPtr&) { return false; };
}

// Applies r in the given direction to the subterm of e at path. Fails softly
// (nullopt) on non-match, undischarged conditions, and instances that would
// be ill-typed at these types. The returned Step carries the absolute path.
inline std::optional<std::pair<ExprPtr, Step>>
apply_rule_at(const RewriteRule& r, Dir dir, const ExprPtr& e, const Path& path,
              const TypeEnv& env, const DischargeFn& discharge) {
    const PatternPtr& from = dir == Dir::L2R ? r.lhs : r.rhs;
    const PatternPtr& to = dir == Dir::L2R ? r.rhs : r.lhs;

    ExprPtr before;
    try {
        before = subterm_at(e, path);
    } catch (const Error&) {
        return std::nullopt;
    }

    auto subst = match(from, before);
    if (!subst) return std::nullopt;

    for (const auto& c : r.conds) {
        ExprPtr cond = instantiate(c, *subst, env);
        if (!cond || !discharge(cond)) return std::nullopt;
    }

    ExprPtr after = instantiate(to, *subst, env);
    if (!after) return std::nullopt;
    try {
        if (type_of(after, env) != type_of(before, env)) return std::nullopt;
    } catch (const Error&) {
        return std::nullopt; // invalid instance, report as non-match
    }

    Step step;
    step.rule = r.name;
    step.dir = dir;
    step.path = path;
    step.before = before;
    step.after = after;
    return std::make_pair(replace_at(e, path, after), std::move(step));
}

} // namespace castnorm
