/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include "castnorm/numeral.hpp"
#include "castnorm/rewrite.hpp"

namespace castnorm {

struct NormalizeOptions {
    long long fuel = 10000; // global rewrite budget per call
};

bool equiv_mod_cast(const ExprPtr& a, const ExprPtr& b, const RuleDb& db, const Context& ctx,
                    const TypeEnv& env, const NormalizeOptions& opts, bool* fuel_warning);

// Side conditions are discharged against the hypothesis context by mod-cast
// equality; the inner comparison runs with an empty context, so discharge
// cannot recurse into itself.
inline DischargeFn context_discharge(const RuleDb& db, const Context& ctx, const TypeEnv& env,
                                     const NormalizeOptions& opts) {
    return [&db, &ctx, &env, opts](const ExprPtr& cond) {
        static const Context empty;
        for (const auto& h : ctx.hyps)
            if (equiv_mod_cast(cond, h, db, empty, env, opts, nullptr)) return true;
        return false;
    };
}

namespace detail {

class Pipeline {
public:
    Pipeline(const RuleDb& db, const TypeEnv& env, long long fuel, DischargeFn discharge)
        : m_db(db), m_env(env), m_fuel(fuel), m_discharge(std::move(discharge)),
          m_elims(db.by_class(RuleClass::elim)), m_moves(db.by_class(RuleClass::move)),
          m_squashes(db.by_class(RuleClass::squash)), m_zero(db.find("cast_zero")),
          m_one(db.find("cast_one")) {}

    Budget& fuel() { return m_fuel; }
    std::vector<Step> take_steps() { return std::move(m_steps); }

    // Pass 1: (num : T) becomes cast(T, num:nat) for num >= 2; 0 and 1 stay
    // native. Steps carry the binary spelling of the numeral.
    ExprPtr lift_numerals(const ExprPtr& e) {
        Path path;
        return lift_rec(e, path);
    }

    // Pass 2: bottom-up; per node elim L2R, then move R2L, then heuristic
    // splitting and 0/1 relifting, iterated to a local fixpoint with the
    // subtree revisited after every hit.
    ExprPtr move_elim(const ExprPtr& e) {
        Path path;
        return me_visit(e, path);
    }

    // Pass 3: top-down squash rules L2R to fixpoint.
    ExprPtr squash(const ExprPtr& e) {
        ExprPtr cur = e;
        bool changed = true;
        while (changed && !m_fuel.exhausted) {
            changed = false;
            Path path;
            cur = sq_visit(cur, path, changed);
        }
        return cur;
    }

    // Pass 4: cast(T, num:nat) becomes (num : T); inverse of pass 1 on its image.
    ExprPtr restore_numerals(const ExprPtr& e) {
        Path path;
        return restore_rec(e, path);
    }

    // push_cast body: move and squash rules L2R, bottom-up, no elim, no
    // splitting, no numeral passes.
    ExprPtr push(const ExprPtr& e) {
        Path path;
        return push_visit(e, path);
    }

private:
    template <typename Visit>
    ExprPtr map_children(const ExprPtr& e, Path& path, Visit&& visit) {
        if (e->is_app()) {
            const auto& a = e->as_app();
            std::vector<ExprPtr> args;
            args.reserve(a.args.size());
            bool changed = false;
            for (size_t i = 0; i < a.args.size(); ++i) {
                path.push_back(static_cast<int>(i));
                ExprPtr child = visit(a.args[i], path);
                path.pop_back();
                changed = changed || child != a.args[i];
                args.push_back(std::move(child));
            }
            return changed ? mk_app(a.op, std::move(args)) : e;
        }
        if (e->is_cast()) {
            const auto& c = e->as_cast();
            path.push_back(0);
            ExprPtr body = visit(c.body, path);
            path.pop_back();
            return body != c.body ? mk_cast(c.src, c.dst, std::move(body)) : e;
        }
        return e;
    }

    ExprPtr lift_rec(const ExprPtr& e, Path& path) {
        if (e->is_num()) {
            const auto& n = e->as_num();
            if (n.ty != ty_nat() && n.value >= 2 && m_env.coercion_exists(ty_nat(), n.ty)) {
                ExprPtr after = mk_cast(ty_nat(), n.ty, mk_num(n.value, ty_nat()));
                Step s{"1", "numeral-lift", Dir::L2R, path, e, after,
                       numeral_binary_view(n.value)};
                m_steps.push_back(std::move(s));
                return after;
            }
            return e;
        }
        return map_children(e, path, [this](const ExprPtr& c, Path& p) { return lift_rec(c, p); });
    }

    ExprPtr me_visit(const ExprPtr& e, Path& path) {
        ExprPtr node =
            map_children(e, path, [this](const ExprPtr& c, Path& p) { return me_visit(c, p); });
        while (!m_fuel.exhausted) {
            auto next = me_try(node, path);
            if (!next) break;
            node = map_children(*next, path,
                                [this](const ExprPtr& c, Path& p) { return me_visit(c, p); });
        }
        return node;
    }

    std::optional<ExprPtr> me_try(const ExprPtr& node, const Path& path) {
        for (const RewriteRule* r : m_elims)
            if (auto next = try_apply(*r, Dir::L2R, node, path, "2")) return next;
        for (const RewriteRule* r : m_moves)
            if (auto next = try_apply(*r, Dir::R2L, node, path, "2")) return next;
        if (auto next = try_split(node, path)) return next;
        if (auto next = try_relift(node, path)) return next;
        return std::nullopt;
    }

    std::optional<ExprPtr> try_apply(const RewriteRule& r, Dir dir, const ExprPtr& node,
                                     const Path& path, const char* pass) {
        auto res = apply_rule_at(r, dir, node, {}, m_env, m_discharge);
        if (!res) return std::nullopt;
        if (!m_fuel.take()) return std::nullopt;
        Step s = std::move(res->second);
        s.pass = pass;
        s.path = path;
        m_steps.push_back(std::move(s));
        return res->first;
    }

    // P(cast(X,Z,x), cast(Y,Z,y)) with X != Y: insert the intermediate cast
    // on whichever side coerces into the other (left preferred), i.e. the
    // transitivity squash applied R2L at that argument.
    std::optional<ExprPtr> try_split(const ExprPtr& node, const Path& path) {
        if (!node->is_app()) return std::nullopt;
        const auto& a = node->as_app();
        if (a.args.size() != 2 || !a.args[0]->is_cast() || !a.args[1]->is_cast())
            return std::nullopt;
        const auto& l = a.args[0]->as_cast();
        const auto& r = a.args[1]->as_cast();
        if (l.src == r.src) return std::nullopt;
        int side;
        if (m_env.coercion_exists(l.src, r.src)) {
            side = 0;
        } else if (m_env.coercion_exists(r.src, l.src)) {
            side = 1;
        } else {
            return std::nullopt;
        }
        const CastNode& split = side == 0 ? l : r;
        const Ty& mid = side == 0 ? r.src : l.src;
        ExprPtr before = a.args[side];
        ExprPtr after = mk_cast(mid, split.dst, mk_cast(split.src, mid, split.body));
        if (!m_fuel.take()) return std::nullopt;
        Path at = path;
        at.push_back(side);
        Step s{"split", side == 0 ? "split-left" : "split-right", Dir::R2L, at, before, after, ""};
        m_steps.push_back(std::move(s));
        std::vector<ExprPtr> args = a.args;
        args[side] = after;
        return mk_app(a.op, std::move(args));
    }

    // When a binary node pairs a cast with a native 0/1 numeral, relift the
    // numeral (cast_zero/cast_one R2L) so elim or splitting can retry.
    std::optional<ExprPtr> try_relift(const ExprPtr& node, const Path& path) {
        if (!node->is_app()) return std::nullopt;
        const auto& a = node->as_app();
        if (a.args.size() != 2) return std::nullopt;
        int num_idx;
        if (a.args[0]->is_cast() && a.args[1]->is_num()) {
            num_idx = 1;
        } else if (a.args[1]->is_cast() && a.args[0]->is_num()) {
            num_idx = 0;
        } else {
            return std::nullopt;
        }
        const auto& n = a.args[num_idx]->as_num();
        if (n.ty == ty_nat() || n.value > 1) return std::nullopt;
        const RewriteRule* rule = n.value == 0 ? m_zero : m_one;
        if (!rule) return std::nullopt;
        auto res = apply_rule_at(*rule, Dir::R2L, node, {num_idx}, m_env, m_discharge);
        if (!res) return std::nullopt;
        if (!m_fuel.take()) return std::nullopt;
        Step s = std::move(res->second);
        s.pass = "2";
        s.path = path;
        s.path.push_back(num_idx);
        m_steps.push_back(std::move(s));
        return res->first;
    }

    ExprPtr sq_visit(const ExprPtr& e, Path& path, bool& changed) {
        ExprPtr node = e;
        while (!m_fuel.exhausted) {
            bool fired = false;
            for (const RewriteRule* r : m_squashes) {
                if (auto next = try_apply(*r, Dir::L2R, node, path, "3")) {
                    node = *next;
                    fired = true;
                    changed = true;
                    break;
                }
            }
            if (!fired) break;
        }
        return map_children(node, path, [this, &changed](const ExprPtr& c, Path& p) {
            return sq_visit(c, p, changed);
        });
    }

    ExprPtr restore_rec(const ExprPtr& e, Path& path) {
        if (e->is_cast()) {
            const auto& c = e->as_cast();
            if (c.src == ty_nat() && c.body->is_num() && c.body->as_num().ty == ty_nat()) {
                ExprPtr after = mk_num(c.body->as_num().value, c.dst);
                Step s{"4", "numeral-restore", Dir::L2R, path, e, after, ""};
                m_steps.push_back(std::move(s));
                return after;
            }
        }
        return map_children(e, path,
                            [this](const ExprPtr& c, Path& p) { return restore_rec(c, p); });
    }

    ExprPtr push_visit(const ExprPtr& e, Path& path) {
        ExprPtr node =
            map_children(e, path, [this](const ExprPtr& c, Path& p) { return push_visit(c, p); });
        while (!m_fuel.exhausted) {
            bool fired = false;
            for (const RewriteRule& r : m_db.rules()) {
                if (r.cls == RuleClass::elim) continue;
                if (auto next = try_apply(r, Dir::L2R, node, path, "push")) {
                    node = map_children(*next, path, [this](const ExprPtr& c, Path& p) {
                        return push_visit(c, p);
                    });
                    fired = true;
                    break;
                }
            }
            if (!fired) break;
        }
        return node;
    }

    const RuleDb& m_db;
    const TypeEnv& m_env;
    Budget m_fuel;
    DischargeFn m_discharge;
    std::vector<Step> m_steps;
    std::vector<const RewriteRule*> m_elims, m_moves, m_squashes;
    const RewriteRule* m_zero;
    const RewriteRule* m_one;
};

inline void check_input(const ExprPtr& e, const TypeEnv& env) {
    try {
        type_of(e, env);
    } catch (const Error& err) {
        throw IllTypedInput(err.what());
    }
}

} // namespace detail

// Four-pass pipeline: lift numerals, move/eliminate casts (with splitting),
// squash residue, restore numerals. On fuel exhaustion the remaining passes
// are skipped and the partial trace is returned flagged.
inline std::pair<ExprPtr, Trace> normalize(const ExprPtr& e, const RuleDb& db, const Context& ctx,
                                           const TypeEnv& env, const NormalizeOptions& opts = {}) {
    if (opts.fuel < 1) throw Error("fuel must be positive");
    detail::check_input(e, env);
    detail::Pipeline pipe(db, env, opts.fuel, context_discharge(db, ctx, env, opts));
    ExprPtr cur = pipe.lift_numerals(e);
    cur = pipe.move_elim(cur);
    if (!pipe.fuel().exhausted) cur = pipe.squash(cur);
    if (!pipe.fuel().exhausted) cur = pipe.restore_numerals(cur);
    Trace t;
    t.input = e;
    t.output = cur;
    t.fuel_used = pipe.fuel().used();
    t.fuel_exhausted = pipe.fuel().exhausted;
    t.steps = pipe.take_steps();
    return {cur, t};
}

inline std::pair<ExprPtr, Trace> push_cast(const ExprPtr& e, const RuleDb& db, const Context& ctx,
                                           const TypeEnv& env, const NormalizeOptions& opts = {}) {
    if (opts.fuel < 1) throw Error("fuel must be positive");
    detail::check_input(e, env);
    detail::Pipeline pipe(db, env, opts.fuel, context_discharge(db, ctx, env, opts));
    ExprPtr cur = pipe.push(e);
    Trace t;
    t.input = e;
    t.output = cur;
    t.fuel_used = pipe.fuel().used();
    t.fuel_exhausted = pipe.fuel().exhausted;
    t.steps = pipe.take_steps();
    return {cur, t};
}

// Mod-cast equivalence: structural equality of normal forms. Fuel exhaustion
// on either side degrades to false and sets the warning flag.
inline bool equiv_mod_cast(const ExprPtr& a, const ExprPtr& b, const RuleDb& db, const Context& ctx,
                           const TypeEnv& env, const NormalizeOptions& opts = {},
                           bool* fuel_warning = nullptr) {
    auto [na, ta] = normalize(a, db, ctx, env, opts);
    auto [nb, tb] = normalize(b, db, ctx, env, opts);
    if (ta.fuel_exhausted || tb.fuel_exhausted) {
        if (fuel_warning) *fuel_warning = true;
        return false;
    }
    return equal(na, nb);
}

inline std::optional<size_t> assumption_mod_cast(const ExprPtr& goal, const Context& ctx,
                                                 const RuleDb& db, const TypeEnv& env,
                                                 const NormalizeOptions& opts = {}) {
    for (size_t i = 0; i < ctx.hyps.size(); ++i)
        if (equiv_mod_cast(goal, ctx.hyps[i], db, ctx, env, opts)) return i;
    return std::nullopt;
}

struct RwDirective {
    std::string rule;
    Dir dir = Dir::L2R;
};

namespace detail {

inline bool apply_leftmost_outermost(const RewriteRule& r, Dir dir, ExprPtr& e, const TypeEnv& env,
                                     const DischargeFn& discharge, std::vector<Step>& steps) {
    struct Walk {
        const RewriteRule& r;
        Dir dir;
        const TypeEnv& env;
        const DischargeFn& discharge;
        std::vector<Step>& steps;
        ExprPtr root;

        bool at(const ExprPtr& node, Path& path) {
            if (auto res = apply_rule_at(r, dir, root, path, env, discharge)) {
                Step s = std::move(res->second);
                s.pass = "rw";
                steps.push_back(std::move(s));
                root = res->first;
                return true;
            }
            if (node->is_app()) {
                const auto& a = node->as_app();
                for (size_t i = 0; i < a.args.size(); ++i) {
                    path.push_back(static_cast<int>(i));
                    if (at(a.args[i], path)) return true;
                    path.pop_back();
                }
            } else if (node->is_cast()) {
                path.push_back(0);
                if (at(node->as_cast().body, path)) return true;
                path.pop_back();
            }
            return false;
        }
    };
    Walk w{r, dir, env, discharge, steps, e};
    Path path;
    if (!w.at(e, path)) return false;
    e = w.root;
    return true;
}

} // namespace detail

// Alternates full normalization with single leftmost-outermost applications
// of the listed rules; ends on a final normalization.
inline std::pair<ExprPtr, Trace> rw_mod_cast(const ExprPtr& e,
                                             const std::vector<RwDirective>& rewrites,
                                             const RuleDb& db, const Context& ctx,
                                             const TypeEnv& env,
                                             const NormalizeOptions& opts = {}) {
    Trace total;
    total.input = e;
    ExprPtr cur = e;
    auto run_norm = [&]() {
        auto [out, t] = normalize(cur, db, ctx, env, opts);
        cur = out;
        total.steps.insert(total.steps.end(), t.steps.begin(), t.steps.end());
        total.fuel_used += t.fuel_used;
        total.fuel_exhausted = total.fuel_exhausted || t.fuel_exhausted;
    };
    run_norm();
    DischargeFn discharge = context_discharge(db, ctx, env, opts);
    for (const auto& directive : rewrites) {
        if (total.fuel_exhausted) break;
        const RewriteRule* rule = db.find(directive.rule);
        if (!rule) throw RewriteFailed("unknown rule '" + directive.rule + "'");
        if (!detail::apply_leftmost_outermost(*rule, directive.dir, cur, env, discharge,
                                              total.steps))
            throw RewriteFailed("rule '" + directive.rule + "' matched nowhere");
        total.fuel_used += 1;
        run_norm();
    }
    total.output = cur;
    return {cur, total};
}

} // namespace castnorm
