/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include <algorithm>

#include "castnorm/rules.hpp"
#include "castnorm/value.hpp"

namespace castnorm {

struct Counterexample {
    Assignment assignment;
    Value lhs;
    Value rhs;

    std::string describe() const {
        std::string out;
        for (const auto& [name, value] : assignment) {
            if (!out.empty()) out += ", ";
            out += name + " = " + value.to_string();
        }
        if (out.empty()) out = "<no variables>";
        out += "; left evaluates to " + lhs.to_string() + ", right to " + rhs.to_string();
        return out;
    }
};

struct EquivVerdict {
    enum class Kind { equivalent, counterexample, skipped };

    Kind kind = Kind::equivalent;
    std::optional<Counterexample> cex;
    std::string warning; // set when kind == skipped

    bool ok() const { return kind == Kind::equivalent; }
};

namespace detail {

inline void collect_typed_vars(const ExprPtr& e, std::map<std::string, Ty>& out) {
    switch (e->kind()) {
        case ExprKind::var: {
            const auto& v = e->as_var();
            auto [it, inserted] = out.emplace(v.name, v.ty);
            if (!inserted && it->second != v.ty)
                throw Error("variable '" + v.name + "' occurs at two types");
            return;
        }
        case ExprKind::num: return;
        case ExprKind::app:
            for (const auto& a : e->as_app().args) collect_typed_vars(a, out);
            return;
        case ExprKind::cast: collect_typed_vars(e->as_cast().body, out); return;
    }
}

// Value domain for one variable: nat 0..hi, int -hi..hi, rat all reduced p/q
// with |p| <= hi, 1 <= q <= hi, in ascending numeric order.
inline std::vector<Value> value_domain(const Ty& ty, int hi) {
    std::vector<Value> out;
    switch (ty.kind) {
        case TyKind::builtin_nat:
            for (int v = 0; v <= hi; ++v) out.push_back(Value::nat(v));
            return out;
        case TyKind::builtin_int:
            for (int v = -hi; v <= hi; ++v) out.push_back(Value::int_(v));
            return out;
        case TyKind::builtin_rat: {
            std::vector<BigRat> rats;
            for (int q = 1; q <= hi; ++q)
                for (int p = -hi; p <= hi; ++p)
                    if (boost::multiprecision::gcd(BigInt(p < 0 ? -p : p), BigInt(q)) == 1)
                        rats.emplace_back(BigInt(p), BigInt(q));
            std::sort(rats.begin(), rats.end());
            for (auto& r : rats) out.push_back(Value::rat(std::move(r)));
            return out;
        }
        default: return out;
    }
}

} // namespace detail

// Exhaustively compares two expressions over all assignments drawn from the
// bounded carrier domains, skipping assignments that violate a context
// hypothesis. Expressions touching abstract types or user operators cannot be
// evaluated and yield a skipped verdict.
inline EquivVerdict check_equiv_exhaustive(const ExprPtr& a, const ExprPtr& b, const Context& ctx,
                                           int hi, const TypeEnv& env) {
    if (hi < 0) throw Error("range bound must be nonnegative");
    EquivVerdict verdict;
    if (equal(a, b)) return verdict;

    std::map<std::string, Ty> vars;
    detail::collect_typed_vars(a, vars);
    detail::collect_typed_vars(b, vars);
    for (const auto& h : ctx.hyps) detail::collect_typed_vars(h, vars);

    std::vector<std::string> names;
    std::vector<std::vector<Value>> domains;
    for (const auto& [name, ty] : vars) {
        if (ty.kind == TyKind::user_declared) {
            verdict.kind = EquivVerdict::Kind::skipped;
            verdict.warning = "variable '" + name + "' has abstract type '" + ty.name + "'";
            return verdict;
        }
        names.push_back(name);
        domains.push_back(detail::value_domain(ty, hi));
        if (domains.back().empty()) return verdict; // no admissible assignment
    }

    size_t n = names.size();
    std::vector<size_t> idx(n, 0);
    while (true) {
        Assignment asg;
        for (size_t i = 0; i < n; ++i) asg[names[i]] = domains[i][idx[i]];
        try {
            bool admissible = true;
            for (const auto& h : ctx.hyps) {
                Value hv = eval(h, asg, env);
                if (hv.kind != Value::Kind::bool_v)
                    throw Error("context hypothesis is not a proposition");
                if (!hv.b) {
                    admissible = false;
                    break;
                }
            }
            if (admissible) {
                Value va = eval(a, asg, env);
                Value vb = eval(b, asg, env);
                if (va != vb) {
                    verdict.kind = EquivVerdict::Kind::counterexample;
                    verdict.cex = Counterexample{std::move(asg), std::move(va), std::move(vb)};
                    return verdict;
                }
            }
        } catch (const AbstractTypePresent& ex) {
            verdict.kind = EquivVerdict::Kind::skipped;
            verdict.warning = ex.what();
            return verdict;
        } catch (const UnknownUserOp& ex) {
            verdict.kind = EquivVerdict::Kind::skipped;
            verdict.warning = ex.what();
            return verdict;
        }
        // odometer increment; most-significant digit first is the first name
        size_t pos = n;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < domains[pos].size()) break;
            idx[pos] = 0;
            if (pos == 0) return verdict;
        }
        if (n == 0) return verdict;
    }
}

struct SoundVerdict {
    bool sound = true;
    int instances = 0; // concrete type instances checked
    std::vector<std::string> notes;
    std::vector<std::string> warnings;
    std::optional<Counterexample> cex;
    std::string cex_instance; // type assignment of the failing instance
};

namespace detail {

// Union-find over type positions of a rule's patterns, with optional concrete
// bindings and collected coercion constraints.
class TyInfer {
public:
    int fresh(std::optional<Ty> bound = std::nullopt) {
        m_parent.push_back(static_cast<int>(m_parent.size()));
        m_bound.push_back(std::move(bound));
        return m_parent.back();
    }

    int find(int x) {
        while (m_parent[x] != x) x = m_parent[x] = m_parent[m_parent[x]];
        return x;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (m_bound[a] && m_bound[b]) {
            if (*m_bound[a] != *m_bound[b]) m_contradiction = true;
            m_parent[b] = a;
            return;
        }
        if (m_bound[b]) std::swap(a, b);
        m_parent[b] = a;
    }

    int named(const std::string& key) {
        auto it = m_named.find(key);
        if (it != m_named.end()) return it->second;
        int id = fresh();
        m_order.push_back(key);
        m_named.emplace(key, id);
        return id;
    }

    void constrain(int src, int dst) { m_constraints.emplace_back(src, dst); }

    const std::optional<Ty>& binding(int x) { return m_bound[find(x)]; }
    bool contradictory() const { return m_contradiction; }
    const std::vector<std::pair<int, int>>& constraints() const { return m_constraints; }
    const std::vector<std::string>& named_order() const { return m_order; }
    int named_id(const std::string& key) const { return m_named.at(key); }
    int size() const { return static_cast<int>(m_parent.size()); }

private:
    std::vector<int> m_parent;
    std::vector<std::optional<Ty>> m_bound;
    std::map<std::string, int> m_named;
    std::vector<std::string> m_order;
    std::vector<std::pair<int, int>> m_constraints;
    bool m_contradiction = false;
};

// Returns the inferred type position of the pattern. Term metas key as
// "?name", type metas as "'name".
inline int infer_pattern_ty(const PatternPtr& p, const TypeEnv& env, TyInfer& uf) {
    switch (p->kind()) {
        case PatternKind::var: return uf.fresh(p->as_var().ty);
        case PatternKind::meta: return uf.named("?" + p->as_meta().name);
        case PatternKind::num: {
            const auto& n = p->as_num();
            if (n.ty.is_meta()) return uf.named("'" + n.ty.meta);
            return uf.fresh(*n.ty.concrete);
        }
        case PatternKind::app: {
            const auto& a = p->as_app();
            int arg_id = -1;
            for (const auto& child : a.args) {
                int id = infer_pattern_ty(child, env, uf);
                if (arg_id >= 0) uf.unite(arg_id, id);
                arg_id = arg_id < 0 ? id : arg_id;
            }
            auto decl = env.op_decl(a.op);
            if (decl && decl->is_rel) return uf.fresh(ty_prop());
            return arg_id;
        }
        case PatternKind::cast: {
            const auto& c = p->as_cast();
            int body_id = infer_pattern_ty(c.body, env, uf);
            if (c.src) {
                if (c.src->is_meta())
                    uf.unite(body_id, uf.named("'" + c.src->meta));
                else
                    uf.unite(body_id, uf.fresh(*c.src->concrete));
            }
            int dst_id = c.dst.is_meta() ? uf.named("'" + c.dst.meta) : uf.fresh(*c.dst.concrete);
            uf.constrain(body_id, dst_id);
            return dst_id;
        }
    }
    return -1;
}

} // namespace detail

// Checks a rewrite rule against the semantic oracle. Type metas and term-meta
// types are inferred by unification, every consistent assignment over the
// builtin carriers is instantiated with fresh variables, and both sides are
// compared exhaustively under the rule's side conditions. Rules with no
// concrete instance are vacuously sound.
inline SoundVerdict check_rule_sound(const RewriteRule& r, int hi, const TypeEnv& env) {
    SoundVerdict verdict;
    detail::TyInfer uf;
    int lhs_id = detail::infer_pattern_ty(r.lhs, env, uf);
    int rhs_id = detail::infer_pattern_ty(r.rhs, env, uf);
    uf.unite(lhs_id, rhs_id);
    for (const auto& cond : r.conds) detail::infer_pattern_ty(cond, env, uf);

    if (uf.contradictory()) {
        verdict.notes.push_back("type inference found no consistent instance (vacuously sound)");
        return verdict;
    }

    // Free groups: unbound representatives, in first-appearance order.
    std::vector<int> free_roots;
    for (int id = 0; id < uf.size(); ++id) {
        int root = uf.find(id);
        if (uf.binding(root)) continue;
        if (std::find(free_roots.begin(), free_roots.end(), root) == free_roots.end())
            free_roots.push_back(root);
    }

    static const Ty carriers[3] = {ty_nat(), ty_int(), ty_rat()};
    std::map<int, Ty> chosen;
    auto resolve = [&](int id) -> Ty {
        int root = uf.find(id);
        if (auto& b = uf.binding(root)) return *b;
        return chosen.at(root);
    };

    std::set<std::string> term_metas, type_metas;
    collect_metas(r.lhs, term_metas, type_metas);

    size_t k = free_roots.size();
    std::vector<size_t> pick(k, 0);
    while (true) {
        chosen.clear();
        for (size_t i = 0; i < k; ++i) chosen[free_roots[i]] = carriers[pick[i]];

        bool admissible = true;
        for (const auto& [src_id, dst_id] : uf.constraints()) {
            Ty s = resolve(src_id);
            Ty d = resolve(dst_id);
            if (s == d || !env.coercion_exists(s, d)) {
                admissible = false;
                break;
            }
        }

        if (admissible) {
            verdict.instances += 1;
            std::string inst_desc;
            TypeEnv inst_env = env;
            Subst subst;
            bool viable = true;
            for (const auto& m : term_metas) {
                Ty ty = resolve(uf.named_id("?" + m));
                if (ty.is_prop()) {
                    verdict.warnings.push_back("meta ?" + m + " inferred as a proposition");
                    viable = false;
                    break;
                }
                inst_env.retype_var(m, ty);
                subst.terms[m] = mk_var(m, ty);
                if (!inst_desc.empty()) inst_desc += ", ";
                inst_desc += "?" + m + " : " + ty.name;
            }
            for (const auto& t : type_metas) {
                Ty ty = resolve(uf.named_id("'" + t));
                subst.types[t] = ty;
                if (!inst_desc.empty()) inst_desc += ", ";
                inst_desc += "'" + t + " := " + ty.name;
            }
            if (inst_desc.empty()) inst_desc = "<ground rule>";

            if (viable) {
                ExprPtr lhs_e = instantiate(r.lhs, subst, inst_env);
                ExprPtr rhs_e = instantiate(r.rhs, subst, inst_env);
                Context cctx;
                bool conds_ok = true;
                for (const auto& cond : r.conds) {
                    ExprPtr c = instantiate(cond, subst, inst_env);
                    if (!c) {
                        conds_ok = false;
                        break;
                    }
                    cctx.hyps.push_back(std::move(c));
                }
                if (!lhs_e || !rhs_e || !conds_ok) {
                    verdict.warnings.push_back("instance " + inst_desc +
                                               " does not instantiate; skipped");
                } else {
                    EquivVerdict eq = check_equiv_exhaustive(lhs_e, rhs_e, cctx, hi, inst_env);
                    if (eq.kind == EquivVerdict::Kind::skipped) {
                        verdict.warnings.push_back("instance " + inst_desc + ": " + eq.warning);
                    } else if (eq.kind == EquivVerdict::Kind::counterexample) {
                        verdict.sound = false;
                        verdict.cex = eq.cex;
                        verdict.cex_instance = inst_desc;
                        return verdict;
                    }
                }
            }
        }

        size_t pos = k;
        bool done = k == 0;
        while (pos > 0) {
            --pos;
            if (++pick[pos] < 3) break;
            pick[pos] = 0;
            if (pos == 0) done = true;
        }
        if (done) break;
    }

    if (verdict.instances == 0)
        verdict.notes.push_back("no concrete instance exists (vacuously sound)");
    return verdict;
}

// Replaces every abstract (user-declared) type occurrence in the expression
// with the given builtin target, retyping affected variables in the returned
// environment. A cast whose endpoints collapse to the same type has no image
// and raises InstantiationIllTyped.
inline ExprPtr abstract_instantiate(const ExprPtr& e, const Ty& target, const TypeEnv& env,
                                    TypeEnv* out_env = nullptr) {
    if (target.kind == TyKind::user_declared || target.is_prop())
        throw Error("instantiation target must be a builtin carrier");
    TypeEnv inst = env;
    auto map_ty = [&](const Ty& t) { return t.kind == TyKind::user_declared ? target : t; };

    struct Walk {
        const Ty& target;
        TypeEnv& inst;
        decltype(map_ty)& map;

        ExprPtr rec(const ExprPtr& e) {
            switch (e->kind()) {
                case ExprKind::var: {
                    const auto& v = e->as_var();
                    if (v.ty.kind != TyKind::user_declared) return e;
                    inst.retype_var(v.name, target);
                    return mk_var(v.name, target);
                }
                case ExprKind::num: {
                    const auto& n = e->as_num();
                    if (n.ty.kind != TyKind::user_declared) return e;
                    return mk_num(n.value, target);
                }
                case ExprKind::app: {
                    const auto& a = e->as_app();
                    std::vector<ExprPtr> args;
                    args.reserve(a.args.size());
                    for (const auto& arg : a.args) args.push_back(rec(arg));
                    return mk_app(a.op, std::move(args));
                }
                case ExprKind::cast: {
                    const auto& c = e->as_cast();
                    Ty s = map(c.src);
                    Ty d = map(c.dst);
                    if (s == d)
                        throw InstantiationIllTyped("cast from '" + c.src.name + "' to '" +
                                                    c.dst.name + "' collapses at '" + target.name +
                                                    "'");
                    return mk_cast(std::move(s), std::move(d), rec(c.body));
                }
            }
            return e;
        }
    };

    Walk w{target, inst, map_ty};
    ExprPtr out = w.rec(e);
    try {
        type_of(out, inst);
    } catch (const Error& err) {
        throw InstantiationIllTyped(err.what());
    }
    if (out_env) *out_env = std::move(inst);
    return out;
}

} // namespace castnorm
