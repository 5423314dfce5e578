/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include "castnorm/expr.hpp"
#include "castnorm/pretty.hpp"

#include <map>
#include <optional>
#include <sstream>

namespace castnorm {

// A type position in a pattern: either a concrete type or a type meta 'T.
struct TyPat {
    std::optional<Ty> concrete;
    std::string meta;

    bool is_meta() const { return !concrete.has_value(); }

    static TyPat of(Ty t) { return TyPat{std::move(t), {}}; }
    static TyPat of_meta(std::string name) { return TyPat{std::nullopt, std::move(name)}; }

    bool operator==(const TyPat&) const = default;
};

class Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

struct PVar {
    std::string name;
    Ty ty;
};

struct PMeta {
    std::string name; // ?name
};

struct PNum {
    BigInt value;
    TyPat ty;
};

struct PApp {
    std::string op;
    std::vector<PatternPtr> args;
};

struct PCast {
    std::optional<TyPat> src; // absent: source unconstrained, inferred on instantiation
    TyPat dst;
    PatternPtr body;
};

enum class PatternKind { var, meta, num, app, cast };

class Pattern {
public:
    explicit Pattern(PVar n) : m_node(std::move(n)) {}
    explicit Pattern(PMeta n) : m_node(std::move(n)) {}
    explicit Pattern(PNum n) : m_node(std::move(n)) {}
    explicit Pattern(PApp n) : m_node(std::move(n)) {}
    explicit Pattern(PCast n) : m_node(std::move(n)) {}

    PatternKind kind() const { return static_cast<PatternKind>(m_node.index()); }

    bool is_var() const { return kind() == PatternKind::var; }
    bool is_meta() const { return kind() == PatternKind::meta; }
    bool is_num() const { return kind() == PatternKind::num; }
    bool is_app() const { return kind() == PatternKind::app; }
    bool is_cast() const { return kind() == PatternKind::cast; }

    const PVar& as_var() const { return std::get<PVar>(m_node); }
    const PMeta& as_meta() const { return std::get<PMeta>(m_node); }
    const PNum& as_num() const { return std::get<PNum>(m_node); }
    const PApp& as_app() const { return std::get<PApp>(m_node); }
    const PCast& as_cast() const { return std::get<PCast>(m_node); }

private:
    std::variant<PVar, PMeta, PNum, PApp, PCast> m_node;
};

inline PatternPtr mk_pvar(std::string name, Ty ty) {
    return std::make_shared<Pattern>(PVar{std::move(name), std::move(ty)});
}
inline PatternPtr mk_pmeta(std::string name) {
    return std::make_shared<Pattern>(PMeta{std::move(name)});
}
inline PatternPtr mk_pnum(BigInt value, TyPat ty) {
    if (value < 0) throw Error("numeral value must be nonnegative");
    return std::make_shared<Pattern>(PNum{std::move(value), std::move(ty)});
}
inline PatternPtr mk_papp(std::string op, std::vector<PatternPtr> args) {
    return std::make_shared<Pattern>(PApp{std::move(op), std::move(args)});
}
inline PatternPtr mk_pcast(std::optional<TyPat> src, TyPat dst, PatternPtr body) {
    return std::make_shared<Pattern>(PCast{std::move(src), std::move(dst), std::move(body)});
}

struct Subst {
    std::map<std::string, ExprPtr> terms;
    std::map<std::string, Ty> types;
};

// Cast counting lifted to patterns; metas count as cast-free leaves.
inline int pattern_total_casts(const PatternPtr& p) {
    switch (p->kind()) {
    case PatternKind::var:
    case PatternKind::meta:
    case PatternKind::num:
        return 0;
    case PatternKind::app: {
        int n = 0;
        for (const auto& a : p->as_app().args) n += pattern_total_casts(a);
        return n;
    }
    case PatternKind::cast:
        return 1 + pattern_total_casts(p->as_cast().body);
    }
    return 0;
}

inline CastCounts pattern_count_casts(const PatternPtr& p) {
    int hc = 0;
    PatternPtr cur = p;
    while (cur->is_cast()) {
        ++hc;
        cur = cur->as_cast().body;
    }
    return CastCounts{hc, pattern_total_casts(p) - hc};
}

// A pattern is prop-rooted iff its root is a relation application.
inline bool pattern_is_prop(const PatternPtr& p, const TypeEnv& env) {
    if (!p->is_app()) return false;
    auto decl = env.op_decl(p->as_app().op);
    return decl && decl->is_rel;
}

inline void collect_metas(const PatternPtr& p, std::set<std::string>& terms,
                          std::set<std::string>& types) {
    switch (p->kind()) {
    case PatternKind::var:
        return;
    case PatternKind::meta:
        terms.insert(p->as_meta().name);
        return;
    case PatternKind::num:
        if (p->as_num().ty.is_meta()) types.insert(p->as_num().ty.meta);
        return;
    case PatternKind::app:
        for (const auto& a : p->as_app().args) collect_metas(a, terms, types);
        return;
    case PatternKind::cast: {
        const auto& c = p->as_cast();
        if (c.src && c.src->is_meta()) types.insert(c.src->meta);
        if (c.dst.is_meta()) types.insert(c.dst.meta);
        collect_metas(c.body, terms, types);
        return;
    }
    }
}

namespace detail {

inline bool match_typat(const TyPat& tp, const Ty& ty, Subst& s) {
    if (!tp.is_meta()) return *tp.concrete == ty;
    auto it = s.types.find(tp.meta);
    if (it != s.types.end()) return it->second == ty;
    s.types[tp.meta] = ty;
    return true;
}

inline bool match_rec(const PatternPtr& p, const ExprPtr& e, Subst& s) {
    switch (p->kind()) {
    case PatternKind::meta: {
        auto it = s.terms.find(p->as_meta().name);
        if (it != s.terms.end()) return equal(it->second, e); // nonlinear occurrence
        s.terms[p->as_meta().name] = e;
        return true;
    }
    case PatternKind::var:
        return e->is_var() && e->as_var().name == p->as_var().name &&
               e->as_var().ty == p->as_var().ty;
    case PatternKind::num:
        return e->is_num() && e->as_num().value == p->as_num().value &&
               match_typat(p->as_num().ty, e->as_num().ty, s);
    case PatternKind::app: {
        if (!e->is_app()) return false;
        const auto& pa = p->as_app();
        const auto& ea = e->as_app();
        if (pa.op != ea.op || pa.args.size() != ea.args.size()) return false;
        for (size_t i = 0; i < pa.args.size(); ++i)
            if (!match_rec(pa.args[i], ea.args[i], s)) return false;
        return true;
    }
    case PatternKind::cast: {
        if (!e->is_cast()) return false;
        const auto& pc = p->as_cast();
        const auto& ec = e->as_cast();
        if (pc.src && !match_typat(*pc.src, ec.src, s)) return false;
        if (!match_typat(pc.dst, ec.dst, s)) return false;
        return match_rec(pc.body, ec.body, s);
    }
    }
    return false;
}

} // namespace detail

inline std::optional<Subst> match(const PatternPtr& p, const ExprPtr& e) {
    Subst s;
    if (detail::match_rec(p, e, s)) return s;
    return std::nullopt;
}

namespace detail {

inline std::optional<Ty> resolve_typat(const TyPat& tp, const Subst& s) {
    if (!tp.is_meta()) return tp.concrete;
    auto it = s.types.find(tp.meta);
    if (it == s.types.end()) return std::nullopt;
    return it->second;
}

} // namespace detail

// Builds the instance of p under s. Returns nullptr when the instance would
// be invalid at these types (unbound meta, cast with src = dst, or a missing
// coercion); callers treat that as a non-match.
inline ExprPtr instantiate(const PatternPtr& p, const Subst& s, const TypeEnv& env) {
    switch (p->kind()) {
    case PatternKind::meta: {
        auto it = s.terms.find(p->as_meta().name);
        if (it == s.terms.end()) return nullptr;
        return it->second;
    }
    case PatternKind::var:
        return mk_var(p->as_var().name, p->as_var().ty);
    case PatternKind::num: {
        auto ty = detail::resolve_typat(p->as_num().ty, s);
        if (!ty || ty->is_prop()) return nullptr;
        return mk_num(p->as_num().value, *ty);
    }
    case PatternKind::app: {
        std::vector<ExprPtr> args;
        args.reserve(p->as_app().args.size());
        for (const auto& a : p->as_app().args) {
            ExprPtr e = instantiate(a, s, env);
            if (!e) return nullptr;
            args.push_back(std::move(e));
        }
        return mk_app(p->as_app().op, std::move(args));
    }
    case PatternKind::cast: {
        const auto& c = p->as_cast();
        ExprPtr body = instantiate(c.body, s, env);
        if (!body) return nullptr;
        auto dst = detail::resolve_typat(c.dst, s);
        if (!dst) return nullptr;
        Ty body_ty;
        try {
            body_ty = type_of(body, env);
        } catch (const Error&) {
            return nullptr;
        }
        if (c.src) {
            auto src = detail::resolve_typat(*c.src, s);
            if (!src || *src != body_ty) return nullptr;
        }
        if (body_ty == *dst || !env.coercion_exists(body_ty, *dst)) return nullptr;
        return mk_cast(body_ty, *dst, std::move(body));
    }
    }
    return nullptr;
}

namespace detail {

inline std::string typat_str(const TyPat& tp) {
    return tp.is_meta() ? "'" + tp.meta : tp.concrete->name;
}

inline int pattern_level(const PatternPtr& p) {
    if (!p->is_app()) return 4;
    const std::string& op = p->as_app().op;
    if (op == "add" || op == "sub") return 1;
    if (op == "mul") return 2;
    if (op == "neg") return 3;
    if (builtin_op(op) && builtin_op(op)->is_rel) return 0;
    return 4;
}

inline void pretty_pattern_rec(const PatternPtr& p, int min_level, std::ostream& os) {
    int level = pattern_level(p);
    bool parens = level < min_level;
    if (parens) os << "(";
    switch (p->kind()) {
    case PatternKind::var:
        os << p->as_var().name;
        break;
    case PatternKind::meta:
        os << "?" << p->as_meta().name;
        break;
    case PatternKind::num:
        os << p->as_num().value << ":" << typat_str(p->as_num().ty);
        break;
    case PatternKind::cast: {
        const auto& c = p->as_cast();
        os << "cast(";
        if (c.src) os << typat_str(*c.src) << " -> ";
        os << typat_str(c.dst) << ", ";
        pretty_pattern_rec(c.body, 0, os);
        os << ")";
        break;
    }
    case PatternKind::app: {
        const auto& a = p->as_app();
        if (a.op == "add" || a.op == "sub") {
            pretty_pattern_rec(a.args[0], 1, os);
            os << (a.op == "add" ? " + " : " - ");
            pretty_pattern_rec(a.args[1], 2, os);
        } else if (a.op == "mul") {
            pretty_pattern_rec(a.args[0], 2, os);
            os << " * ";
            pretty_pattern_rec(a.args[1], 3, os);
        } else if (a.op == "neg") {
            const PatternPtr& arg = a.args[0];
            bool direct = arg->is_var() || arg->is_meta() || arg->is_cast() ||
                          (arg->is_app() && pattern_level(arg) == 4);
            os << "-";
            if (direct) {
                pretty_pattern_rec(arg, 0, os);
            } else {
                os << "(";
                pretty_pattern_rec(arg, 0, os);
                os << ")";
            }
        } else if (const char* rel = rel_token(a.op)) {
            pretty_pattern_rec(a.args[0], 1, os);
            os << " " << rel << " ";
            pretty_pattern_rec(a.args[1], 1, os);
        } else {
            os << a.op << "(";
            for (size_t i = 0; i < a.args.size(); ++i) {
                if (i) os << ", ";
                pretty_pattern_rec(a.args[i], 0, os);
            }
            os << ")";
        }
        break;
    }
    }
    if (parens) os << ")";
}

} // namespace detail

inline std::string pretty_pattern(const PatternPtr& p) {
    std::ostringstream os;
    detail::pretty_pattern_rec(p, 0, os);
    return os.str();
}

} // namespace castnorm
