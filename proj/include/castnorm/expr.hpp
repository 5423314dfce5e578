/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include "castnorm/types.hpp"

#include <memory>
#include <variant>
#include <vector>

namespace castnorm {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct VarNode {
    std::string name;
    Ty ty;
};

struct NumNode {
    BigInt value; // >= 0; negative literals are App(neg, [Num ...])
    Ty ty;
};

struct AppNode {
    std::string op;
    std::vector<ExprPtr> args;
};

struct CastNode {
    Ty src;
    Ty dst;
    ExprPtr body;
};

enum class ExprKind { var, num, app, cast };

class Expr {
public:
    explicit Expr(VarNode n) : m_node(std::move(n)) {}
    explicit Expr(NumNode n) : m_node(std::move(n)) {}
    explicit Expr(AppNode n) : m_node(std::move(n)) {}
    explicit Expr(CastNode n) : m_node(std::move(n)) {}

    ExprKind kind() const { return static_cast<ExprKind>(m_node.index()); }

    bool is_var() const { return kind() == ExprKind::var; }
    bool is_num() const { return kind() == ExprKind::num; }
    bool is_app() const { return kind() == ExprKind::app; }
    bool is_cast() const { return kind() == ExprKind::cast; }

    const VarNode& as_var() const { return std::get<VarNode>(m_node); }
    const NumNode& as_num() const { return std::get<NumNode>(m_node); }
    const AppNode& as_app() const { return std::get<AppNode>(m_node); }
    const CastNode& as_cast() const { return std::get<CastNode>(m_node); }

private:
    std::variant<VarNode, NumNode, AppNode, CastNode> m_node;
};

inline ExprPtr mk_var(std::string name, Ty ty) {
    return std::make_shared<Expr>(VarNode{std::move(name), std::move(ty)});
}

inline ExprPtr mk_num(BigInt value, Ty ty) {
    if (value < 0) throw Error("numeral value must be nonnegative");
    return std::make_shared<Expr>(NumNode{std::move(value), std::move(ty)});
}

inline ExprPtr mk_app(std::string op, std::vector<ExprPtr> args) {
    return std::make_shared<Expr>(AppNode{std::move(op), std::move(args)});
}

inline ExprPtr mk_cast(Ty src, Ty dst, ExprPtr body) {
    if (src == dst) throw InvalidCast("cast source and target must differ");
    return std::make_shared<Expr>(CastNode{std::move(src), std::move(dst), std::move(body)});
}

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
    case ExprKind::var:
        return a->as_var().name == b->as_var().name && a->as_var().ty == b->as_var().ty;
    case ExprKind::num:
        return a->as_num().value == b->as_num().value && a->as_num().ty == b->as_num().ty;
    case ExprKind::app: {
        const auto& x = a->as_app();
        const auto& y = b->as_app();
        if (x.op != y.op || x.args.size() != y.args.size()) return false;
        for (size_t i = 0; i < x.args.size(); ++i)
            if (!equal(x.args[i], y.args[i])) return false;
        return true;
    }
    case ExprKind::cast: {
        const auto& x = a->as_cast();
        const auto& y = b->as_cast();
        return x.src == y.src && x.dst == y.dst && equal(x.body, y.body);
    }
    }
    return false;
}

inline int total_casts(const ExprPtr& e) {
    switch (e->kind()) {
    case ExprKind::var:
    case ExprKind::num:
        return 0;
    case ExprKind::app: {
        int n = 0;
        for (const auto& a : e->as_app().args) n += total_casts(a);
        return n;
    }
    case ExprKind::cast:
        return 1 + total_casts(e->as_cast().body);
    }
    return 0;
}

struct CastCounts {
    int hc = 0; // length of the cast chain at the root
    int ic = 0; // every other cast
};

inline CastCounts count_casts(const ExprPtr& e) {
    int hc = 0;
    ExprPtr cur = e;
    while (cur->is_cast()) {
        ++hc;
        cur = cur->as_cast().body;
    }
    return CastCounts{hc, total_casts(e) - hc};
}

inline Ty type_of(const ExprPtr& e, const TypeEnv& env) {
    switch (e->kind()) {
    case ExprKind::var: {
        const auto& v = e->as_var();
        auto declared = env.var_type(v.name);
        if (!declared) throw UndeclaredVariable("undeclared variable '" + v.name + "'");
        if (*declared != v.ty)
            throw UndeclaredVariable("variable '" + v.name + "' declared at type " +
                                     declared->name + ", used at " + v.ty.name);
        return v.ty;
    }
    case ExprKind::num: {
        const auto& n = e->as_num();
        if (n.ty.is_prop()) throw IllTypedApplication("numeral cannot have type prop");
        return n.ty;
    }
    case ExprKind::app: {
        const auto& a = e->as_app();
        auto decl = env.op_decl(a.op);
        if (!decl) throw IllTypedApplication("unknown operator '" + a.op + "'");
        if (static_cast<int>(a.args.size()) != decl->arity)
            throw IllTypedApplication("operator '" + a.op + "' expects " +
                                      std::to_string(decl->arity) + " arguments");
        Ty arg_ty = type_of(a.args[0], env);
        if (arg_ty.is_prop())
            throw IllTypedApplication("operator '" + a.op + "' applied to a proposition");
        for (size_t i = 1; i < a.args.size(); ++i) {
            Ty t = type_of(a.args[i], env);
            if (t != arg_ty)
                throw IllTypedApplication("operator '" + a.op + "' argument types disagree: " +
                                          arg_ty.name + " vs " + t.name);
        }
        return decl->is_rel ? ty_prop() : arg_ty;
    }
    case ExprKind::cast: {
        const auto& c = e->as_cast();
        Ty body_ty = type_of(c.body, env);
        if (body_ty != c.src)
            throw InvalidCast("cast source " + c.src.name + " does not match body type " +
                              body_ty.name);
        if (!env.coercion_exists(c.src, c.dst))
            throw InvalidCast("no coercion from " + c.src.name + " to " + c.dst.name);
        return c.dst;
    }
    }
    throw Error("unreachable");
}

using Path = std::vector<int>;

inline ExprPtr subterm_at(const ExprPtr& e, const Path& p) {
    ExprPtr cur = e;
    for (int idx : p) {
        if (cur->is_app()) {
            const auto& a = cur->as_app();
            if (idx < 0 || idx >= static_cast<int>(a.args.size()))
                throw Error("path index out of range");
            cur = a.args[idx];
        } else if (cur->is_cast()) {
            if (idx != 0) throw Error("path index out of range");
            cur = cur->as_cast().body;
        } else {
            throw Error("path descends into a leaf");
        }
    }
    return cur;
}

inline ExprPtr replace_at(const ExprPtr& e, const Path& p, const ExprPtr& sub, size_t depth = 0) {
    if (depth == p.size()) return sub;
    int idx = p[depth];
    if (e->is_app()) {
        const auto& a = e->as_app();
        if (idx < 0 || idx >= static_cast<int>(a.args.size()))
            throw Error("path index out of range");
        std::vector<ExprPtr> args = a.args;
        args[idx] = replace_at(args[idx], p, sub, depth + 1);
        return mk_app(a.op, std::move(args));
    }
    if (e->is_cast()) {
        if (idx != 0) throw Error("path index out of range");
        const auto& c = e->as_cast();
        return mk_cast(c.src, c.dst, replace_at(c.body, p, sub, depth + 1));
    }
    throw Error("path descends into a leaf");
}

inline void collect_free_vars(const ExprPtr& e, std::set<std::string>& out) {
    switch (e->kind()) {
    case ExprKind::var:
        out.insert(e->as_var().name);
        return;
    case ExprKind::num:
        return;
    case ExprKind::app:
        for (const auto& a : e->as_app().args) collect_free_vars(a, out);
        return;
    case ExprKind::cast:
        collect_free_vars(e->as_cast().body, out);
        return;
    }
}

inline std::set<std::string> free_vars(const ExprPtr& e) {
    std::set<std::string> out;
    collect_free_vars(e, out);
    return out;
}

inline bool contains_user_op(const ExprPtr& e) {
    switch (e->kind()) {
    case ExprKind::var:
    case ExprKind::num:
        return false;
    case ExprKind::app: {
        if (!builtin_op(e->as_app().op)) return true;
        for (const auto& a : e->as_app().args)
            if (contains_user_op(a)) return true;
        return false;
    }
    case ExprKind::cast:
        return contains_user_op(e->as_cast().body);
    }
    return false;
}

// Hypotheses available to conditional rewriting; each is a prop.
struct Context {
    std::vector<ExprPtr> hyps;
};

} // namespace castnorm
