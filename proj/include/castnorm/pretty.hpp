/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include "castnorm/expr.hpp"

#include <sstream>

namespace castnorm {

namespace detail {

// Binding levels: relations 0, +/- 1, * 2, unary - 3, atoms 4.
inline int expr_level(const ExprPtr& e) {
    if (!e->is_app()) return 4;
    const std::string& op = e->as_app().op;
    if (op == "add" || op == "sub") return 1;
    if (op == "mul") return 2;
    if (op == "neg") return 3;
    if (builtin_op(op) && builtin_op(op)->is_rel) return 0;
    return 4; // user calls print as name(args)
}

inline const char* rel_token(const std::string& op) {
    if (op == "eq") return "=";
    if (op == "ne") return "!=";
    if (op == "lt") return "<";
    if (op == "le") return "<=";
    if (op == "dvd") return "dvd";
    return nullptr;
}

inline void pretty_rec(const ExprPtr& e, int min_level, std::ostream& os) {
    int level = expr_level(e);
    bool parens = level < min_level;
    if (parens) os << "(";
    switch (e->kind()) {
    case ExprKind::var:
        os << e->as_var().name;
        break;
    case ExprKind::num:
        os << e->as_num().value << ":" << e->as_num().ty.name;
        break;
    case ExprKind::cast: {
        const auto& c = e->as_cast();
        os << "cast(" << c.dst.name << ", ";
        pretty_rec(c.body, 0, os);
        os << ")";
        break;
    }
    case ExprKind::app: {
        const auto& a = e->as_app();
        if (a.op == "add" || a.op == "sub") {
            pretty_rec(a.args[0], 1, os);
            os << (a.op == "add" ? " + " : " - ");
            pretty_rec(a.args[1], 2, os);
        } else if (a.op == "mul") {
            pretty_rec(a.args[0], 2, os);
            os << " * ";
            pretty_rec(a.args[1], 3, os);
        } else if (a.op == "neg") {
            // Var, cast, and call operands bind tightly; everything else
            // (numerals included, per the canonical -(3:int) spelling) takes parens.
            const ExprPtr& arg = a.args[0];
            bool direct = arg->is_var() || arg->is_cast() ||
                          (arg->is_app() && expr_level(arg) == 4);
            os << "-";
            if (direct) {
                pretty_rec(arg, 0, os);
            } else {
                os << "(";
                pretty_rec(arg, 0, os);
                os << ")";
            }
        } else if (const char* rel = rel_token(a.op)) {
            pretty_rec(a.args[0], 1, os);
            os << " " << rel << " ";
            pretty_rec(a.args[1], 1, os);
        } else {
            os << a.op << "(";
            for (size_t i = 0; i < a.args.size(); ++i) {
                if (i) os << ", ";
                pretty_rec(a.args[i], 0, os);
            }
            os << ")";
        }
        break;
    }
    }
    if (parens) os << ")";
}

} // namespace detail

inline std::string pretty(const ExprPtr& e) {
    std::ostringstream os;
    detail::pretty_rec(e, 0, os);
    return os.str();
}

} // namespace castnorm
