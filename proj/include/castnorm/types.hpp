/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include "castnorm/basic.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace castnorm {

enum class TyKind { builtin_nat, builtin_int, builtin_rat, builtin_prop, user_declared };

struct Ty {
    std::string name;
    TyKind kind = TyKind::user_declared;

    bool operator==(const Ty&) const = default;
    bool operator<(const Ty& o) const { return name < o.name; }

    bool is_prop() const { return kind == TyKind::builtin_prop; }
    bool is_concrete() const { return kind != TyKind::user_declared; }
};

inline Ty ty_nat() { return {"nat", TyKind::builtin_nat}; }
inline Ty ty_int() { return {"int", TyKind::builtin_int}; }
inline Ty ty_rat() { return {"rat", TyKind::builtin_rat}; }
inline Ty ty_prop() { return {"prop", TyKind::builtin_prop}; }

struct OpDecl {
    std::string name;
    int arity = 0;
    bool is_rel = false; // relations return prop, functions return the argument type
};

inline std::optional<OpDecl> builtin_op(const std::string& name) {
    static const std::map<std::string, OpDecl> table = {
        {"add", {"add", 2, false}}, {"sub", {"sub", 2, false}},
        {"mul", {"mul", 2, false}}, {"neg", {"neg", 1, false}},
        {"lt", {"lt", 2, true}},    {"le", {"le", 2, true}},
        {"eq", {"eq", 2, true}},    {"ne", {"ne", 2, true}},
        {"dvd", {"dvd", 2, true}},
    };
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

// Base coercion edges; reachability over the edge set is the meaning of
// "a coercion exists". The edge relation must stay a DAG.
class CoercionGraph {
public:
    void add_edge(const Ty& src, const Ty& dst) {
        if (src.is_prop() || dst.is_prop())
            throw InvalidCast("prop cannot be the source or target of a coercion");
        if (src.name == dst.name)
            throw InvalidCast("self-coercion " + src.name + " -> " + src.name + " rejected");
        if (reachable(dst.name, src.name))
            throw InvalidCast("coercion " + src.name + " -> " + dst.name + " would create a cycle");
        m_adj[src.name].insert(dst.name);
    }

    bool exists(const Ty& src, const Ty& dst) const {
        if (src.name == dst.name) return false;
        return reachable(src.name, dst.name);
    }

    const std::map<std::string, std::set<std::string>>& edges() const { return m_adj; }

private:
    bool reachable(const std::string& from, const std::string& to) const {
        if (from == to) return true;
        std::set<std::string> seen;
        std::vector<std::string> stack{from};
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            auto it = m_adj.find(cur);
            if (it == m_adj.end()) continue;
            for (const auto& next : it->second) {
                if (next == to) return true;
                if (seen.insert(next).second) stack.push_back(next);
            }
        }
        return false;
    }

    std::map<std::string, std::set<std::string>> m_adj;
};

// Declared types, variable typings, user operators, and the coercion graph.
// Built once per problem, then shared read-only.
class TypeEnv {
public:
    TypeEnv() {
        for (const Ty& t : {ty_nat(), ty_int(), ty_rat(), ty_prop()}) m_types[t.name] = t;
        m_graph.add_edge(ty_nat(), ty_int());
        m_graph.add_edge(ty_int(), ty_rat());
    }

    void declare_type(const std::string& name) {
        if (m_types.count(name)) throw DuplicateName("type '" + name + "' already declared");
        if (is_reserved(name)) throw Error("'" + name + "' is reserved");
        m_types[name] = Ty{name, TyKind::user_declared};
    }

    void declare_coe(const std::string& src, const std::string& dst) {
        m_graph.add_edge(lookup_type(src), lookup_type(dst));
    }

    void declare_op(const std::string& name, int arity, bool is_rel) {
        if (builtin_op(name) || m_ops.count(name))
            throw DuplicateName("operator '" + name + "' already declared");
        if (is_reserved(name) || m_types.count(name)) throw Error("'" + name + "' is reserved");
        if (arity < 1) throw Error("operator '" + name + "' must take at least one argument");
        m_ops[name] = OpDecl{name, arity, is_rel};
    }

    void declare_var(const std::string& name, const std::string& ty_name) {
        Ty ty = lookup_type(ty_name);
        if (ty.is_prop()) throw Error("variable '" + name + "' cannot have type prop");
        if (m_vars.count(name)) throw DuplicateName("variable '" + name + "' already declared");
        if (is_reserved(name)) throw Error("'" + name + "' is reserved");
        m_vars[name] = ty;
    }

    Ty lookup_type(const std::string& name) const {
        auto it = m_types.find(name);
        if (it == m_types.end()) throw Error("unknown type '" + name + "'");
        return it->second;
    }

    bool has_type(const std::string& name) const { return m_types.count(name) != 0; }

    std::optional<Ty> var_type(const std::string& name) const {
        auto it = m_vars.find(name);
        if (it == m_vars.end()) return std::nullopt;
        return it->second;
    }

    std::optional<OpDecl> op_decl(const std::string& name) const {
        if (auto b = builtin_op(name)) return b;
        auto it = m_ops.find(name);
        if (it == m_ops.end()) return std::nullopt;
        return it->second;
    }

    const std::map<std::string, Ty>& vars() const { return m_vars; }
    const std::map<std::string, Ty>& types() const { return m_types; }

    bool coercion_exists(const Ty& src, const Ty& dst) const { return m_graph.exists(src, dst); }
    const CoercionGraph& graph() const { return m_graph; }
    CoercionGraph& graph() { return m_graph; }

    void retype_var(const std::string& name, const Ty& ty) { m_vars[name] = ty; }

    static bool is_reserved(const std::string& name) { return name == "cast" || name == "dvd"; }

private:
    std::map<std::string, Ty> m_types;
    std::map<std::string, Ty> m_vars;
    std::map<std::string, OpDecl> m_ops;
    CoercionGraph m_graph;
};

inline bool coercion_exists(const CoercionGraph& g, const Ty& src, const Ty& dst) {
    return g.exists(src, dst);
}

} // namespace castnorm
