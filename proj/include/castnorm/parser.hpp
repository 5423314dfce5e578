/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include "castnorm/rules.hpp"

#include <sstream>
#include <vector>

namespace castnorm {

enum class TokKind {
    ident, num, term_meta, ty_meta,
    lparen, rparen, comma, colon, semicolon, lbracket, rbracket,
    plus, minus, star, lt, le, eq, ne, arrow,
    end
};

struct Token {
    TokKind kind;
    std::string text;
    BigInt value; // numeric tokens only
    int line = 0;
    int col = 0;
};

inline std::vector<Token> tokenize_line(const std::string& s, const std::string& file, int line) {
    std::vector<Token> out;
    size_t i = 0;
    auto push = [&](TokKind k, std::string text, size_t col) {
        out.push_back(Token{k, std::move(text), 0, line, static_cast<int>(col) + 1});
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') break;
        size_t start = i;
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() && (isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            push(TokKind::ident, s.substr(start, i - start), start);
            continue;
        }
        if (isdigit(static_cast<unsigned char>(c))) {
            while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ++i;
            std::string text = s.substr(start, i - start);
            push(TokKind::num, text, start);
            out.back().value = BigInt(text);
            continue;
        }
        if (c == '?' || c == '\'') {
            ++i;
            size_t id_start = i;
            while (i < s.size() && (isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            if (i == id_start)
                throw ParseError(file, line, static_cast<int>(start) + 1,
                                 std::string("expected identifier after '") + c + "'");
            push(c == '?' ? TokKind::term_meta : TokKind::ty_meta, s.substr(id_start, i - id_start),
                 start);
            continue;
        }
        auto two = [&](char second) { return i + 1 < s.size() && s[i + 1] == second; };
        switch (c) {
        case '(': push(TokKind::lparen, "(", start); ++i; break;
        case ')': push(TokKind::rparen, ")", start); ++i; break;
        case ',': push(TokKind::comma, ",", start); ++i; break;
        case ':': push(TokKind::colon, ":", start); ++i; break;
        case ';': push(TokKind::semicolon, ";", start); ++i; break;
        case '[': push(TokKind::lbracket, "[", start); ++i; break;
        case ']': push(TokKind::rbracket, "]", start); ++i; break;
        case '+': push(TokKind::plus, "+", start); ++i; break;
        case '*': push(TokKind::star, "*", start); ++i; break;
        case '=': push(TokKind::eq, "=", start); ++i; break;
        case '-':
            if (two('>')) {
                push(TokKind::arrow, "->", start);
                i += 2;
            } else {
                push(TokKind::minus, "-", start);
                ++i;
            }
            break;
        case '<':
            if (two('=')) {
                push(TokKind::le, "<=", start);
                i += 2;
            } else {
                push(TokKind::lt, "<", start);
                ++i;
            }
            break;
        case '!':
            if (two('=')) {
                push(TokKind::ne, "!=", start);
                i += 2;
            } else {
                throw ParseError(file, line, static_cast<int>(start) + 1, "unexpected '!'");
            }
            break;
        default:
            throw ParseError(file, line, static_cast<int>(start) + 1,
                             std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back(Token{TokKind::end, "", 0, line, static_cast<int>(s.size()) + 1});
    return out;
}

// Recursive-descent parser over one token slice. Patterns and plain
// expressions share the grammar; plain expressions reject metas.
class ExprParser {
public:
    ExprParser(std::vector<Token> toks, const TypeEnv& env, std::string file, bool allow_metas)
        : m_toks(std::move(toks)), m_env(env), m_file(std::move(file)),
          m_allow_metas(allow_metas) {}

    PatternPtr parse_pattern_expr() { return parse_rel(); }

    ExprPtr parse_expr() {
        const Token& at = peek();
        PatternPtr p = parse_rel();
        ExprPtr e = to_expr(p, at);
        try {
            type_of(e, m_env);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& err) {
            fail(at, err.what());
        }
        return e;
    }

    const Token& peek() const { return m_toks[m_pos]; }
    bool at_end() const { return peek().kind == TokKind::end; }

    void expect_end() {
        if (!at_end()) fail(peek(), "unexpected trailing input '" + peek().text + "'");
    }

    Token take() { return m_toks[m_pos++]; }

    Token expect(TokKind k, const std::string& what) {
        if (peek().kind != k) fail(peek(), "expected " + what + ", found '" + peek().text + "'");
        return take();
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        throw ParseError(m_file, t.line, t.col, msg);
    }

private:
    PatternPtr parse_rel() {
        PatternPtr a = parse_arith();
        std::string rel;
        switch (peek().kind) {
        case TokKind::eq: rel = "eq"; break;
        case TokKind::ne: rel = "ne"; break;
        case TokKind::lt: rel = "lt"; break;
        case TokKind::le: rel = "le"; break;
        case TokKind::ident:
            if (peek().text == "dvd") rel = "dvd";
            break;
        default: break;
        }
        if (rel.empty()) return a;
        take();
        PatternPtr b = parse_arith();
        return mk_papp(rel, {a, b});
    }

    PatternPtr parse_arith() {
        PatternPtr a = parse_term();
        while (peek().kind == TokKind::plus || peek().kind == TokKind::minus) {
            std::string op = take().kind == TokKind::plus ? "add" : "sub";
            a = mk_papp(op, {a, parse_term()});
        }
        return a;
    }

    PatternPtr parse_term() {
        PatternPtr a = parse_factor();
        while (peek().kind == TokKind::star) {
            take();
            a = mk_papp("mul", {a, parse_factor()});
        }
        return a;
    }

    PatternPtr parse_factor() {
        if (peek().kind == TokKind::minus) {
            take();
            return mk_papp("neg", {parse_factor()});
        }
        return parse_atom();
    }

    TyPat parse_typat() {
        if (peek().kind == TokKind::ty_meta) {
            Token t = take();
            if (!m_allow_metas) fail(t, "type metas are not allowed here");
            return TyPat::of_meta(t.text);
        }
        Token t = expect(TokKind::ident, "a type name");
        try {
            return TyPat::of(m_env.lookup_type(t.text));
        } catch (const Error& err) {
            fail(t, err.what());
        }
    }

    PatternPtr parse_atom() {
        const Token& t = peek();
        switch (t.kind) {
        case TokKind::lparen: {
            take();
            PatternPtr p = parse_rel();
            expect(TokKind::rparen, "')'");
            return p;
        }
        case TokKind::num: {
            Token num = take();
            expect(TokKind::colon, "':' after a numeral");
            return mk_pnum(num.value, parse_typat());
        }
        case TokKind::term_meta: {
            Token m = take();
            if (!m_allow_metas) fail(m, "term metas are not allowed here");
            return mk_pmeta(m.text);
        }
        case TokKind::ident: {
            Token id = take();
            if (id.text == "cast") {
                expect(TokKind::lparen, "'(' after cast");
                TyPat first = parse_typat();
                std::optional<TyPat> src;
                TyPat dst = first;
                if (peek().kind == TokKind::arrow) {
                    take();
                    src = first;
                    dst = parse_typat();
                }
                expect(TokKind::comma, "',' in cast");
                PatternPtr body = parse_rel();
                expect(TokKind::rparen, "')'");
                return mk_pcast(std::move(src), std::move(dst), std::move(body));
            }
            if (peek().kind == TokKind::lparen) {
                auto decl = m_env.op_decl(id.text);
                if (!decl) fail(id, "unknown operator '" + id.text + "'");
                take();
                std::vector<PatternPtr> args;
                args.push_back(parse_rel());
                while (peek().kind == TokKind::comma) {
                    take();
                    args.push_back(parse_rel());
                }
                expect(TokKind::rparen, "')'");
                if (static_cast<int>(args.size()) != decl->arity)
                    fail(id, "operator '" + id.text + "' expects " +
                                 std::to_string(decl->arity) + " arguments, got " +
                                 std::to_string(args.size()));
                return mk_papp(id.text, std::move(args));
            }
            if (auto ty = m_env.var_type(id.text)) return mk_pvar(id.text, *ty);
            fail(id, "undeclared variable '" + id.text + "'");
        }
        default:
            fail(t, "expected an expression, found '" + t.text + "'");
        }
    }

    ExprPtr to_expr(const PatternPtr& p, const Token& at) {
        switch (p->kind()) {
        case PatternKind::var:
            return mk_var(p->as_var().name, p->as_var().ty);
        case PatternKind::meta:
            fail(at, "term metas are not allowed here");
        case PatternKind::num:
            return mk_num(p->as_num().value, *p->as_num().ty.concrete);
        case PatternKind::app: {
            std::vector<ExprPtr> args;
            for (const auto& a : p->as_app().args) args.push_back(to_expr(a, at));
            return mk_app(p->as_app().op, std::move(args));
        }
        case PatternKind::cast: {
            const auto& c = p->as_cast();
            ExprPtr body = to_expr(c.body, at);
            Ty body_ty;
            try {
                body_ty = type_of(body, m_env);
            } catch (const Error& err) {
                fail(at, err.what());
            }
            Ty dst = *c.dst.concrete;
            if (c.src && *c.src->concrete != body_ty)
                fail(at, "cast source " + c.src->concrete->name + " does not match body type " +
                             body_ty.name);
            if (body_ty == dst) fail(at, "cast target equals the body type " + dst.name);
            if (!m_env.coercion_exists(body_ty, dst))
                fail(at, "no coercion from " + body_ty.name + " to " + dst.name);
            return mk_cast(body_ty, dst, std::move(body));
        }
        }
        fail(at, "unreachable");
    }

    std::vector<Token> m_toks;
    size_t m_pos = 0;
    const TypeEnv& m_env;
    std::string m_file;
    bool m_allow_metas;
};

inline ExprPtr parse_expr_string(const std::string& text, const TypeEnv& env,
                                 const std::string& file = "<expr>", int line = 1) {
    ExprParser p(tokenize_line(text, file, line), env, file, false);
    ExprPtr e = p.parse_expr();
    p.expect_end();
    return e;
}

inline PatternPtr parse_pattern_string(const std::string& text, const TypeEnv& env,
                                       const std::string& file = "<pattern>", int line = 1) {
    ExprParser p(tokenize_line(text, file, line), env, file, true);
    PatternPtr pat = p.parse_pattern_expr();
    p.expect_end();
    return pat;
}

// One declaration:  type T | coe A -> B | op f N (fun|rel) | var x y : T
inline void parse_decl_line(const std::string& line, TypeEnv& env, const std::string& file,
                            int lineno) {
    ExprParser p(tokenize_line(line, file, lineno), env, file, false);
    Token head = p.expect(TokKind::ident, "a declaration keyword");
    try {
        if (head.text == "type") {
            Token name = p.expect(TokKind::ident, "a type name");
            p.expect_end();
            env.declare_type(name.text);
        } else if (head.text == "coe") {
            Token src = p.expect(TokKind::ident, "a type name");
            p.expect(TokKind::arrow, "'->'");
            Token dst = p.expect(TokKind::ident, "a type name");
            p.expect_end();
            env.declare_coe(src.text, dst.text);
        } else if (head.text == "op") {
            Token name = p.expect(TokKind::ident, "an operator name");
            Token arity = p.expect(TokKind::num, "an arity");
            Token kind = p.expect(TokKind::ident, "'fun' or 'rel'");
            p.expect_end();
            if (kind.text != "fun" && kind.text != "rel")
                p.fail(kind, "expected 'fun' or 'rel', found '" + kind.text + "'");
            env.declare_op(name.text, static_cast<int>(arity.value), kind.text == "rel");
        } else if (head.text == "var") {
            std::vector<Token> names;
            while (p.peek().kind == TokKind::ident) names.push_back(p.take());
            if (names.empty()) p.fail(p.peek(), "expected a variable name");
            p.expect(TokKind::colon, "':'");
            Token ty = p.expect(TokKind::ident, "a type name");
            p.expect_end();
            for (const Token& n : names) env.declare_var(n.text, ty.text);
        } else {
            p.fail(head, "unknown declaration '" + head.text + "'");
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& err) {
        throw ParseError(file, head.line, head.col, err.what());
    }
}

struct ParsedRule {
    std::string name;
    std::optional<RuleClass> override_cls;
    std::vector<PatternPtr> conds;
    PatternPtr lhs;
    PatternPtr rhs;
    int line = 0;
};

// rule NAME [CLASS]? [cond: e (, e)*]? : PATTERN = PATTERN
// A pattern may itself be an equation, so: if another '=' follows the first
// parsed pattern-expr it separates lhs from rhs; otherwise an eq-rooted
// pattern-expr is split at its root.
inline ParsedRule parse_rule_line(const std::string& line, const TypeEnv& env,
                                  const std::string& file, int lineno) {
    ExprParser p(tokenize_line(line, file, lineno), env, file, true);
    Token head = p.expect(TokKind::ident, "'rule'");
    if (head.text != "rule") p.fail(head, "expected 'rule', found '" + head.text + "'");
    Token name = p.expect(TokKind::ident, "a rule name");

    ParsedRule out;
    out.name = name.text;
    out.line = lineno;

    while (p.peek().kind == TokKind::lbracket) {
        p.take();
        Token tag = p.expect(TokKind::ident, "'elim', 'move', 'squash', or 'cond'");
        if (auto cls = rule_class_from_name(tag.text)) {
            if (out.override_cls) p.fail(tag, "duplicate class override");
            out.override_cls = cls;
            p.expect(TokKind::rbracket, "']'");
        } else if (tag.text == "cond") {
            if (!out.conds.empty()) p.fail(tag, "duplicate cond group");
            p.expect(TokKind::colon, "':' after cond");
            out.conds.push_back(p.parse_pattern_expr());
            while (p.peek().kind == TokKind::comma) {
                p.take();
                out.conds.push_back(p.parse_pattern_expr());
            }
            p.expect(TokKind::rbracket, "']'");
        } else {
            p.fail(tag, "expected 'elim', 'move', 'squash', or 'cond'");
        }
    }

    p.expect(TokKind::colon, "':'");
    const Token& body_at = p.peek();
    PatternPtr first = p.parse_pattern_expr();
    if (p.peek().kind == TokKind::eq) {
        p.take();
        out.lhs = first;
        out.rhs = p.parse_pattern_expr();
        p.expect_end();
    } else {
        p.expect_end();
        if (first->is_app() && first->as_app().op == "eq") {
            out.lhs = first->as_app().args[0];
            out.rhs = first->as_app().args[1];
        } else {
            p.fail(body_at, "rule body must be an equation");
        }
    }
    return out;
}

namespace detail {

inline void validate_rule(const ParsedRule& r, const TypeEnv& env, const std::string& file) {
    std::set<std::string> lhs_terms, lhs_types, rhs_terms, rhs_types;
    collect_metas(r.lhs, lhs_terms, lhs_types);
    collect_metas(r.rhs, rhs_terms, rhs_types);
    for (const auto& m : rhs_terms)
        if (!lhs_terms.count(m))
            throw ParseError(file, r.line, 1,
                             "rule '" + r.name + "': meta ?" + m + " unbound on the left");
    for (const auto& m : rhs_types)
        if (!lhs_types.count(m))
            throw ParseError(file, r.line, 1,
                             "rule '" + r.name + "': type meta '" + m + " unbound on the left");
    if (pattern_is_prop(r.lhs, env) != pattern_is_prop(r.rhs, env))
        throw ParseError(file, r.line, 1,
                         "rule '" + r.name + "': sides must both be propositions or both values");
    for (const auto& c : r.conds) {
        if (!pattern_is_prop(c, env))
            throw ParseError(file, r.line, 1,
                             "rule '" + r.name + "': condition must be a proposition");
        std::set<std::string> c_terms, c_types;
        collect_metas(c, c_terms, c_types);
        for (const auto& m : c_terms)
            if (!lhs_terms.count(m))
                throw ParseError(file, r.line, 1, "rule '" + r.name + "': condition meta ?" + m +
                                                      " unbound on the left");
        for (const auto& m : c_types)
            if (!lhs_types.count(m))
                throw ParseError(file, r.line, 1, "rule '" + r.name + "': condition type meta '" +
                                                      m + " unbound on the left");
    }
}

} // namespace detail

// Classifies (or honors an override) and appends; overrides always warn.
inline RewriteRule finish_rule(const ParsedRule& parsed, const TypeEnv& env,
                               const std::string& file, std::vector<std::string>* warnings) {
    detail::validate_rule(parsed, env, file);
    RewriteRule rule;
    rule.name = parsed.name;
    rule.lhs = parsed.lhs;
    rule.rhs = parsed.rhs;
    rule.conds = parsed.conds;
    ClassifyCounts counts;
    auto computed = classify(parsed.lhs, parsed.rhs, &counts);
    if (parsed.override_cls) {
        rule.cls = *parsed.override_cls;
        rule.overridden = true;
        if (warnings) {
            std::string computed_name = computed ? rule_class_name(*computed) : "none";
            warnings->push_back("rule '" + parsed.name + "': class overridden to " +
                                rule_class_name(rule.cls) + " (computed: " + computed_name + ")");
        }
    } else {
        if (!computed) throw ClassifyError(parsed.name, counts);
        rule.cls = *computed;
    }
    return rule;
}

inline void load_rules(const std::string& text, RuleDb& db, const TypeEnv& env,
                       const std::string& file = "<rules>",
                       std::vector<std::string>* warnings = nullptr) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<Token> toks = tokenize_line(line, file, lineno);
        if (toks.front().kind == TokKind::end) continue;
        ParsedRule parsed = parse_rule_line(line, env, file, lineno);
        db.add(finish_rule(parsed, env, file, warnings));
    }
}

inline RuleDb stdlib_rule_db(const TypeEnv& env) {
    RuleDb db;
    load_rules(stdlib_prelude_text(), db, env, "<prelude>");
    return db;
}

} // namespace castnorm
