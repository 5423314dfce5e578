/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include "castnorm/parser.hpp"

namespace castnorm {

// A parsed problem file: declarations, optional inline rules (kept verbatim
// for later loading into a RuleDb), context hypotheses, and goals.
struct Problem {
    TypeEnv env;
    Context ctx;
    std::vector<std::pair<std::optional<std::string>, ExprPtr>> goals;
    std::vector<std::pair<int, std::string>> rule_lines;
};

// Sections appear in the fixed order [decls], [rules], [context], [goals];
// each is optional. '#' starts a comment. Context hypotheses are separated by
// semicolons or newlines and must be propositions. A goal line may carry a
// leading 'name:' label.
inline Problem parse_problem(const std::string& text, const std::string& filename = "<problem>") {
    Problem prob;
    enum Section { none = 0, decls, rules, context, goals };
    Section cur = none;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::set<std::string> goal_names;

    while (std::getline(in, line)) {
        ++lineno;
        std::vector<Token> toks = tokenize_line(line, filename, lineno);
        if (toks.front().kind == TokKind::end) continue;

        if (toks[0].kind == TokKind::lbracket) {
            if (toks.size() != 4 || toks[1].kind != TokKind::ident ||
                toks[2].kind != TokKind::rbracket)
                throw ParseError(filename, lineno, toks[0].col, "malformed section header");
            const std::string& name = toks[1].text;
            Section next;
            if (name == "decls") {
                next = decls;
            } else if (name == "rules") {
                next = rules;
            } else if (name == "context") {
                next = context;
            } else if (name == "goals") {
                next = goals;
            } else {
                throw ParseError(filename, lineno, toks[1].col,
                                 "unknown section '[" + name + "]'");
            }
            if (next <= cur)
                throw ParseError(filename, lineno, toks[1].col,
                                 "section '[" + name +
                                     "]' out of order (expected decls, rules, context, goals)");
            cur = next;
            continue;
        }

        switch (cur) {
            case none:
                throw ParseError(filename, lineno, toks[0].col,
                                 "content before the first section header");
            case decls: parse_decl_line(line, prob.env, filename, lineno); break;
            case rules: prob.rule_lines.emplace_back(lineno, line); break;
            case context: {
                size_t start = 0;
                for (size_t i = 0; i < toks.size(); ++i) {
                    if (toks[i].kind != TokKind::semicolon && toks[i].kind != TokKind::end)
                        continue;
                    if (i > start) {
                        std::vector<Token> seg(toks.begin() + static_cast<long>(start),
                                               toks.begin() + static_cast<long>(i));
                        Token stop = toks[i];
                        stop.kind = TokKind::end;
                        stop.text.clear();
                        seg.push_back(std::move(stop));
                        Token head = seg.front();
                        ExprParser p(std::move(seg), prob.env, filename, false);
                        ExprPtr h = p.parse_expr();
                        p.expect_end();
                        if (!type_of(h, prob.env).is_prop())
                            throw ParseError(filename, head.line, head.col,
                                             "context hypothesis must be a proposition");
                        prob.ctx.hyps.push_back(std::move(h));
                    }
                    start = i + 1;
                }
                break;
            }
            case goals: {
                std::optional<std::string> name;
                size_t start = 0;
                if (toks.size() >= 2 && toks[0].kind == TokKind::ident &&
                    toks[1].kind == TokKind::colon) {
                    name = toks[0].text;
                    start = 2;
                    if (!goal_names.insert(*name).second)
                        throw ParseError(filename, lineno, toks[0].col,
                                         "duplicate goal name '" + *name + "'");
                }
                std::vector<Token> seg(toks.begin() + static_cast<long>(start), toks.end());
                ExprParser p(std::move(seg), prob.env, filename, false);
                ExprPtr g = p.parse_expr();
                p.expect_end();
                prob.goals.emplace_back(std::move(name), std::move(g));
                break;
            }
        }
    }
    return prob;
}

} // namespace castnorm
