/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "castnorm/castnorm.hpp"

namespace {

using namespace castnorm;

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_fuel = 2;
constexpr int exit_not_equiv = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string goal_label(const Problem& prob, size_t i) {
    if (prob.goals[i].first) return *prob.goals[i].first;
    return "goal " + std::to_string(i + 1);
}

std::string path_str(const Path& p) {
    std::string out = "[";
    for (size_t i = 0; i < p.size(); ++i) out += (i ? "," : "") + std::to_string(p[i]);
    return out + "]";
}

void print_steps(const Trace& t) {
    for (const auto& s : t.steps) {
        std::cout << "  [pass " << s.pass << "] " << s.rule << " " << dir_name(s.dir) << " at "
                  << path_str(s.path) << ": " << pretty(s.before) << " ~> " << pretty(s.after);
        if (!s.note.empty()) std::cout << "  (" << s.note << ")";
        std::cout << "\n";
    }
}

struct ProblemSetup {
    Problem prob;
    RuleDb db;
};

ProblemSetup load_problem(const std::string& file, const std::vector<std::string>& rule_files) {
    ProblemSetup setup;
    setup.prob = parse_problem(read_file(file), file);
    setup.db = stdlib_rule_db(setup.prob.env);
    std::vector<std::string> warnings;
    for (const auto& rf : rule_files)
        load_rules(read_file(rf), setup.db, setup.prob.env, rf, &warnings);
    for (const auto& [lineno, text] : setup.prob.rule_lines) {
        ParsedRule parsed = parse_rule_line(text, setup.prob.env, file, lineno);
        setup.db.add(finish_rule(parsed, setup.prob.env, file, &warnings));
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return setup;
}

bool contains_abstract(const ExprPtr& e) {
    switch (e->kind()) {
        case ExprKind::var: return e->as_var().ty.kind == TyKind::user_declared;
        case ExprKind::num: return e->as_num().ty.kind == TyKind::user_declared;
        case ExprKind::app:
            for (const auto& a : e->as_app().args)
                if (contains_abstract(a)) return true;
            return false;
        case ExprKind::cast: {
            const auto& c = e->as_cast();
            return c.src.kind == TyKind::user_declared || c.dst.kind == TyKind::user_declared ||
                   contains_abstract(c.body);
        }
    }
    return false;
}

int run_normalize(const std::string& file, const std::vector<std::string>& rule_files,
                  long long fuel, bool trace, bool json, bool push_mode) {
    ProblemSetup setup = load_problem(file, rule_files);
    NormalizeOptions opts;
    opts.fuel = fuel;
    bool exhausted = false;
    nlohmann::json traces = nlohmann::json::array();
    for (size_t i = 0; i < setup.prob.goals.size(); ++i) {
        const ExprPtr& goal = setup.prob.goals[i].second;
        auto [out, tr] = push_mode
                             ? push_cast(goal, setup.db, setup.prob.ctx, setup.prob.env, opts)
                             : normalize(goal, setup.db, setup.prob.ctx, setup.prob.env, opts);
        exhausted = exhausted || tr.fuel_exhausted;
        if (json) {
            traces.push_back(trace_to_json(tr));
            continue;
        }
        if (setup.prob.goals[i].first)
            std::cout << *setup.prob.goals[i].first << ": " << pretty(out) << "\n";
        else
            std::cout << pretty(out) << "\n";
        if (trace) print_steps(tr);
    }
    if (json) std::cout << traces.dump(2) << "\n";
    if (exhausted) {
        std::cerr << "error: rewrite budget exhausted; output is partial\n";
        return exit_fuel;
    }
    return exit_ok;
}

int run_equiv(const std::string& file, const std::vector<std::string>& rule_files, long long fuel,
              bool from_context) {
    ProblemSetup setup = load_problem(file, rule_files);
    NormalizeOptions opts;
    opts.fuel = fuel;
    if (from_context) {
        bool all_matched = true;
        for (size_t i = 0; i < setup.prob.goals.size(); ++i) {
            auto idx = assumption_mod_cast(setup.prob.goals[i].second, setup.prob.ctx, setup.db,
                                           setup.prob.env, opts);
            if (idx)
                std::cout << goal_label(setup.prob, i) << ": matches hypothesis " << *idx << "\n";
            else
                std::cout << goal_label(setup.prob, i) << ": no matching hypothesis\n";
            all_matched = all_matched && idx.has_value();
        }
        return all_matched ? exit_ok : exit_not_equiv;
    }
    if (setup.prob.goals.size() != 2)
        throw Error("equiv requires exactly two goals, found " +
                    std::to_string(setup.prob.goals.size()));
    auto [na, ta] =
        normalize(setup.prob.goals[0].second, setup.db, setup.prob.ctx, setup.prob.env, opts);
    auto [nb, tb] =
        normalize(setup.prob.goals[1].second, setup.db, setup.prob.ctx, setup.prob.env, opts);
    if (ta.fuel_exhausted || tb.fuel_exhausted) {
        std::cerr << "error: rewrite budget exhausted; verdict unavailable\n";
        return exit_fuel;
    }
    if (equal(na, nb)) {
        std::cout << "equivalent: " << pretty(na) << "\n";
        return exit_ok;
    }
    std::cout << "not equivalent:\n  " << goal_label(setup.prob, 0) << " normalizes to "
              << pretty(na) << "\n  " << goal_label(setup.prob, 1) << " normalizes to "
              << pretty(nb) << "\n";
    return exit_not_equiv;
}

int run_classify(const std::string& file) {
    std::istringstream in(read_file(file));
    std::string line;
    int lineno = 0;
    int errors = 0;
    TypeEnv env;
    RuleDb db;
    std::vector<std::string> warnings;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<Token> toks = tokenize_line(line, file, lineno);
        if (toks.front().kind == TokKind::end) continue;
        try {
            warnings.clear();
            ParsedRule parsed = parse_rule_line(line, env, file, lineno);
            RewriteRule rule = finish_rule(parsed, env, file, &warnings);
            ClassifyCounts counts;
            classify(rule.lhs, rule.rhs, &counts);
            std::cout << rule.name << " -> " << rule_class_name(rule.cls)
                      << (rule.overridden ? " (override)" : "") << "  [" << counts.to_string()
                      << "]\n";
            db.add(std::move(rule));
        } catch (const Error& err) {
            std::cerr << err.what() << "\n";
            ++errors;
        }
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    }
    return errors == 0 ? exit_ok : exit_error;
}

bool looks_like_rules(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos || line[i] == '#') continue;
        return line.compare(i, 5, "rule ") == 0 || line.compare(i, 4, "rule") == 0;
    }
    return false;
}

int run_check_rules(const std::string& file, const std::string& text, int range) {
    TypeEnv env;
    RuleDb db;
    std::vector<std::string> warnings;
    load_rules(text, db, env, file, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    bool all_sound = true;
    for (const RewriteRule& r : db.rules()) {
        SoundVerdict sv = check_rule_sound(r, range, env);
        if (sv.sound) {
            std::cout << r.name << ": sound (" << sv.instances << " instance"
                      << (sv.instances == 1 ? "" : "s") << ")";
            for (const auto& n : sv.notes) std::cout << " [" << n << "]";
            std::cout << "\n";
        } else {
            all_sound = false;
            std::cout << r.name << ": unsound at " << sv.cex_instance << "\n  counterexample: "
                      << sv.cex->describe() << "\n";
        }
        for (const auto& w : sv.warnings) std::cerr << "warning: " << r.name << ": " << w << "\n";
    }
    return all_sound ? exit_ok : exit_not_equiv;
}

int run_check_problem(const std::string& file, const std::vector<std::string>& rule_files,
                      long long fuel, int range) {
    ProblemSetup setup = load_problem(file, rule_files);
    NormalizeOptions opts;
    opts.fuel = fuel;
    bool exhausted = false;
    bool any_cex = false;
    for (size_t i = 0; i < setup.prob.goals.size(); ++i) {
        const ExprPtr& goal = setup.prob.goals[i].second;
        auto [out, tr] = normalize(goal, setup.db, setup.prob.ctx, setup.prob.env, opts);
        exhausted = exhausted || tr.fuel_exhausted;

        ExprPtr ga = goal;
        ExprPtr oa = out;
        Context cctx = setup.prob.ctx;
        TypeEnv genv = setup.prob.env;
        bool abs = contains_abstract(goal) || contains_abstract(out);
        for (const auto& h : cctx.hyps) abs = abs || contains_abstract(h);
        if (abs) {
            std::cout << goal_label(setup.prob, i)
                      << ": abstract types instantiated at rat for evaluation\n";
            ga = abstract_instantiate(goal, ty_rat(), genv, &genv);
            oa = abstract_instantiate(out, ty_rat(), genv, &genv);
            for (auto& h : cctx.hyps) h = abstract_instantiate(h, ty_rat(), genv, &genv);
        }
        EquivVerdict v = check_equiv_exhaustive(ga, oa, cctx, range, genv);
        switch (v.kind) {
            case EquivVerdict::Kind::equivalent:
                std::cout << goal_label(setup.prob, i) << ": normal form "
                          << pretty(out) << " verified over range " << range << "\n";
                break;
            case EquivVerdict::Kind::counterexample:
                any_cex = true;
                std::cout << goal_label(setup.prob, i)
                          << ": NOT equivalent to its normal form\n  counterexample: "
                          << v.cex->describe() << "\n";
                break;
            case EquivVerdict::Kind::skipped:
                std::cout << goal_label(setup.prob, i) << ": skipped (" << v.warning << ")\n";
                break;
        }
    }
    if (exhausted) {
        std::cerr << "error: rewrite budget exhausted; verdicts are partial\n";
        return exit_fuel;
    }
    return any_cex ? exit_not_equiv : exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"castnorm: a coercion-normalization engine for typed expressions"};
    app.require_subcommand(1);

    std::string file;
    std::vector<std::string> rule_files;
    long long fuel = 10000;
    int range = 4;
    bool trace = false, json = false, from_context = false;

    auto add_common = [&](CLI::App* cmd, bool takes_rules) {
        cmd->add_option("file", file, "input file")->required();
        if (takes_rules)
            cmd->add_option("--rules", rule_files, "extra rule files, loaded after the prelude");
        cmd->add_option("--fuel", fuel, "rewrite budget (default 10000)");
    };

    CLI::App* norm = app.add_subcommand("normalize", "normalize every goal in a problem file");
    add_common(norm, true);
    norm->add_flag("--trace", trace, "print each rewrite step");
    norm->add_flag("--json", json, "emit replayable traces as a JSON array");

    CLI::App* push = app.add_subcommand("push", "push casts toward the leaves of every goal");
    add_common(push, true);
    push->add_flag("--trace", trace, "print each rewrite step");
    push->add_flag("--json", json, "emit replayable traces as a JSON array");

    CLI::App* equiv = app.add_subcommand("equiv", "decide mod-cast equivalence of two goals");
    add_common(equiv, true);
    equiv->add_flag("--from-context", from_context,
                    "match each goal against the context hypotheses instead");

    CLI::App* classify = app.add_subcommand("classify", "classify every rule in a rule file");
    classify->add_option("file", file, "rule file")->required();

    CLI::App* check = app.add_subcommand("check",
                                         "verify rules or normalized goals against the "
                                         "exhaustive semantic oracle");
    add_common(check, true);
    check->add_option("--range", range, "enumeration bound per variable (default 4)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (norm->parsed()) return run_normalize(file, rule_files, fuel, trace, json, false);
        if (push->parsed()) return run_normalize(file, rule_files, fuel, trace, json, true);
        if (equiv->parsed()) return run_equiv(file, rule_files, fuel, from_context);
        if (classify->parsed()) return run_classify(file);
        if (check->parsed()) {
            std::string text = read_file(file);
            if (looks_like_rules(text)) return run_check_rules(file, text, range);
            return run_check_problem(file, rule_files, fuel, range);
        }
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_error;
    }
    return exit_error;
}
