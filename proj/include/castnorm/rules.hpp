/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include "castnorm/pattern.hpp"

namespace castnorm {

enum class RuleClass { elim, move, squash };

inline const char* rule_class_name(RuleClass c) {
    switch (c) {
    case RuleClass::elim: return "elim";
    case RuleClass::move: return "move";
    case RuleClass::squash: return "squash";
    }
    return "?";
}

inline std::optional<RuleClass> rule_class_from_name(const std::string& s) {
    if (s == "elim") return RuleClass::elim;
    if (s == "move") return RuleClass::move;
    if (s == "squash") return RuleClass::squash;
    return std::nullopt;
}

struct ClassifyCounts {
    CastCounts lhs;
    CastCounts rhs;

    std::string to_string() const {
        return "lhs hc=" + std::to_string(lhs.hc) + " ic=" + std::to_string(lhs.ic) +
               ", rhs hc=" + std::to_string(rhs.hc) + " ic=" + std::to_string(rhs.ic);
    }
};

struct ClassifyError : Error {
    ClassifyError(const std::string& rule, const ClassifyCounts& counts)
        : Error("rule '" + rule + "' fits no class (" + counts.to_string() + ")"),
          rule(rule), counts(counts) {}
    std::string rule;
    ClassifyCounts counts;
};

// elim:   HC(lhs)=0 and IC(lhs)>=1
// move:   HC(lhs)=1, IC(lhs)=0, HC(rhs)=0, IC(rhs)>=1
// squash: HC(lhs)>=1, IC(lhs)=IC(rhs)=0, HC(lhs)>HC(rhs)
// Pairwise exclusive: elim needs HC(lhs)=0, the others HC(lhs)>=1; move needs
// IC(rhs)>=1, squash IC(rhs)=0.
inline std::optional<RuleClass> classify(const PatternPtr& lhs, const PatternPtr& rhs,
                                         ClassifyCounts* out = nullptr) {
    ClassifyCounts c{pattern_count_casts(lhs), pattern_count_casts(rhs)};
    if (out) *out = c;
    if (c.lhs.hc == 0 && c.lhs.ic >= 1) return RuleClass::elim;
    if (c.lhs.hc == 1 && c.lhs.ic == 0 && c.rhs.hc == 0 && c.rhs.ic >= 1) return RuleClass::move;
    if (c.lhs.hc >= 1 && c.lhs.ic == 0 && c.rhs.ic == 0 && c.lhs.hc > c.rhs.hc)
        return RuleClass::squash;
    return std::nullopt;
}

struct RewriteRule {
    std::string name;
    PatternPtr lhs;
    PatternPtr rhs;
    std::vector<PatternPtr> conds;
    RuleClass cls = RuleClass::move;
    bool overridden = false;
};

// Ordered rule set; stdlib prelude rules load before user rules, and the
// per-class views preserve declaration order.
class RuleDb {
public:
    void add(RewriteRule r) {
        if (m_index.count(r.name)) throw DuplicateName("rule '" + r.name + "' already loaded");
        m_index[r.name] = m_rules.size();
        switch (r.cls) {
        case RuleClass::elim: m_elim.push_back(m_rules.size()); break;
        case RuleClass::move: m_move.push_back(m_rules.size()); break;
        case RuleClass::squash: m_squash.push_back(m_rules.size()); break;
        }
        m_rules.push_back(std::move(r));
    }

    const std::vector<RewriteRule>& rules() const { return m_rules; }

    std::vector<const RewriteRule*> by_class(RuleClass c) const {
        const std::vector<size_t>* idx = nullptr;
        switch (c) {
        case RuleClass::elim: idx = &m_elim; break;
        case RuleClass::move: idx = &m_move; break;
        case RuleClass::squash: idx = &m_squash; break;
        }
        std::vector<const RewriteRule*> out;
        out.reserve(idx->size());
        for (size_t i : *idx) out.push_back(&m_rules[i]);
        return out;
    }

    const RewriteRule* find(const std::string& name) const {
        auto it = m_index.find(name);
        if (it == m_index.end()) return nullptr;
        return &m_rules[it->second];
    }

private:
    std::vector<RewriteRule> m_rules;
    std::map<std::string, size_t> m_index;
    std::vector<size_t> m_elim, m_move, m_squash;
};

// Shipped rule set, mirrored verbatim in prelude.rules at the repo root.
inline const char* stdlib_prelude_text() {
    return R"(# Built-in coercion lemmas, loaded before any user rules.

# squash
rule cast_cast : cast('T, cast('S, ?a)) = cast('T, ?a)
rule cast_zero : cast('T, 0:nat) = 0:'T
rule cast_one : cast('T, 1:nat) = 1:'T

# move
rule cast_add : cast('T, ?a + ?b) = cast('T, ?a) + cast('T, ?b)
rule cast_sub [cond: ?b <= ?a] : cast(nat -> 'T, ?a - ?b) = cast(nat -> 'T, ?a) - cast(nat -> 'T, ?b)
rule cast_sub_int : cast(int -> 'T, ?a - ?b) = cast(int -> 'T, ?a) - cast(int -> 'T, ?b)
rule cast_mul : cast('T, ?a * ?b) = cast('T, ?a) * cast('T, ?b)
rule cast_neg : cast(int -> 'T, -?a) = -cast(int -> 'T, ?a)
rule cast_neg_rat : cast(rat -> 'T, -?a) = -cast(rat -> 'T, ?a)

# elim
rule cast_lt : cast('T, ?a) < cast('T, ?b) = ?a < ?b
rule cast_le : cast('T, ?a) <= cast('T, ?b) = ?a <= ?b
rule cast_eq : cast('T, ?a) = cast('T, ?b) = ?a = ?b
rule cast_ne : cast('T, ?a) != cast('T, ?b) = ?a != ?b
rule cast_dvd : cast(nat -> int, ?a) dvd cast(nat -> int, ?b) = ?a dvd ?b
)";
}

} // namespace castnorm
