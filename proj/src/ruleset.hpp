#pragma once

#include <map>
#include <string>
#include <vector>

#include "datalog.hpp"

namespace ag {

/// A named bundle of interaction rules plus the predicate schema the rules
/// are written against. Rule sets are immutable constants once built.
struct rule_set {
    std::string name;
    std::vector<clause> clauses;
    std::map<predicate_key, predicate_role> schema;

    /// Builds a set from a parsed source unit: primitive()/derived()
    /// declarations feed the schema (both -> either), and undeclared rule
    /// heads are registered as derived.
    static rule_set from_program(std::string name, const program& source);

    /// The shipped network-security model (rules/extended.dl).
    static const rule_set& extended();

    /// The minimal classic rules for service-exploit chains (rules/legacy.dl).
    static const rule_set& legacy();

    static rule_set load_file(const std::string& path);

    /// Union of clauses and schemas; conflicting roles widen to `either`.
    rule_set merged_with(const rule_set& other) const;

    bool declares(const predicate_key& key) const { return schema.count(key) > 0; }
    std::size_t rule_count() const;
};

enum class issue_kind {
    unknown_predicate,
    arity_mismatch,
    unbound_head_variable,
    unused_input_fact,
    unmatched_input_predicate,
    non_ground_fact,
};

struct validation_issue {
    issue_kind kind;
    predicate_key predicate;
    std::string message;
};

struct validation_report {
    std::vector<validation_issue> errors;
    std::vector<validation_issue> warnings;

    bool ok() const { return errors.empty(); }
    std::string to_string() const;
};

/// Static checks of a fact base against a rule set. Unknown predicates and
/// arity mismatches are errors; style problems (unbound head variables,
/// facts no rule consumes, input predicates no rule matches) are warnings.
/// Rules inside the fact program are treated as scenario-local extensions:
/// their heads extend the known-predicate set.
validation_report validate(const program& facts, const rule_set& rules);

} // namespace ag
