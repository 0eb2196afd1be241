#include "ruleset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "embedded.hpp"
#include "parser.hpp"

namespace ag {

namespace {

void widen(std::map<predicate_key, predicate_role>& schema, const predicate_key& key,
           predicate_role role) {
    auto [it, inserted] = schema.emplace(key, role);
    if (!inserted && it->second != role) it->second = predicate_role::either;
}

} // namespace

rule_set rule_set::from_program(std::string name, const program& source) {
    rule_set out;
    out.name = std::move(name);
    out.clauses = source.clauses;
    for (const declaration& d : source.declarations)
        widen(out.schema, key_of(d.signature), d.role);
    for (const clause& c : out.clauses)
        if (!c.is_fact() && !out.schema.count(key_of(c.head)))
            out.schema.emplace(key_of(c.head), predicate_role::derived);
    return out;
}

const rule_set& rule_set::extended() {
    static const rule_set instance =
        from_program("extended", parse_program(embedded::extended_rules()));
    return instance;
}

const rule_set& rule_set::legacy() {
    static const rule_set instance =
        from_program("legacy", parse_program(embedded::legacy_rules()));
    return instance;
}

rule_set rule_set::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open rule file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_program(path, parse_program(buffer.str()));
}

rule_set rule_set::merged_with(const rule_set& other) const {
    rule_set out = *this;
    out.name = name + "+" + other.name;
    for (const clause& c : other.clauses) {
        if (std::find(out.clauses.begin(), out.clauses.end(), c) == out.clauses.end())
            out.clauses.push_back(c);
    }
    for (const auto& [key, role] : other.schema) widen(out.schema, key, role);
    return out;
}

std::size_t rule_set::rule_count() const {
    return static_cast<std::size_t>(
        std::count_if(clauses.begin(), clauses.end(),
                      [](const clause& c) { return !c.is_fact(); }));
}

std::string validation_report::to_string() const {
    std::string out;
    for (const auto& issue : errors) out += "error: " + issue.message + "\n";
    for (const auto& issue : warnings) out += "warning: " + issue.message + "\n";
    return out;
}

validation_report validate(const program& facts, const rule_set& rules) {
    validation_report report;

    std::set<predicate_key> known;
    std::set<std::string> known_names;
    for (const auto& [key, role] : rules.schema) {
        known.insert(key);
        known_names.insert(key.name);
    }
    for (const clause& c : facts.clauses) {
        if (c.is_fact()) continue;
        // Scenario-local rules extend the schema with their heads and with
        // the inputs their bodies consume.
        known.insert(key_of(c.head));
        known_names.insert(c.head.predicate);
        for (const atom& b : c.body) {
            known.insert(key_of(b));
            known_names.insert(b.predicate);
        }
    }
    for (const declaration& d : facts.declarations) {
        known.insert(key_of(d.signature));
        known_names.insert(d.signature.predicate);
    }

    std::set<predicate_key> consumed;
    for (const clause& c : rules.clauses)
        for (const atom& b : c.body) consumed.insert(key_of(b));
    for (const clause& c : facts.clauses)
        for (const atom& b : c.body) consumed.insert(key_of(b));
    for (const atom& g : facts.goals) consumed.insert(key_of(g));

    std::set<std::string> reported_facts;
    for (const clause& c : facts.clauses) {
        const predicate_key key = key_of(c.head);
        if (c.is_fact()) {
            if (!known.count(key)) {
                std::string signature = key.name + "/" + std::to_string(key.arity);
                if (known_names.count(key.name))
                    report.errors.push_back({issue_kind::arity_mismatch, key,
                                             "arity mismatch: " + signature +
                                                 " is not declared (fact " +
                                                 c.head.to_string() + ")"});
                else
                    report.errors.push_back({issue_kind::unknown_predicate, key,
                                             "unknown predicate: " + signature + " (fact " +
                                                 c.head.to_string() + ")"});
            } else if (!consumed.count(key) &&
                       reported_facts.insert(key.name + "/" + std::to_string(key.arity))
                           .second) {
                report.warnings.push_back({issue_kind::unused_input_fact, key,
                                           "no rule body or goal matches facts of " + key.name +
                                               "/" + std::to_string(key.arity)});
            }
            if (!c.head.ground_or_wildcard())
                report.warnings.push_back({issue_kind::non_ground_fact, key,
                                           "fact " + c.head.to_string() +
                                               " has named variables; they match as wildcards"});
        }
    }

    auto head_warnings = [&report](const clause& c, const std::string& origin) {
        if (c.is_fact()) return;
        std::set<std::string> body_vars;
        for (const atom& b : c.body)
            for (const term& t : b.args)
                if (t.kind == term_kind::variable) body_vars.insert(t.text);
        for (const term& t : c.head.args) {
            if (t.kind == term_kind::variable && !body_vars.count(t.text))
                report.warnings.push_back(
                    {issue_kind::unbound_head_variable, key_of(c.head),
                     origin + " rule for " + c.head.predicate + ": head variable " + t.text +
                         " is not bound by the body and derives as a wildcard"});
        }
    };
    for (const clause& c : rules.clauses) head_warnings(c, rules.name);
    for (const clause& c : facts.clauses) head_warnings(c, "local");

    for (const auto& [key, role] : rules.schema) {
        if (role != predicate_role::input_fact) continue;
        if (!consumed.count(key))
            report.warnings.push_back({issue_kind::unmatched_input_predicate, key,
                                       "input predicate " + key.name + "/" +
                                           std::to_string(key.arity) +
                                           " is never matched by any rule body"});
    }

    return report;
}

} // namespace ag
