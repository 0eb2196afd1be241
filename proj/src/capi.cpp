#include "attackgraph.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "engine.hpp"
#include "graph.hpp"
#include "ingest.hpp"
#include "parser.hpp"
#include "ruleset.hpp"

struct ag_program {
    ag::program value;
};
struct ag_ruleset {
    ag::rule_set value;
};
struct ag_ledger {
    ag::derivation_ledger value;
};
struct ag_graph {
    ag::attack_graph value;
};

namespace {

char* dup_string(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (out) std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

void set_error(char** slot, const std::string& message) {
    if (slot) *slot = dup_string(message);
}

// Every entry point funnels exceptions into status codes here; the library
// never lets one escape across the C boundary.
template <typename Fn>
ag_status guarded(char** error, Fn&& fn) {
    if (error) *error = nullptr;
    try {
        return fn();
    } catch (const ag::parse_error& e) {
        set_error(error, e.what());
        return AG_ERR_PARSE;
    } catch (const ag::evaluation_limit_error& e) {
        set_error(error, e.what());
        return AG_ERR_LIMIT;
    } catch (const ag::goal_not_derivable_error& e) {
        set_error(error, e.what());
        return AG_ERR_GOAL_NOT_DERIVABLE;
    } catch (const ag::ingest_error& e) {
        set_error(error, e.what());
        return AG_ERR_VALIDATION;
    } catch (const std::exception& e) {
        set_error(error, e.what());
        return AG_ERR_INVALID_ARGUMENT;
    }
}

std::string read_file(const char* path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(std::string("cannot open file: ") + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

extern "C" {

void ag_string_free(char* text) { std::free(text); }

ag_status ag_program_parse(const char* text, ag_program** out, char** error) {
    if (!text || !out) return AG_ERR_INVALID_ARGUMENT;
    return guarded(error, [&] {
        *out = new ag_program{ag::parse_program(text)};
        return AG_OK;
    });
}

ag_status ag_program_parse_file(const char* path, ag_program** out, char** error) {
    if (!path || !out) return AG_ERR_INVALID_ARGUMENT;
    return guarded(error, [&]() -> ag_status {
        std::string text;
        try {
            text = read_file(path);
        } catch (const std::exception& e) {
            set_error(error, e.what());
            return AG_ERR_IO;
        }
        *out = new ag_program{ag::parse_program(text)};
        return AG_OK;
    });
}

ag_program* ag_program_new(void) { return new ag_program{}; }

void ag_program_free(ag_program* prog) { delete prog; }

ag_status ag_program_merge(ag_program* dst, const ag_program* src) {
    if (!dst || !src) return AG_ERR_INVALID_ARGUMENT;
    dst->value.append(src->value);
    return AG_OK;
}

size_t ag_program_clause_count(const ag_program* prog) {
    return prog ? prog->value.clauses.size() : 0;
}

size_t ag_program_goal_count(const ag_program* prog) {
    return prog ? prog->value.goals.size() : 0;
}

char* ag_program_goal(const ag_program* prog, size_t index) {
    if (!prog || index >= prog->value.goals.size()) return nullptr;
    return dup_string(prog->value.goals[index].to_string());
}

char* ag_program_print(const ag_program* prog) {
    return prog ? dup_string(prog->value.to_string()) : nullptr;
}

ag_ruleset* ag_ruleset_extended(void) { return new ag_ruleset{ag::rule_set::extended()}; }

ag_ruleset* ag_ruleset_legacy(void) { return new ag_ruleset{ag::rule_set::legacy()}; }

ag_status ag_ruleset_load(const char* path, ag_ruleset** out, char** error) {
    if (!path || !out) return AG_ERR_INVALID_ARGUMENT;
    return guarded(error, [&]() -> ag_status {
        try {
            *out = new ag_ruleset{ag::rule_set::load_file(path)};
        } catch (const ag::parse_error&) {
            throw;
        } catch (const std::exception& e) {
            set_error(error, e.what());
            return AG_ERR_IO;
        }
        return AG_OK;
    });
}

ag_status ag_ruleset_parse(const char* name, const char* text, ag_ruleset** out,
                           char** error) {
    if (!name || !text || !out) return AG_ERR_INVALID_ARGUMENT;
    return guarded(error, [&] {
        *out = new ag_ruleset{ag::rule_set::from_program(name, ag::parse_program(text))};
        return AG_OK;
    });
}

ag_status ag_ruleset_merge(const ag_ruleset* a, const ag_ruleset* b, ag_ruleset** out) {
    if (!a || !b || !out) return AG_ERR_INVALID_ARGUMENT;
    *out = new ag_ruleset{a->value.merged_with(b->value)};
    return AG_OK;
}

size_t ag_ruleset_rule_count(const ag_ruleset* rules) {
    return rules ? rules->value.rule_count() : 0;
}

void ag_ruleset_free(ag_ruleset* rules) { delete rules; }

ag_status ag_validate(const ag_program* facts, const ag_ruleset* rules, char** report,
                      size_t* error_count) {
    if (!facts || !rules) return AG_ERR_INVALID_ARGUMENT;
    ag::validation_report result = ag::validate(facts->value, rules->value);
    if (report) *report = dup_string(result.to_string());
    if (error_count) *error_count = result.errors.size();
    return AG_OK;
}

ag_status ag_evaluate(const ag_program* facts, const ag_ruleset* rules,
                      size_t max_derived_facts, ag_ledger** out, char** error) {
    if (!facts || !rules || !out) return AG_ERR_INVALID_ARGUMENT;
    return guarded(error, [&] {
        ag::program merged;
        merged.clauses = rules->value.clauses;
        merged.append(facts->value);
        ag::evaluation_options options;
        if (max_derived_facts > 0) options.max_derived_facts = max_derived_facts;
        *out = new ag_ledger{ag::evaluate(merged, options)};
        return AG_OK;
    });
}

void ag_ledger_free(ag_ledger* ledger) { delete ledger; }

size_t ag_ledger_fact_count(const ag_ledger* ledger) {
    return ledger ? ledger->value.fact_count() : 0;
}

size_t ag_ledger_derived_count(const ag_ledger* ledger) {
    return ledger ? ledger->value.derived_count() : 0;
}

char* ag_ledger_dump(const ag_ledger* ledger) {
    return ledger ? dup_string(ledger->value.dump()) : nullptr;
}

int ag_ledger_contains(const ag_ledger* ledger, const char* fact) {
    if (!ledger || !fact) return 0;
    try {
        return ledger->value.find(ag::parse_atom(fact)) >= 0 ? 1 : 0;
    } catch (const std::exception&) {
        return 0;
    }
}

ag_status ag_query(const ag_ledger* ledger, const char* goal, char** results, char** error) {
    if (!ledger || !goal || !results) return AG_ERR_INVALID_ARGUMENT;
    return guarded(error, [&] {
        auto matches = ag::query(ledger->value, ag::parse_atom(goal));
        std::string out;
        for (const auto& [fact, bound] : matches)
            out += fact.to_string() + ". " + bound.to_string() + "\n";
        *results = dup_string(out);
        return AG_OK;
    });
}

ag_status ag_graph_build(const ag_ledger* ledger, const char* goal, ag_graph** out,
                         char** error) {
    if (!ledger || !goal || !out) return AG_ERR_INVALID_ARGUMENT;
    return guarded(error, [&] {
        *out = new ag_graph{ag::build_graph(ledger->value, ag::parse_atom(goal))};
        return AG_OK;
    });
}

void ag_graph_free(ag_graph* graph) { delete graph; }

size_t ag_graph_node_count(const ag_graph* graph) {
    return graph ? graph->value.nodes.size() : 0;
}

size_t ag_graph_edge_count(const ag_graph* graph) {
    return graph ? graph->value.edges.size() : 0;
}

char* ag_graph_to_dot(const ag_graph* graph) {
    return graph ? dup_string(ag::to_dot(graph->value)) : nullptr;
}

char* ag_graph_to_json(const ag_graph* graph) {
    return graph ? dup_string(ag::to_json(graph->value)) : nullptr;
}

ag_status ag_graph_from_json(const char* text, ag_graph** out, char** error) {
    if (!text || !out) return AG_ERR_INVALID_ARGUMENT;
    return guarded(error, [&] {
        *out = new ag_graph{ag::graph_from_json(text)};
        return AG_OK;
    });
}

int ag_graph_same_shape(const ag_graph* a, const ag_graph* b) {
    if (!a || !b) return 0;
    return ag::same_shape(a->value, b->value) ? 1 : 0;
}

ag_status ag_ingest(const char* inventory_json, ag_program** out, char** warnings,
                    char** error) {
    if (!inventory_json || !out) return AG_ERR_INVALID_ARGUMENT;
    return guarded(error, [&] {
        ag::ingest_result result = ag::ingest_inventory(inventory_json);
        if (warnings) {
            std::string text;
            for (const auto& w : result.warnings) text += w + "\n";
            *warnings = dup_string(text);
        }
        *out = new ag_program{std::move(result.facts)};
        return AG_OK;
    });
}

} // extern "C"
