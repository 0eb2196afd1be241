/*
 * attackgraph.h - C interface to the attack-graph engine.
 *
 * The library evaluates Datalog security models over a fact base and builds
 * logical attack graphs for attacker goals. All objects are opaque handles
 * owned by the caller and released with the matching *_free function; every
 * fallible call returns an ag_status and, where a message pointer is given,
 * a heap string to be released with ag_string_free.
 */
#ifndef ATTACKGRAPH_H
#define ATTACKGRAPH_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ag_program ag_program;   /* parsed clauses, goals, declarations */
typedef struct ag_ruleset ag_ruleset;   /* named rule bundle plus schema */
typedef struct ag_ledger ag_ledger;     /* least model with provenance */
typedef struct ag_graph ag_graph;       /* logical attack graph */

typedef enum ag_status {
    AG_OK = 0,
    AG_ERR_PARSE = 1,
    AG_ERR_VALIDATION = 2,
    AG_ERR_GOAL_NOT_DERIVABLE = 3,
    AG_ERR_LIMIT = 4,
    AG_ERR_IO = 5,
    AG_ERR_INVALID_ARGUMENT = 6
} ag_status;

void ag_string_free(char* text);

/* ---- programs (fact bases and rule files) ---- */

ag_status ag_program_parse(const char* text, ag_program** out, char** error);
ag_status ag_program_parse_file(const char* path, ag_program** out, char** error);
ag_program* ag_program_new(void);
void ag_program_free(ag_program* prog);

/* Appends the clauses, goals, and declarations of src to dst. */
ag_status ag_program_merge(ag_program* dst, const ag_program* src);

size_t ag_program_clause_count(const ag_program* prog);
size_t ag_program_goal_count(const ag_program* prog);
/* Printed form of goal i, or NULL when out of range. */
char* ag_program_goal(const ag_program* prog, size_t index);
/* Canonical pretty-printed source. */
char* ag_program_print(const ag_program* prog);

/* ---- rule sets ---- */

/* The shipped extended network model / the minimal classic rules. */
ag_ruleset* ag_ruleset_extended(void);
ag_ruleset* ag_ruleset_legacy(void);
ag_status ag_ruleset_load(const char* path, ag_ruleset** out, char** error);
/* Builds a rule set from clause text; name appears in reports. */
ag_status ag_ruleset_parse(const char* name, const char* text, ag_ruleset** out, char** error);
ag_status ag_ruleset_merge(const ag_ruleset* a, const ag_ruleset* b, ag_ruleset** out);
size_t ag_ruleset_rule_count(const ag_ruleset* rules);
void ag_ruleset_free(ag_ruleset* rules);

/* Static checks of a fact base against a rule set. Fills the report text
 * (one line per finding) and the error count; returns AG_OK even when the
 * report contains errors. */
ag_status ag_validate(const ag_program* facts, const ag_ruleset* rules, char** report,
                      size_t* error_count);

/* ---- evaluation ---- */

/* Computes the least model of facts + rules. max_derived_facts of 0 selects
 * the default cap (1,000,000); exceeding the cap yields AG_ERR_LIMIT. */
ag_status ag_evaluate(const ag_program* facts, const ag_ruleset* rules,
                      size_t max_derived_facts, ag_ledger** out, char** error);
void ag_ledger_free(ag_ledger* ledger);

size_t ag_ledger_fact_count(const ag_ledger* ledger);
/* Facts not given as input (round > 0). */
size_t ag_ledger_derived_count(const ag_ledger* ledger);
/* All facts, one "fact." line each, sorted lexicographically. */
char* ag_ledger_dump(const ag_ledger* ledger);
/* 1 when the exact fact is present. */
int ag_ledger_contains(const ag_ledger* ledger, const char* fact);
/* Facts unifiable with the goal pattern: "fact. {Var -> value, ...}" lines. */
ag_status ag_query(const ag_ledger* ledger, const char* goal, char** results, char** error);

/* ---- attack graphs ---- */

/* Builds the graph for one goal pattern. AG_ERR_GOAL_NOT_DERIVABLE carries a
 * diagnostic listing the nearest facts with the same predicate. */
ag_status ag_graph_build(const ag_ledger* ledger, const char* goal, ag_graph** out,
                         char** error);
void ag_graph_free(ag_graph* graph);

size_t ag_graph_node_count(const ag_graph* graph);
size_t ag_graph_edge_count(const ag_graph* graph);
char* ag_graph_to_dot(const ag_graph* graph);
char* ag_graph_to_json(const ag_graph* graph);
ag_status ag_graph_from_json(const char* text, ag_graph** out, char** error);
/* 1 when a label-preserving bijection maps the edges of a onto b exactly. */
int ag_graph_same_shape(const ag_graph* a, const ag_graph* b);

/* ---- inventory ingestion ---- */

/* Maps an inventory document (JSON, schema_version 1) to a fact program.
 * warnings, when non-NULL, receives newline-separated notes. */
ag_status ag_ingest(const char* inventory_json, ag_program** out, char** warnings,
                    char** error);

#ifdef __cplusplus
}
#endif

#endif /* ATTACKGRAPH_H */
