#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "datalog.hpp"
#include "engine.hpp"
#include "graph.hpp"
#include "ruleset.hpp"

namespace ag::test {

std::string read_file(const std::string& path);
std::string fixture_path(const std::string& name);
program load_fixture(const std::string& name);

/// Facts + rules merged the way the library front ends do it.
program with_rules(const program& facts, const rule_set& rules);

// ---- independent naive-iteration oracle ----------------------------------
//
// Applies every rule to the entire fact set until nothing changes. Written
// against the matching semantics only (wildcards match anything and bind
// nothing; unbound head variables derive as wildcards) and shares no code
// with the semi-naive engine.

std::set<std::string> naive_fixpoint(const program& prog);

/// One extra naive round over an existing fact set; returns facts not
/// already present.
std::set<std::string> naive_round(const program& prog, const std::set<std::string>& facts);

// ---- random program generation --------------------------------------------

struct generator_limits {
    int max_predicates = 6;
    int max_arity = 3;
    int max_constants = 10;
    int max_rules = 15;
    int max_facts = 12;
};

program random_program(std::mt19937& rng, const generator_limits& limits = {});

// ---- structural checks -----------------------------------------------------

/// Asserts every attack-graph invariant (edge typing, degrees, acyclicity,
/// goal reachability, id numbering); returns a failure description or "".
std::string check_graph_invariants(const attack_graph& graph);

} // namespace ag::test
