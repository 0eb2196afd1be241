#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "engine.hpp"

namespace ag {

class goal_not_derivable_error : public std::runtime_error {
public:
    explicit goal_not_derivable_error(std::string message)
        : std::runtime_error(std::move(message)) {}
};

enum class node_kind : std::uint8_t { derivation, primitive, derived };

std::string_view to_string(node_kind kind);

struct graph_node {
    int id = 0;
    node_kind kind = node_kind::primitive;
    std::string label;

    bool operator==(const graph_node&) const = default;
};

/// Directed and-or graph over a goal's derivation cone. Derivation nodes are
/// and-nodes (in-degree equals the rule body length, one out-edge to the fact
/// they produce); derived-fact nodes are or-nodes over their derivations;
/// primitive facts are leaves. Edges only run fact -> derivation and
/// derivation -> derived fact, and the graph is acyclic. Nodes are numbered
/// from the goal outward, deterministically.
struct attack_graph {
    std::vector<graph_node> nodes; // ascending by id; ids are 1..n
    std::vector<std::pair<int, int>> edges; // sorted
    int goal = 0;

    const graph_node& node(int id) const { return nodes.at(static_cast<std::size_t>(id - 1)); }
    bool operator==(const attack_graph&) const = default;
};

/// Builds the graph of everything reachable backward from the facts matching
/// `goal`. A rule application is included only when every body fact was first
/// derived strictly before the head fact (input facts count as round 0),
/// which keeps the graph acyclic while retaining at least one complete
/// derivation per fact. Facts whose derivations all come from unlabeled
/// rules render as leaves. Throws goal_not_derivable_error when nothing
/// matches, listing the nearest facts with the same predicate name.
attack_graph build_graph(const derivation_ledger& ledger, const atom& goal);

/// Graphviz output; derivation nodes as ellipses, primitive facts as boxes,
/// derived facts as diamonds. Byte-deterministic for a given graph.
std::string to_dot(const attack_graph& graph);

/// {"format":1,"goal":id,"nodes":[{id,kind,label}],"edges":[[from,to]]}
std::string to_json(const attack_graph& graph);

attack_graph graph_from_json(std::string_view text);

/// True when a label-preserving bijection of nodes maps the edges of one
/// graph exactly onto the edges of the other.
bool same_shape(const attack_graph& a, const attack_graph& b);

} // namespace ag
