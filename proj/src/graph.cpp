#include "graph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace ag {

std::string_view to_string(node_kind kind) {
    switch (kind) {
    case node_kind::derivation: return "derivation";
    case node_kind::primitive: return "primitive";
    case node_kind::derived: return "derived";
    }
    return "primitive";
}

namespace {

node_kind kind_from_string(std::string_view text) {
    if (text == "derivation") return node_kind::derivation;
    if (text == "primitive") return node_kind::primitive;
    if (text == "derived") return node_kind::derived;
    throw std::runtime_error("unknown node kind: " + std::string(text));
}

// Working representation before ids are assigned.
struct proto_node {
    node_kind kind;
    std::string label;
    std::string order_hint; // secondary sort key for deterministic numbering
    std::vector<std::size_t> in;  // proto indices
    std::vector<std::size_t> out;
};

class builder {
public:
    explicit builder(const derivation_ledger& ledger) : ledger_(ledger) {}

    attack_graph build(const atom& goal) {
        auto matches = query(ledger_, goal);
        if (matches.empty()) throw goal_not_derivable_error(diagnostic(goal));

        std::vector<std::size_t> match_nodes;
        for (const auto& [fact, bound] : matches)
            match_nodes.push_back(visit_fact(static_cast<std::uint32_t>(ledger_.find(fact))));

        std::size_t goal_node;
        if (match_nodes.size() == 1) {
            goal_node = match_nodes[0];
        } else {
            // Several facts satisfy the goal pattern; join them under one
            // synthetic or-node so the graph keeps a single goal.
            goal_node = add_node(node_kind::derived, goal.to_string(), "");
            for (std::size_t m : match_nodes) {
                std::size_t alt = add_node(node_kind::derivation, "GOAL",
                                           nodes_[m].label);
                link(m, alt);
                link(alt, goal_node);
            }
        }
        return number_from(goal_node);
    }

private:
    std::size_t add_node(node_kind kind, std::string label, std::string order_hint) {
        nodes_.push_back({kind, std::move(label), std::move(order_hint), {}, {}});
        return nodes_.size() - 1;
    }

    void link(std::size_t from, std::size_t to) {
        nodes_[from].out.push_back(to);
        nodes_[to].in.push_back(from);
    }

    // A rule application belongs to the graph only when every precondition
    // strictly precedes the conclusion (inputs are round 0).
    bool qualifies(const instantiation& inst, std::uint32_t head_round) const {
        for (std::uint32_t body : inst.body_facts)
            if (ledger_.entry(body).round >= head_round) return false;
        return true;
    }

    std::size_t visit_fact(std::uint32_t fact_id) {
        auto it = fact_nodes_.find(fact_id);
        if (it != fact_nodes_.end()) return it->second;

        const ledger_entry& entry = ledger_.entry(fact_id);
        std::vector<const instantiation*> shown;
        for (const instantiation& inst : entry.derivations) {
            if (!qualifies(inst, entry.round)) continue;
            if (ledger_.source().clauses[inst.clause_index].label.empty()) continue;
            shown.push_back(&inst);
        }

        std::string label = entry.fact.to_string();
        if (shown.empty()) {
            // Input fact, or a fact produced only by unlabeled rewrites.
            std::size_t node = add_node(node_kind::primitive, label, "");
            fact_nodes_.emplace(fact_id, node);
            return node;
        }

        std::size_t node = add_node(node_kind::derived, label, "");
        fact_nodes_.emplace(fact_id, node);
        for (const instantiation* inst : shown) {
            const clause& rule = ledger_.source().clauses[inst->clause_index];
            std::string hint;
            for (std::uint32_t body : inst->body_facts)
                hint += ledger_.entry(body).fact.to_string() + ";";
            std::size_t derivation = add_node(node_kind::derivation, rule.label, hint);
            link(derivation, node);
            for (std::uint32_t body : inst->body_facts)
                link(visit_fact(body), derivation);
        }
        return node;
    }

    // Breadth-first numbering starting at the goal; contributors of a node
    // are visited in (label, order-hint) order so output is deterministic.
    attack_graph number_from(std::size_t goal_node) {
        std::vector<int> id(nodes_.size(), 0);
        int next = 1;
        std::queue<std::size_t> pending;
        id[goal_node] = next++;
        pending.push(goal_node);
        while (!pending.empty()) {
            std::size_t current = pending.front();
            pending.pop();
            std::vector<std::size_t> ins = nodes_[current].in;
            std::sort(ins.begin(), ins.end(), [this](std::size_t a, std::size_t b) {
                const proto_node& na = nodes_[a];
                const proto_node& nb = nodes_[b];
                if (na.label != nb.label) return na.label < nb.label;
                if (na.order_hint != nb.order_hint) return na.order_hint < nb.order_hint;
                return a < b;
            });
            for (std::size_t in : ins) {
                if (id[in] == 0) {
                    id[in] = next++;
                    pending.push(in);
                }
            }
        }

        attack_graph out;
        out.nodes.resize(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            out.nodes[static_cast<std::size_t>(id[i] - 1)] = {id[i], nodes_[i].kind,
                                                              nodes_[i].label};
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            for (std::size_t to : nodes_[i].out) out.edges.emplace_back(id[i], id[to]);
        std::sort(out.edges.begin(), out.edges.end());
        out.goal = id[goal_node];
        return out;
    }

    std::string diagnostic(const atom& goal) const {
        std::string out = "goal " + goal.to_string() + " is not derivable";
        std::vector<std::string> near;
        for (const ledger_entry& entry : ledger_.entries())
            if (entry.fact.predicate == goal.predicate)
                near.push_back(entry.fact.to_string());
        std::sort(near.begin(), near.end());
        if (near.empty()) {
            out += "; no " + goal.predicate + " facts exist";
            return out;
        }
        out += "; nearest " + goal.predicate + " facts:";
        for (std::size_t i = 0; i < near.size() && i < 5; ++i) out += "\n  " + near[i];
        return out;
    }

    const derivation_ledger& ledger_;
    std::vector<proto_node> nodes_;
    std::unordered_map<std::uint32_t, std::size_t> fact_nodes_;
};

std::string escape_dot(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

const char* shape_of(node_kind kind) {
    switch (kind) {
    case node_kind::derivation: return "ellipse";
    case node_kind::primitive: return "box";
    case node_kind::derived: return "diamond";
    }
    return "box";
}

} // namespace

attack_graph build_graph(const derivation_ledger& ledger, const atom& goal) {
    return builder(ledger).build(goal);
}

std::string to_dot(const attack_graph& graph) {
    std::string out = "digraph attack_graph {\n  rankdir=TB;\n";
    for (const graph_node& n : graph.nodes) {
        out += "  " + std::to_string(n.id) + " [label=\"" + escape_dot(n.label) +
               "\", shape=" + shape_of(n.kind) + "];\n";
    }
    for (const auto& [from, to] : graph.edges)
        out += "  " + std::to_string(from) + " -> " + std::to_string(to) + ";\n";
    out += "}\n";
    return out;
}

std::string to_json(const attack_graph& graph) {
    nlohmann::ordered_json doc;
    doc["format"] = 1;
    doc["goal"] = graph.goal;
    doc["nodes"] = nlohmann::ordered_json::array();
    for (const graph_node& n : graph.nodes) {
        doc["nodes"].push_back({{"id", n.id},
                                {"kind", std::string(to_string(n.kind))},
                                {"label", n.label}});
    }
    doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& [from, to] : graph.edges) doc["edges"].push_back({from, to});
    return doc.dump(2) + "\n";
}

attack_graph graph_from_json(std::string_view text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    if (!doc.contains("format") || doc["format"] != 1)
        throw std::runtime_error("unsupported graph format");
    attack_graph out;
    std::set<int> seen;
    for (const auto& n : doc.at("nodes")) {
        graph_node node{n.at("id").get<int>(),
                        kind_from_string(n.at("kind").get<std::string>()),
                        n.at("label").get<std::string>()};
        if (!seen.insert(node.id).second)
            throw std::runtime_error("duplicate node id in graph");
        out.nodes.push_back(std::move(node));
    }
    std::sort(out.nodes.begin(), out.nodes.end(),
              [](const graph_node& a, const graph_node& b) { return a.id < b.id; });
    for (const auto& e : doc.at("edges")) {
        int from = e.at(0).get<int>();
        int to = e.at(1).get<int>();
        if (!seen.count(from) || !seen.count(to))
            throw std::runtime_error("edge references a missing node");
        out.edges.emplace_back(from, to);
    }
    std::sort(out.edges.begin(), out.edges.end());
    out.goal = doc.at("goal").get<int>();
    if (!seen.count(out.goal)) throw std::runtime_error("goal references a missing node");
    return out;
}

namespace {

struct shape_signature {
    node_kind kind;
    std::string label;
    std::vector<std::string> in_labels;
    std::vector<std::string> out_labels;

    bool operator==(const shape_signature&) const = default;
    bool operator<(const shape_signature& other) const {
        return std::tie(kind, label, in_labels, out_labels) <
               std::tie(other.kind, other.label, other.in_labels, other.out_labels);
    }
};

std::vector<shape_signature> signatures(const attack_graph& g) {
    std::unordered_map<int, std::size_t> index;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i].id] = i;
    std::vector<shape_signature> sigs(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        sigs[i] = {g.nodes[i].kind, g.nodes[i].label, {}, {}};
    for (const auto& [from, to] : g.edges) {
        sigs[index[to]].in_labels.push_back(g.nodes[index[from]].label);
        sigs[index[from]].out_labels.push_back(g.nodes[index[to]].label);
    }
    for (auto& s : sigs) {
        std::sort(s.in_labels.begin(), s.in_labels.end());
        std::sort(s.out_labels.begin(), s.out_labels.end());
    }
    return sigs;
}

} // namespace

bool same_shape(const attack_graph& a, const attack_graph& b) {
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;

    std::vector<shape_signature> sig_a = signatures(a);
    std::vector<shape_signature> sig_b = signatures(b);

    // Candidate partners per node, by full neighborhood signature.
    std::map<shape_signature, std::vector<std::size_t>> groups_b;
    for (std::size_t j = 0; j < sig_b.size(); ++j) groups_b[sig_b[j]].push_back(j);
    {
        std::map<shape_signature, std::size_t> count_a;
        for (const auto& s : sig_a) ++count_a[s];
        if (count_a.size() != groups_b.size()) return false;
        for (const auto& [sig, count] : count_a) {
            auto it = groups_b.find(sig);
            if (it == groups_b.end() || it->second.size() != count) return false;
        }
    }

    std::unordered_set<std::uint64_t> edges_b;
    std::unordered_map<int, std::size_t> index_b;
    for (std::size_t j = 0; j < b.nodes.size(); ++j) index_b[b.nodes[j].id] = j;
    auto encode = [](std::size_t from, std::size_t to) {
        return (static_cast<std::uint64_t>(from) << 32) | to;
    };
    for (const auto& [from, to] : b.edges)
        edges_b.insert(encode(index_b[from], index_b[to]));

    std::unordered_map<int, std::size_t> index_a;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) index_a[a.nodes[i].id] = i;
    std::vector<std::vector<std::size_t>> adj_out(a.nodes.size()), adj_in(a.nodes.size());
    for (const auto& [from, to] : a.edges) {
        adj_out[index_a[from]].push_back(index_a[to]);
        adj_in[index_a[to]].push_back(index_a[from]);
    }

    // Assign most-constrained nodes first, then backtrack.
    std::vector<std::size_t> order(a.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        std::size_t gx = groups_b[sig_a[x]].size();
        std::size_t gy = groups_b[sig_a[y]].size();
        if (gx != gy) return gx < gy;
        return x < y;
    });

    std::vector<std::int64_t> assigned(a.nodes.size(), -1);
    std::vector<bool> used(b.nodes.size(), false);

    auto consistent = [&](std::size_t node_a, std::size_t node_b) {
        for (std::size_t to : adj_out[node_a])
            if (assigned[to] >= 0 &&
                !edges_b.count(encode(node_b, static_cast<std::size_t>(assigned[to]))))
                return false;
        for (std::size_t from : adj_in[node_a])
            if (assigned[from] >= 0 &&
                !edges_b.count(encode(static_cast<std::size_t>(assigned[from]), node_b)))
                return false;
        return true;
    };

    auto search = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == order.size()) return true;
        std::size_t node_a = order[depth];
        for (std::size_t node_b : groups_b[sig_a[node_a]]) {
            if (used[node_b] || !consistent(node_a, node_b)) continue;
            used[node_b] = true;
            assigned[node_a] = static_cast<std::int64_t>(node_b);
            if (self(self, depth + 1)) return true;
            used[node_b] = false;
            assigned[node_a] = -1;
        }
        return false;
    };
    return search(search, 0);
}

} // namespace ag
