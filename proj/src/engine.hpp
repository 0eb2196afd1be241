#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "datalog.hpp"

namespace ag {

/// Thrown when the number of derived facts exceeds the configured cap,
/// which signals a runaway model rather than an engine failure.
class evaluation_limit_error : public std::runtime_error {
public:
    explicit evaluation_limit_error(std::size_t limit)
        : std::runtime_error("derived-fact cap of " + std::to_string(limit) +
                             " exceeded; the model does not converge at this size"),
          limit_(limit) {}
    std::size_t limit() const { return limit_; }

private:
    std::size_t limit_;
};

struct evaluation_options {
    std::size_t max_derived_facts = 1'000'000;
};

/// One rule application: the clause (by index into the evaluated program)
/// plus the matched fact for each body position, in body order.
struct instantiation {
    std::uint32_t clause_index = 0;
    std::vector<std::uint32_t> body_facts;

    bool operator==(const instantiation&) const = default;
};

struct ledger_entry {
    atom fact;
    std::uint32_t round = 0;               // 0 for input facts
    std::vector<instantiation> derivations; // every distinct rule application
};

/// The least model of a program together with full provenance. Facts are
/// tabled: each distinct atom (wildcards included) appears exactly once.
/// Immutable once evaluate() returns.
class derivation_ledger {
public:
    const program& source() const { return program_; }
    const std::vector<ledger_entry>& entries() const { return entries_; }
    const ledger_entry& entry(std::uint32_t id) const { return entries_[id]; }
    std::size_t fact_count() const { return entries_.size(); }
    std::size_t derived_count() const { return derived_count_; }

    /// Fact ids for one (predicate, arity) pair, in insertion order.
    const std::vector<std::uint32_t>& bucket(const predicate_key& key) const;

    /// Id of an exact fact (same atom, wildcards included), or -1.
    std::int64_t find(const atom& fact) const;

    /// All facts in lexicographic order of their printed form, "fact." lines.
    std::string dump() const;

    /// Full state including rounds and provenance; used by determinism checks.
    std::string dump_with_provenance() const;

private:
    friend class evaluator;

    program program_;
    std::vector<ledger_entry> entries_;
    std::unordered_map<std::string, std::uint32_t> by_text_;
    std::map<predicate_key, std::vector<std::uint32_t>> by_predicate_;
    std::size_t derived_count_ = 0;
};

/// Bottom-up semi-naive fixpoint with provenance. Every rule application is
/// considered exactly once: at each round only matches that use at least one
/// fact new in the previous round fire. Input facts sit at round 0; a derived
/// fact's round is the first round that produced it.
derivation_ledger evaluate(const program& prog, const evaluation_options& options = {});

/// Facts unifiable with the goal pattern, each with the resulting binding,
/// ordered lexicographically by the fact's printed form.
std::vector<std::pair<atom, binding>> query(const derivation_ledger& ledger, const atom& goal);

} // namespace ag
