#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ag {

enum class term_kind : std::uint8_t { constant, variable, wildcard };

/// One argument position of an atom. Constants start lower-case (or are
/// quoted, in which case any text is allowed), variables start upper-case,
/// and the wildcard is spelled "_".
struct term {
    term_kind kind = term_kind::wildcard;
    std::string text = "_";

    static term constant(std::string text);
    static term variable(std::string text);
    static term wildcard();

    bool operator==(const term&) const = default;
    bool operator<(const term& other) const;
};

struct atom {
    std::string predicate;
    std::vector<term> args;

    std::size_t arity() const { return args.size(); }
    // True when the atom has no named variables (constants and wildcards only).
    bool ground_or_wildcard() const;
    bool has_wildcard() const;
    std::string to_string() const;

    bool operator==(const atom&) const = default;
    bool operator<(const atom& other) const;
};

/// Horn clause: a fact when the body is empty. The label is free-form text
/// shown on derivation nodes of attack graphs; unlabeled rules are treated
/// as fact rewrites and collapsed during graph construction.
struct clause {
    atom head;
    std::vector<atom> body;
    std::string label;

    bool is_fact() const { return body.empty(); }
    std::string to_string() const;

    bool operator==(const clause&) const = default;
};

enum class predicate_role : std::uint8_t { input_fact, derived, either };

/// Predicate signature declaration, e.g. "primitive(located(Host, Zone, Type))."
/// The declared atom's argument names are kept so files print back faithfully.
struct declaration {
    atom signature;
    predicate_role role = predicate_role::input_fact;

    bool operator==(const declaration&) const = default;
};

struct predicate_key {
    std::string name;
    std::size_t arity = 0;

    auto operator<=>(const predicate_key&) const = default;
};

inline predicate_key key_of(const atom& a) { return {a.predicate, a.arity()}; }

/// A parsed source unit. attackGoal/attackerGoal facts are extracted into
/// `goals` and primitive/derived declarations into `declarations`; neither
/// participates in evaluation as an ordinary clause.
struct program {
    std::vector<clause> clauses;
    std::vector<atom> goals;
    std::vector<declaration> declarations;

    void append(const program& other);
    std::string to_string() const;

    bool operator==(const program&) const = default;
};

/// Substitution from variable names to constant text. Bindings only ever
/// grow; re-binding a variable to a different constant is a failed match.
class binding {
public:
    const std::string* find(std::string_view var) const;
    bool bind(const std::string& var, const std::string& value);
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    std::string to_string() const;

    bool operator==(const binding&) const = default;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Positional match of `pattern` against a fact that contains no named
/// variables. A wildcard on either side matches anything and binds nothing;
/// variables matched against a wildcard stay unbound. Returns the extended
/// binding, or nullopt on predicate/arity/constant mismatch.
std::optional<binding> unify(const atom& pattern, const atom& fact, const binding& seed);

/// Applies a binding to an atom; unbound variables become wildcards.
atom substitute(const atom& a, const binding& b);

/// True when `instance` agrees with `fact` position by position, treating
/// wildcards (and leftover variables in `instance`) as matching anything.
bool matches(const atom& instance, const atom& fact);

std::string print_term(const term& t);

} // namespace ag
