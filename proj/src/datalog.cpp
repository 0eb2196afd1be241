#include "datalog.hpp"

#include <algorithm>
#include <cctype>

namespace ag {

namespace {

bool plain_constant(const std::string& text) {
    if (text.empty()) return false;
    bool all_digits = std::all_of(text.begin(), text.end(),
                                  [](unsigned char c) { return std::isdigit(c); });
    if (all_digits) return true;
    if (!std::islower(static_cast<unsigned char>(text[0]))) return false;
    return std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

std::string quote(const std::string& text) {
    std::string out = "'";
    for (char c : text) {
        out += c;
        if (c == '\'') out += '\'';
    }
    out += '\'';
    return out;
}

} // namespace

term term::constant(std::string text) { return {term_kind::constant, std::move(text)}; }
term term::variable(std::string text) { return {term_kind::variable, std::move(text)}; }
term term::wildcard() { return {term_kind::wildcard, "_"}; }

bool term::operator<(const term& other) const {
    if (kind != other.kind) return kind < other.kind;
    return text < other.text;
}

std::string print_term(const term& t) {
    switch (t.kind) {
    case term_kind::wildcard: return "_";
    case term_kind::variable: return t.text;
    case term_kind::constant: return plain_constant(t.text) ? t.text : quote(t.text);
    }
    return "_";
}

bool atom::ground_or_wildcard() const {
    return std::none_of(args.begin(), args.end(),
                        [](const term& t) { return t.kind == term_kind::variable; });
}

bool atom::has_wildcard() const {
    return std::any_of(args.begin(), args.end(),
                       [](const term& t) { return t.kind == term_kind::wildcard; });
}

std::string atom::to_string() const {
    std::string out = predicate;
    if (!args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i) out += ',';
            out += print_term(args[i]);
        }
        out += ')';
    }
    return out;
}

bool atom::operator<(const atom& other) const {
    if (predicate != other.predicate) return predicate < other.predicate;
    return args < other.args;
}

std::string clause::to_string() const {
    std::string out;
    if (!label.empty()) out += "%% " + label + "\n";
    out += head.to_string();
    if (!body.empty()) {
        out += " :-\n";
        for (std::size_t i = 0; i < body.size(); ++i) {
            out += "    " + body[i].to_string();
            if (i + 1 < body.size()) out += ",\n";
        }
    }
    out += '.';
    return out;
}

void program::append(const program& other) {
    clauses.insert(clauses.end(), other.clauses.begin(), other.clauses.end());
    goals.insert(goals.end(), other.goals.begin(), other.goals.end());
    declarations.insert(declarations.end(), other.declarations.begin(),
                        other.declarations.end());
}

std::string program::to_string() const {
    std::string out;
    for (const auto& d : declarations) {
        out += (d.role == predicate_role::input_fact ? "primitive(" : "derived(");
        out += d.signature.to_string();
        out += ").\n";
    }
    if (!declarations.empty()) out += '\n';
    for (const auto& c : clauses) {
        out += c.to_string();
        out += '\n';
        if (!c.is_fact()) out += '\n';
    }
    for (const auto& g : goals) out += "attackGoal(" + g.to_string() + ").\n";
    return out;
}

const std::string* binding::find(std::string_view var) const {
    for (const auto& [name, value] : entries_)
        if (name == var) return &value;
    return nullptr;
}

bool binding::bind(const std::string& var, const std::string& value) {
    if (const std::string* existing = find(var)) return *existing == value;
    entries_.emplace_back(var, value);
    return true;
}

std::string binding::to_string() const {
    std::vector<std::pair<std::string, std::string>> sorted = entries_;
    std::sort(sorted.begin(), sorted.end());
    std::string out = "{";
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i) out += ", ";
        out += sorted[i].first + " -> " + sorted[i].second;
    }
    out += '}';
    return out;
}

std::optional<binding> unify(const atom& pattern, const atom& fact, const binding& seed) {
    if (pattern.predicate != fact.predicate || pattern.arity() != fact.arity())
        return std::nullopt;
    binding result = seed;
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        const term& p = pattern.args[i];
        const term& f = fact.args[i];
        if (p.kind == term_kind::wildcard || f.kind == term_kind::wildcard) continue;
        if (p.kind == term_kind::constant) {
            if (p.text != f.text) return std::nullopt;
            continue;
        }
        if (!result.bind(p.text, f.text)) return std::nullopt;
    }
    return result;
}

atom substitute(const atom& a, const binding& b) {
    atom out;
    out.predicate = a.predicate;
    out.args.reserve(a.args.size());
    for (const term& t : a.args) {
        if (t.kind == term_kind::variable) {
            if (const std::string* value = b.find(t.text))
                out.args.push_back(term::constant(*value));
            else
                out.args.push_back(term::wildcard());
        } else {
            out.args.push_back(t);
        }
    }
    return out;
}

bool matches(const atom& instance, const atom& fact) {
    if (instance.predicate != fact.predicate || instance.arity() != fact.arity())
        return false;
    for (std::size_t i = 0; i < instance.args.size(); ++i) {
        const term& a = instance.args[i];
        const term& b = fact.args[i];
        if (a.kind != term_kind::constant || b.kind != term_kind::constant) continue;
        if (a.text != b.text) return false;
    }
    return true;
}

} // namespace ag
