#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "datalog.hpp"

namespace ag {

class parse_error : public std::runtime_error {
public:
    parse_error(std::string message, int line, int column);

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& detail() const { return detail_; }

private:
    std::string detail_;
    int line_;
    int column_;
};

/// Parses the textual clause format: clauses end with ".", rule bodies follow
/// ":-" separated by commas. "%" line comments and "/* */" block comments are
/// skipped; a "%%" comment attaches its text as the label of the next clause.
/// Constants start lower-case or are single-quoted ('' escapes a quote);
/// variables start upper-case; "_" is the wildcard. Nested atoms are accepted
/// only inside attackGoal/attackerGoal facts and primitive/derived
/// declarations, which are routed to program.goals and program.declarations.
program parse_program(std::string_view text);

/// Parses a single atom, e.g. a goal passed on a command line.
atom parse_atom(std::string_view text);

/// Lexical fingerprint of a source unit: the token spelling sequence with all
/// whitespace and non-label comments discarded. Two texts with equal
/// fingerprints are the same program character-for-character up to layout.
std::vector<std::string> lexical_fingerprint(std::string_view text);

} // namespace ag
