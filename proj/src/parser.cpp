#include "parser.hpp"

#include <cctype>
#include <optional>
#include <utility>

namespace ag {

parse_error::parse_error(std::string message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message),
      detail_(std::move(message)),
      line_(line),
      column_(column) {}

namespace {

enum class token_kind {
    name,       // lower-case identifier
    variable,   // upper-case or underscore-prefixed identifier
    wildcard,   // bare "_"
    quoted,     // 'text', quote doubling unescaped
    lparen,
    rparen,
    comma,
    dot,
    implies,    // ":-"
    label,      // "%% text" comment
    end
};

struct token {
    token_kind kind;
    std::string text;
    int line = 1;
    int column = 1;
};

class lexer {
public:
    explicit lexer(std::string_view text) : text_(text) {}

    token next() {
        skip_trivia();
        int line = line_, col = col_;
        if (eof()) return {token_kind::end, "", line, col};
        char c = peek();
        if (c == '(') { advance(); return {token_kind::lparen, "(", line, col}; }
        if (c == ')') { advance(); return {token_kind::rparen, ")", line, col}; }
        if (c == ',') { advance(); return {token_kind::comma, ",", line, col}; }
        if (c == '.') { advance(); return {token_kind::dot, ".", line, col}; }
        if (c == ':') {
            advance();
            if (!eof() && peek() == '-') {
                advance();
                return {token_kind::implies, ":-", line, col};
            }
            throw parse_error("expected ':-'", line, col);
        }
        if (c == '\'') return read_quoted(line, col);
        if (c == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '+')
            throw parse_error("negation ('\\+') is not supported", line, col);
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
            return read_word(line, col);
        throw parse_error(std::string("unexpected character '") + c + "'", line, col);
    }

    // Label comments are meaningful, so they come out of the token stream
    // instead of being skipped with the other trivia.
    std::optional<token> pending_label() {
        if (!pending_label_) return std::nullopt;
        auto out = std::move(pending_label_);
        pending_label_.reset();
        return out;
    }

private:
    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (!eof()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
                continue;
            }
            if (c == '%') {
                int line = line_, col = col_;
                advance();
                bool is_label = !eof() && peek() == '%';
                if (is_label) advance();
                std::string body;
                while (!eof() && peek() != '\n') {
                    body += peek();
                    advance();
                }
                if (is_label) pending_label_ = token{token_kind::label, trim(body), line, col};
                continue;
            }
            if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                int line = line_, col = col_;
                advance();
                advance();
                while (true) {
                    if (eof()) throw parse_error("unterminated block comment", line, col);
                    if (peek() == '*' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                        advance();
                        advance();
                        break;
                    }
                    advance();
                }
                continue;
            }
            return;
        }
    }

    token read_quoted(int line, int col) {
        advance(); // opening quote
        std::string out;
        while (true) {
            if (eof()) throw parse_error("unterminated quoted constant", line, col);
            char c = peek();
            advance();
            if (c == '\'') {
                if (!eof() && peek() == '\'') { // doubled quote
                    out += '\'';
                    advance();
                    continue;
                }
                return {token_kind::quoted, out, line, col};
            }
            out += c;
        }
    }

    token read_word(int line, int col) {
        std::string out;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            out += peek();
            advance();
        }
        if (out == "_") return {token_kind::wildcard, out, line, col};
        unsigned char first = static_cast<unsigned char>(out[0]);
        if (std::isupper(first) || out[0] == '_')
            return {token_kind::variable, out, line, col};
        return {token_kind::name, out, line, col};
    }

    static std::string trim(std::string s) {
        std::size_t b = s.find_first_not_of(" \t\r");
        std::size_t e = s.find_last_not_of(" \t\r");
        if (b == std::string::npos) return "";
        return s.substr(b, e - b + 1);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    std::optional<token> pending_label_;
};

// Parse-time atom: arguments may be nested atoms, which is legal only in the
// goal and declaration forms and rejected during lowering everywhere else.
struct ast_term;
struct ast_atom {
    std::string predicate;
    std::vector<ast_term> args;
    int line = 1;
    int column = 1;
};
struct ast_term {
    term flat;
    std::optional<ast_atom> compound;
    int line = 1;
    int column = 1;
};

class parser {
public:
    explicit parser(std::string_view text) : lex_(text) { shift(); }

    program parse() {
        program out;
        while (current_.kind != token_kind::end) {
            std::string label = take_label();
            ast_atom head = parse_ast_atom();
            std::vector<ast_atom> body;
            if (current_.kind == token_kind::implies) {
                shift();
                body.push_back(parse_ast_atom());
                while (current_.kind == token_kind::comma) {
                    shift();
                    body.push_back(parse_ast_atom());
                }
            }
            expect(token_kind::dot, "expected '.' at end of clause");
            lower(std::move(head), std::move(body), std::move(label), out);
        }
        return out;
    }

    atom parse_single_atom() {
        ast_atom a = parse_ast_atom();
        expect_one_of_end();
        return flatten(a, "atom");
    }

private:
    void shift() {
        current_ = lex_.next();
        if (auto lbl = lex_.pending_label()) label_ = *lbl;
    }

    std::string take_label() {
        std::string out = label_ ? label_->text : "";
        label_.reset();
        return out;
    }

    void expect(token_kind kind, const char* message) {
        if (current_.kind != kind)
            throw parse_error(message, current_.line, current_.column);
        shift();
    }

    void expect_one_of_end() {
        if (current_.kind == token_kind::dot) shift();
        if (current_.kind != token_kind::end)
            throw parse_error("trailing input after atom", current_.line, current_.column);
    }

    ast_atom parse_ast_atom() {
        if (current_.kind != token_kind::name)
            throw parse_error("expected a predicate name", current_.line, current_.column);
        ast_atom out;
        out.predicate = current_.text;
        out.line = current_.line;
        out.column = current_.column;
        shift();
        if (current_.kind != token_kind::lparen) return out;
        shift();
        if (current_.kind == token_kind::rparen)
            throw parse_error("empty argument list", current_.line, current_.column);
        out.args.push_back(parse_ast_term());
        while (current_.kind == token_kind::comma) {
            shift();
            out.args.push_back(parse_ast_term());
        }
        expect(token_kind::rparen, "expected ')' or ','");
        return out;
    }

    ast_term parse_ast_term() {
        ast_term out;
        out.line = current_.line;
        out.column = current_.column;
        switch (current_.kind) {
        case token_kind::wildcard:
            out.flat = term::wildcard();
            shift();
            return out;
        case token_kind::variable:
            out.flat = term::variable(current_.text);
            shift();
            return out;
        case token_kind::quoted:
            if (current_.text.empty())
                throw parse_error("empty quoted constant", current_.line, current_.column);
            out.flat = term::constant(current_.text);
            shift();
            return out;
        case token_kind::name: {
            ast_atom inner = parse_ast_atom();
            if (inner.args.empty()) {
                out.flat = term::constant(inner.predicate);
                out.line = inner.line;
                out.column = inner.column;
            } else {
                out.compound = std::move(inner);
            }
            return out;
        }
        default:
            throw parse_error("expected a term", current_.line, current_.column);
        }
    }

    atom flatten(const ast_atom& a, const char* context) {
        atom out;
        out.predicate = a.predicate;
        out.args.reserve(a.args.size());
        for (const ast_term& t : a.args) {
            if (t.compound)
                throw parse_error(std::string("nested term is not allowed in ") + context +
                                      " (only attackGoal and primitive/derived declarations"
                                      " take an atom argument)",
                                  t.line, t.column);
            out.args.push_back(t.flat);
        }
        return out;
    }

    // A goal argument written without parentheses, e.g. attackGoal(root), is a
    // zero-arity goal predicate.
    atom goal_argument(const ast_term& t) {
        if (t.compound) return flatten(*t.compound, "a goal");
        if (t.flat.kind == term_kind::constant) return atom{t.flat.text, {}};
        throw parse_error("goal must be a predicate", t.line, t.column);
    }

    void lower(ast_atom head, std::vector<ast_atom> body, std::string label, program& out) {
        bool is_fact = body.empty();
        if (is_fact && head.args.size() == 1 &&
            (head.predicate == "attackGoal" || head.predicate == "attackerGoal")) {
            out.goals.push_back(goal_argument(head.args[0]));
            return;
        }
        if (is_fact && head.args.size() == 1 && head.args[0].compound &&
            (head.predicate == "primitive" || head.predicate == "derived")) {
            declaration d;
            d.signature = flatten(*head.args[0].compound, "a declaration");
            d.role = head.predicate == "primitive" ? predicate_role::input_fact
                                                   : predicate_role::derived;
            out.declarations.push_back(d);
            return;
        }
        clause c;
        c.head = flatten(head, "a clause head");
        c.label = std::move(label);
        for (const ast_atom& b : body) c.body.push_back(flatten(b, "a rule body"));
        if (!c.is_fact()) {
            for (const term& t : c.head.args)
                if (t.kind == term_kind::wildcard)
                    throw parse_error("wildcard in a rule head (use a variable instead)",
                                      head.line, head.column);
        }
        out.clauses.push_back(std::move(c));
    }

    lexer lex_;
    token current_{token_kind::end, ""};
    std::optional<token> label_;
};

} // namespace

program parse_program(std::string_view text) { return parser(text).parse(); }

atom parse_atom(std::string_view text) { return parser(text).parse_single_atom(); }

std::vector<std::string> lexical_fingerprint(std::string_view text) {
    lexer lex(text);
    std::vector<std::string> out;
    while (true) {
        token t = lex.next();
        if (auto lbl = lex.pending_label()) out.push_back("%% " + lbl->text);
        if (t.kind == token_kind::end) break;
        if (t.kind == token_kind::quoted)
            out.push_back("'" + t.text + "'");
        else
            out.push_back(t.text);
    }
    return out;
}

} // namespace ag
