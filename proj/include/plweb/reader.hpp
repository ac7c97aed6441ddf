#pragma once

#include "plweb/term.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plweb {

struct SourceLocation {
    std::size_t line = 1;   // 1-based
    std::size_t column = 1; // 1-based
    std::size_t offset = 0; // bytes

    std::string str() const { return std::to_string(line) + ":" + std::to_string(column); }
};

// Reported as error(syntax_error(Detail), Context) through the engine.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::string detail, SourceLocation where)
        : std::runtime_error(where.str() + ": " + detail), detail_(std::move(detail)), where_(where)
    {
    }
    const std::string& detail() const { return detail_; }
    const SourceLocation& where() const { return where_; }

private:
    std::string detail_;
    SourceLocation where_;
};

enum class OpType { xfx, xfy, yfx, fy, fx, xf, yf };
enum class OpClass { prefix, infix, postfix };

OpClass op_class(OpType t);
std::optional<OpType> parse_op_type(std::string_view s);
std::string_view op_type_name(OpType t);

struct OpDef {
    int priority = 0;
    OpType type = OpType::xfx;
};

// Dynamic operator table, seeded with the ISO operator set.
class OperatorTable {
public:
    OperatorTable();

    // priority 0 removes the definition.
    void add(std::string_view name, int priority, OpType type);
    std::optional<OpDef> prefix(std::string_view name) const;
    std::optional<OpDef> infix(std::string_view name) const;
    std::optional<OpDef> postfix(std::string_view name) const;
    bool is_op(std::string_view name) const;

    struct Entry {
        std::string name;
        OpDef def;
    };
    std::vector<Entry> entries() const;

private:
    std::map<std::pair<std::string, OpClass>, OpDef> table_;
};

enum class DoubleQuotes { codes, chars, atom };

struct ReadOptions {
    DoubleQuotes double_quotes = DoubleQuotes::codes;
    // Variables in the `_G<digits>` namespace are reserved for fresh names.
    bool allow_reserved_variables = false;
};

enum class TokenKind { name, var, integer, floating, string, back_quote, punct, open_ct, end, eof };

struct Token {
    TokenKind kind;
    std::string text; // name text, variable name, string contents, punctuation
    std::int64_t ival = 0;
    double fval = 0;
    bool layout_before = false;
    SourceLocation where;
};

std::vector<Token> tokenize(std::string_view text);

struct ReadResult {
    Term term;
    // Named variables in order of first appearance (anonymous ones excluded).
    std::vector<std::pair<std::string, VarId>> variable_names;
    SourceLocation where;
};

// Reads successive clause terms (each terminated by `.`) from tokenized text.
class TermReader {
public:
    TermReader(std::string_view text, const OperatorTable& ops, ReadOptions options = {});

    // nullopt at end of input. The operator table may change between calls.
    std::optional<ReadResult> next();

    void set_options(ReadOptions o) { options_ = o; }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    const OperatorTable& ops_;
    ReadOptions options_;
};

// Parses exactly one term (with or without the final `.`).
ReadResult parse_term(std::string_view text, const OperatorTable& ops, ReadOptions options = {});
std::vector<ReadResult> read_all(std::string_view text, const OperatorTable& ops, ReadOptions options = {});

class FreshVars;

// DCG translation of `Head --> Body` into an ordinary clause term. Throws
// std::invalid_argument for malformed rules.
Term translate_dcg_rule(const Term& rule);
// Body translation for phrase/2,3: returns a goal relating s0 and s.
Term translate_dcg_body(const Term& body, const Term& s0, const Term& s, FreshVars& fresh);

// Canonical constructor listing for a clause list, e.g.
//   Rule(Term("append", [Term("[]"), Var("X"), Var("X")]), null)
std::string compile_clauses(const std::vector<Clause>& clauses);
std::vector<Clause> parse_listing(std::string_view listing);

} // namespace plweb
