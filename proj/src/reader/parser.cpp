#include "plweb/reader.hpp"
#include "plweb/text.hpp"

namespace plweb {

namespace {

bool is_reserved_variable(const std::string& name)
{
    if (name.size() < 3 || name[0] != '_' || name[1] != 'G')
        return false;
    for (std::size_t i = 2; i < name.size(); ++i)
        if (name[i] < '0' || name[i] > '9')
            return false;
    return true;
}

Term text_as(const std::string& text, DoubleQuotes mode)
{
    if (mode == DoubleQuotes::atom)
        return Term::atom(text);
    std::vector<Term> items;
    for (auto code : decode_utf8(text)) {
        if (mode == DoubleQuotes::codes)
            items.push_back(Term::integer(code));
        else
            items.push_back(Term::atom(utf8_encode(code)));
    }
    return Term::list(items);
}

class Parser {
public:
    Parser(const std::vector<Token>& tokens, std::size_t& pos, const OperatorTable& ops, const ReadOptions& options)
        : tokens_(tokens), pos_(pos), ops_(ops), options_(options)
    {
    }

    ReadResult read_clause(bool require_end)
    {
        ReadResult r;
        r.where = peek().where;
        r.term = parse(1200).first;
        const Token& t = peek();
        if (t.kind == TokenKind::end) {
            ++pos_;
        } else if (require_end || t.kind != TokenKind::eof) {
            fail(t.kind == TokenKind::eof ? "unexpected end of file, expected '.'" : "operator expected, got " + describe(t), t);
        }
        r.variable_names = std::move(names_);
        return r;
    }

private:
    const Token& peek(std::size_t ahead = 0) const
    {
        std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    const Token& take() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

    static std::string describe(const Token& t)
    {
        switch (t.kind) {
        case TokenKind::eof: return "end of file";
        case TokenKind::end: return "'.'";
        case TokenKind::integer: return "number";
        case TokenKind::floating: return "number";
        case TokenKind::string: return "string";
        default: return "'" + t.text + "'";
        }
    }

    [[noreturn]] void fail(const std::string& detail, const Token& at) const { throw SyntaxError(detail, at.where); }

    bool is_punct(const Token& t, char c) const
    {
        return t.kind == TokenKind::punct && t.text.size() == 1 && t.text[0] == c;
    }

    void expect(char c)
    {
        const Token& t = peek();
        if (!is_punct(t, c))
            fail(std::string("expected '") + c + "', got " + describe(t), t);
        ++pos_;
    }

    bool functional_open() const
    {
        const Token& t = peek();
        return is_punct(t, '(') && !t.layout_before;
    }

    bool is_term_end(const Token& t) const
    {
        if (t.kind == TokenKind::eof || t.kind == TokenKind::end)
            return true;
        if (t.kind != TokenKind::punct)
            return false;
        return t.text == ")" || t.text == "," || t.text == "|" || t.text == "]" || t.text == "}";
    }

    Term variable(const std::string& name, const Token& at)
    {
        if (name == "_")
            return Term::var(VarId{Symbol("_"), ++anonymous_});
        if (!options_.allow_reserved_variables && is_reserved_variable(name))
            fail("variable name " + name + " is reserved", at);
        for (const auto& [n, id] : names_)
            if (n == name)
                return Term::var(id);
        VarId id{Symbol(name), 0};
        names_.emplace_back(name, id);
        return Term::var(id);
    }

    std::vector<Term> arguments()
    {
        std::vector<Term> args;
        expect('(');
        args.push_back(parse(999).first);
        while (is_punct(peek(), ',')) {
            ++pos_;
            args.push_back(parse(999).first);
        }
        expect(')');
        return args;
    }

    Term list_body()
    {
        std::vector<Term> items;
        items.push_back(parse(999).first);
        while (is_punct(peek(), ',')) {
            ++pos_;
            items.push_back(parse(999).first);
        }
        Term tail;
        if (is_punct(peek(), '|')) {
            ++pos_;
            tail = parse(999).first;
        }
        expect(']');
        return Term::list(items, tail);
    }

    std::pair<Term, int> primary(int max)
    {
        const Token& t = take();
        switch (t.kind) {
        case TokenKind::integer:
            return {Term::integer(t.ival), 0};
        case TokenKind::floating:
            return {Term::floating(t.fval), 0};
        case TokenKind::var:
            return {variable(t.text, t), 0};
        case TokenKind::string:
            return {text_as(t.text, options_.double_quotes), 0};
        case TokenKind::back_quote:
            return {text_as(t.text, DoubleQuotes::codes), 0};
        case TokenKind::eof:
            fail("unexpected end of file", t);
        case TokenKind::end:
            fail("unexpected end of clause", t);
        case TokenKind::punct:
            return punct_primary(t);
        case TokenKind::name:
            return name_primary(t, max);
        default:
            fail("unexpected token", t);
        }
    }

    std::pair<Term, int> punct_primary(const Token& t)
    {
        switch (t.text[0]) {
        case '(': {
            Term inner = parse(1200).first;
            expect(')');
            return {inner, 0};
        }
        case '[':
            if (is_punct(peek(), ']')) {
                ++pos_;
                return atom_or_compound("[]");
            }
            return {list_body(), 0};
        case '{':
            if (is_punct(peek(), '}')) {
                ++pos_;
                return atom_or_compound("{}");
            }
            {
                Term inner = parse(1200).first;
                expect('}');
                return {Term::compound(sym::curly(), {inner}), 0};
            }
        default:
            fail("unexpected " + describe(t), t);
        }
    }

    std::pair<Term, int> atom_or_compound(const std::string& name)
    {
        if (functional_open())
            return {Term::compound(name, arguments()), 0};
        return {Term::atom(name), 0};
    }

    std::pair<Term, int> name_primary(const Token& t, int max)
    {
        const std::string& name = t.text;
        if (functional_open())
            return {Term::compound(name, arguments()), 0};
        const Token& next = peek();
        if (name == "-" && !next.layout_before) {
            if (next.kind == TokenKind::integer) {
                ++pos_;
                return {Term::integer(-next.ival), 0};
            }
            if (next.kind == TokenKind::floating) {
                ++pos_;
                return {Term::floating(-next.fval), 0};
            }
        }
        auto pre = ops_.prefix(name);
        if (pre && !is_term_end(next)) {
            bool operand_follows = true;
            if (next.kind == TokenKind::name && !ops_.prefix(next.text) &&
                (ops_.infix(next.text) || ops_.postfix(next.text))) {
                // `- = x`: the prefix operator is an atom operand of the infix one,
                // unless the name is used in functional notation.
                const Token& after = peek(1);
                operand_follows = is_punct(after, '(') && !after.layout_before;
            }
            if (operand_follows) {
                int p = pre->priority;
                if (p > max)
                    p = 999;
                int arg_max = pre->type == OpType::fy ? p : p - 1;
                Term arg = parse(arg_max).first;
                return {Term::compound(name, {arg}), p};
            }
        }
        return {Term::atom(name), 0};
    }

    std::pair<Term, int> parse(int max)
    {
        auto [left, left_prec] = primary(max);
        for (;;) {
            const Token& t = peek();
            std::string name;
            if (t.kind == TokenKind::name)
                name = t.text;
            else if (is_punct(t, ','))
                name = ",";
            else if (is_punct(t, '|'))
                name = "|";
            else
                break;
            if (auto in = ops_.infix(name)) {
                int p = in->priority;
                int left_max = in->type == OpType::yfx ? p : p - 1;
                int right_max = in->type == OpType::xfy ? p : p - 1;
                if (p <= max && left_prec <= left_max) {
                    ++pos_;
                    Term right = parse(right_max).first;
                    std::string functor = name == "|" ? ";" : name;
                    left = Term::compound(functor, {left, right});
                    left_prec = p;
                    continue;
                }
            }
            if (auto post = ops_.postfix(name)) {
                int p = post->priority;
                int left_max = post->type == OpType::yf ? p : p - 1;
                if (p <= max && left_prec <= left_max) {
                    ++pos_;
                    left = Term::compound(name, {left});
                    left_prec = p;
                    continue;
                }
            }
            break;
        }
        return {left, left_prec};
    }

    const std::vector<Token>& tokens_;
    std::size_t& pos_;
    const OperatorTable& ops_;
    const ReadOptions& options_;
    std::vector<std::pair<std::string, VarId>> names_;
    std::uint64_t anonymous_ = 0;
};

void skip_to_end(const std::vector<Token>& tokens, std::size_t& pos)
{
    while (pos < tokens.size() && tokens[pos].kind != TokenKind::end && tokens[pos].kind != TokenKind::eof)
        ++pos;
    if (pos < tokens.size() && tokens[pos].kind == TokenKind::end)
        ++pos;
}

} // namespace

TermReader::TermReader(std::string_view text, const OperatorTable& ops, ReadOptions options)
    : tokens_(tokenize(text)), ops_(ops), options_(options)
{
}

std::optional<ReadResult> TermReader::next()
{
    if (tokens_[pos_].kind == TokenKind::eof)
        return std::nullopt;
    std::size_t start = pos_;
    try {
        Parser p(tokens_, pos_, ops_, options_);
        return p.read_clause(true);
    } catch (const SyntaxError&) {
        pos_ = start;
        skip_to_end(tokens_, pos_);
        throw;
    }
}

ReadResult parse_term(std::string_view text, const OperatorTable& ops, ReadOptions options)
{
    auto tokens = tokenize(text);
    std::size_t pos = 0;
    Parser p(tokens, pos, ops, options);
    if (tokens.front().kind == TokenKind::eof)
        throw SyntaxError("unexpected end of file", tokens.front().where);
    ReadResult r = p.read_clause(false);
    if (tokens[pos].kind != TokenKind::eof)
        throw SyntaxError("unexpected text after term", tokens[pos].where);
    return r;
}

std::vector<ReadResult> read_all(std::string_view text, const OperatorTable& ops, ReadOptions options)
{
    TermReader reader(text, ops, options);
    std::vector<ReadResult> out;
    while (auto r = reader.next())
        out.push_back(std::move(*r));
    return out;
}

} // namespace plweb
