#include "plweb/reader.hpp"
#include "plweb/text.hpp"

#include <cctype>

#include <cmath>
#include <limits>

namespace plweb {

namespace {

bool is_graphic(char c)
{
    switch (c) {
    case '#': case '$': case '&': case '*': case '+': case '-': case '.': case '/': case ':':
    case '<': case '=': case '>': case '?': case '@': case '^': case '~': case '\\':
        return true;
    default:
        return false;
    }
}

bool is_alnum(char c)
{
    auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || u >= 0x80;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_layout(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            bool layout = skip_layout();
            Token t = next_token();
            t.layout_before = layout;
            bool done = t.kind == TokenKind::eof;
            out.push_back(std::move(t));
            if (done)
                break;
        }
        return out;
    }

private:
    char peek(std::size_t ahead = 0) const
    {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    bool at_end() const { return pos_ >= text_.size(); }

    void advance()
    {
        if (text_[pos_] == '\n') {
            ++where_.line;
            where_.column = 1;
        } else {
            ++where_.column;
        }
        ++pos_;
        where_.offset = pos_;
    }

    [[noreturn]] void fail(const std::string& detail, SourceLocation at) const { throw SyntaxError(detail, at); }

    bool skip_layout()
    {
        bool any = false;
        for (;;) {
            if (at_end())
                return any;
            char c = peek();
            if (is_layout(c)) {
                advance();
                any = true;
            } else if (c == '%') {
                while (!at_end() && peek() != '\n')
                    advance();
                any = true;
            } else if (c == '/' && peek(1) == '*') {
                SourceLocation start = where_;
                advance();
                advance();
                while (!(peek() == '*' && peek(1) == '/')) {
                    if (at_end())
                        fail("unterminated block comment", start);
                    advance();
                }
                advance();
                advance();
                any = true;
            } else {
                return any;
            }
        }
    }

    Token make(TokenKind k, std::string text, SourceLocation at)
    {
        Token t;
        t.kind = k;
        t.text = std::move(text);
        t.where = at;
        return t;
    }

    Token next_token()
    {
        SourceLocation at = where_;
        if (at_end())
            return make(TokenKind::eof, "", at);
        char c = peek();
        if (is_digit(c))
            return number(at);
        if (c == '_' || (c >= 'A' && c <= 'Z')) {
            std::string s;
            while (!at_end() && is_alnum(peek())) {
                s += peek();
                advance();
            }
            return make(TokenKind::var, s, at);
        }
        if (is_alnum(c)) {
            std::string s;
            while (!at_end() && is_alnum(peek())) {
                s += peek();
                advance();
            }
            return name_token(std::move(s), at);
        }
        if (c == '\'') {
            advance();
            return name_token(quoted('\'', at), at);
        }
        if (c == '"') {
            advance();
            return make(TokenKind::string, quoted('"', at), at);
        }
        if (c == '`') {
            advance();
            return make(TokenKind::back_quote, quoted('`', at), at);
        }
        if (c == '.' && (pos_ + 1 >= text_.size() || is_layout(peek(1)) || peek(1) == '%')) {
            advance();
            return make(TokenKind::end, ".", at);
        }
        if (is_graphic(c)) {
            std::string s;
            while (!at_end() && is_graphic(peek())) {
                s += peek();
                advance();
            }
            return name_token(std::move(s), at);
        }
        if (c == '!' || c == ';') {
            advance();
            return name_token(std::string(1, c), at);
        }
        if (c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == ',' || c == '|') {
            advance();
            return make(TokenKind::punct, std::string(1, c), at);
        }
        fail(std::string("unexpected character '") + c + "'", at);
    }

    Token name_token(std::string s, SourceLocation at)
    {
        return make(TokenKind::name, std::move(s), at);
    }

    // Reads an escape sequence after the backslash; appends UTF-8 to out.
    // Returns false for a line continuation.
    bool escape(std::string& out, SourceLocation at)
    {
        char c = peek();
        if (at_end())
            fail("unterminated escape sequence", at);
        advance();
        switch (c) {
        case 'n': out += '\n'; return true;
        case 't': out += '\t'; return true;
        case 'r': out += '\r'; return true;
        case 'a': out += '\a'; return true;
        case 'b': out += '\b'; return true;
        case 'f': out += '\f'; return true;
        case 'v': out += '\v'; return true;
        case 'e': out += '\x1b'; return true;
        case 's': out += ' '; return true;
        case '0': case '1': case '2': case '3': case '4': case '5': case '6': case '7': {
            std::uint32_t code = static_cast<std::uint32_t>(c - '0');
            while (peek() >= '0' && peek() <= '7') {
                code = code * 8 + static_cast<std::uint32_t>(peek() - '0');
                advance();
            }
            if (peek() == '\\')
                advance();
            append_utf8(out, code);
            return true;
        }
        case 'x': {
            std::uint32_t code = 0;
            bool any = false;
            while (std::isxdigit(static_cast<unsigned char>(peek()))) {
                char h = peek();
                code = code * 16 + static_cast<std::uint32_t>(is_digit(h) ? h - '0' : (std::tolower(h) - 'a' + 10));
                advance();
                any = true;
            }
            if (!any)
                fail("malformed hexadecimal escape", at);
            if (peek() == '\\')
                advance();
            append_utf8(out, code);
            return true;
        }
        case '\n':
            return false;
        case '\\': case '\'': case '"': case '`':
            out += c;
            return true;
        default:
            fail(std::string("undefined escape sequence \\") + c, at);
        }
    }

    std::string quoted(char q, SourceLocation at)
    {
        std::string s;
        for (;;) {
            if (at_end())
                fail("unterminated quoted text", at);
            char c = peek();
            advance();
            if (c == q) {
                if (peek() == q) {
                    s += q;
                    advance();
                    continue;
                }
                return s;
            }
            if (c == '\\') {
                escape(s, at);
                continue;
            }
            s += c;
        }
    }

    Token number(SourceLocation at)
    {
        if (peek() == '0' && peek(1) == '\'') {
            advance();
            advance();
            std::uint32_t code;
            if (peek() == '\\') {
                advance();
                std::string buf;
                if (!escape(buf, at))
                    fail("line continuation in character code", at);
                code = decode_utf8(buf).front();
            } else if (peek() == '\'') {
                advance();
                if (peek() == '\'')
                    advance();
                code = '\'';
            } else {
                if (at_end())
                    fail("missing character after 0'", at);
                std::size_t len = utf8_length(static_cast<unsigned char>(peek()));
                std::string buf;
                for (std::size_t i = 0; i < len && !at_end(); ++i) {
                    buf += peek();
                    advance();
                }
                code = decode_utf8(buf).front();
            }
            Token t = make(TokenKind::integer, "", at);
            t.ival = code;
            return t;
        }
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'o' || peek(1) == 'b')) {
            int base = peek(1) == 'x' ? 16 : (peek(1) == 'o' ? 8 : 2);
            auto digit = [base](char c) -> int {
                int v = is_digit(c) ? c - '0' : (std::isalpha(static_cast<unsigned char>(c)) ? std::tolower(c) - 'a' + 10 : 99);
                return v < base ? v : -1;
            };
            if (digit(peek(2)) >= 0) {
                advance();
                advance();
                return integer_digits(at, base, digit);
            }
        }
        std::string digits;
        while (is_digit(peek()) || (peek() == '_' && is_digit(peek(1)))) {
            if (peek() != '_')
                digits += peek();
            advance();
        }
        if (peek() == '.' && is_digit(peek(1))) {
            digits += '.';
            advance();
            while (is_digit(peek())) {
                digits += peek();
                advance();
            }
            if ((peek() == 'e' || peek() == 'E') &&
                (is_digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2))))) {
                digits += 'e';
                advance();
                if (peek() == '+' || peek() == '-') {
                    digits += peek();
                    advance();
                }
                while (is_digit(peek())) {
                    digits += peek();
                    advance();
                }
            }
            Token t = make(TokenKind::floating, digits, at);
            t.fval = std::stod(digits);
            return t;
        }
        return from_decimal(digits, at);
    }

    template <typename Digit>
    Token integer_digits(SourceLocation at, int base, Digit digit)
    {
        std::int64_t v = 0;
        bool overflow = false;
        double approx = 0;
        while (digit(peek()) >= 0) {
            int d = digit(peek());
            approx = approx * base + d;
            if (__builtin_mul_overflow(v, base, &v) || __builtin_add_overflow(v, d, &v))
                overflow = true;
            advance();
        }
        if (overflow) {
            Token t = make(TokenKind::floating, "", at);
            t.fval = approx;
            return t;
        }
        Token t = make(TokenKind::integer, "", at);
        t.ival = v;
        return t;
    }

    Token from_decimal(const std::string& digits, SourceLocation at)
    {
        std::int64_t v = 0;
        for (char c : digits) {
            if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, c - '0', &v)) {
                // Outside 64-bit range: promoted to float.
                Token t = make(TokenKind::floating, digits, at);
                t.fval = std::stod(digits);
                return t;
            }
        }
        Token t = make(TokenKind::integer, digits, at);
        t.ival = v;
        return t;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    SourceLocation where_;
};

} // namespace

std::vector<Token> tokenize(std::string_view text)
{
    return Lexer(text).run();
}

} // namespace plweb
