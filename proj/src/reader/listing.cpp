#include "plweb/reader.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace plweb {

namespace {

void quote(std::string& out, const std::string& s)
{
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

std::string number_text(double v)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void emit(std::string& out, const Term& t)
{
    switch (t.kind()) {
    case Term::Kind::Variable: {
        auto id = t.var_id();
        out += "new Var(";
        quote(out, id.name.str());
        if (id.serial != 0)
            out += ", " + std::to_string(id.serial);
        out += ")";
        return;
    }
    case Term::Kind::Number:
        out += "new Num(";
        out += t.is_float() ? number_text(t.float_value()) : std::to_string(t.int_value());
        out += t.is_float() ? ", true)" : ", false)";
        return;
    case Term::Kind::Compound:
        out += "new Term(";
        quote(out, t.name());
        out += ", [";
        for (std::size_t i = 0; i < t.arity(); ++i) {
            if (i)
                out += ", ";
            emit(out, t.arg(i));
        }
        out += "])";
        return;
    case Term::Kind::Host:
        throw std::invalid_argument("host values cannot be compiled");
    }
}

class ListingParser {
public:
    explicit ListingParser(std::string_view s) : s_(s) {}

    std::vector<Clause> clauses()
    {
        std::vector<Clause> out;
        expect('[');
        if (!try_consume(']')) {
            do
                out.push_back(rule());
            while (try_consume(','));
            expect(']');
        }
        skip();
        if (pos_ != s_.size())
            error("trailing text");
        return out;
    }

private:
    [[noreturn]] void error(const std::string& what) const
    {
        throw std::invalid_argument("listing: " + what + " at offset " + std::to_string(pos_));
    }

    void skip()
    {
        while (pos_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            } else if (s_.compare(pos_, 2, "//") == 0) {
                while (pos_ < s_.size() && s_[pos_] != '\n')
                    ++pos_;
            } else {
                break;
            }
        }
    }

    bool try_consume(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!try_consume(c))
            error(std::string("expected '") + c + "'");
    }

    std::string identifier()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' || s_[pos_] == '_'))
            ++pos_;
        std::string id(s_.substr(start, pos_ - start));
        if (id == "new")
            return identifier();
        if (auto dot = id.rfind('.'); dot != std::string::npos)
            id = id.substr(dot + 1); // pl.type.Term
        return id;
    }

    std::string string_literal()
    {
        skip();
        if (pos_ >= s_.size() || s_[pos_] != '"')
            error("expected string");
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            char c = s_[pos_++];
            if (c != '\\') {
                out += c;
                continue;
            }
            if (pos_ >= s_.size())
                error("bad escape");
            char e = s_[pos_++];
            switch (e) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case 'u': {
                unsigned v = 0;
                std::from_chars(s_.data() + pos_, s_.data() + pos_ + 4, v, 16);
                pos_ += 4;
                out += static_cast<char>(v);
                break;
            }
            default: out += e;
            }
        }
        if (pos_ >= s_.size())
            error("unterminated string");
        ++pos_;
        return out;
    }

    std::string number_token()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                    s_[pos_] == '-' || s_[pos_] == '+'))
            ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    Clause rule()
    {
        if (identifier() != "Rule")
            error("expected Rule");
        expect('(');
        Term head = term();
        expect(',');
        Term body;
        skip();
        if (s_.compare(pos_, 4, "null") == 0) {
            pos_ += 4;
            body = Term::atom(sym::true_());
        } else {
            body = term();
        }
        expect(')');
        return {head, body};
    }

    Term term()
    {
        std::string kind = identifier();
        expect('(');
        Term out;
        if (kind == "Var") {
            std::string name = string_literal();
            std::uint64_t serial = 0;
            if (try_consume(','))
                serial = std::stoull(number_token());
            out = Term::var(VarId{Symbol(name), serial});
        } else if (kind == "Num") {
            std::string value = number_token();
            expect(',');
            bool is_float = identifier() == "true";
            out = is_float ? Term::floating(std::stod(value)) : Term::integer(std::stoll(value));
        } else if (kind == "Term") {
            std::string name = string_literal();
            std::vector<Term> args;
            if (try_consume(',')) {
                expect('[');
                if (!try_consume(']')) {
                    do
                        args.push_back(term());
                    while (try_consume(','));
                    expect(']');
                }
            }
            out = Term::compound(name, std::move(args));
        } else {
            error("unknown constructor " + kind);
        }
        expect(')');
        return out;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

std::string compile_clauses(const std::vector<Clause>& clauses)
{
    std::string out = "[\n";
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        out += "    new Rule(\n        ";
        emit(out, clauses[i].head);
        out += ",\n        ";
        if (clauses[i].is_fact())
            out += "null";
        else
            emit(out, clauses[i].body);
        out += "\n    )";
        out += i + 1 < clauses.size() ? ",\n" : "\n";
    }
    out += "]";
    return out;
}

std::vector<Clause> parse_listing(std::string_view listing)
{
    return ListingParser(listing).clauses();
}

} // namespace plweb
