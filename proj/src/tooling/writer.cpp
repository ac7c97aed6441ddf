#include "plweb/writer.hpp"

#include "plweb/text.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace plweb {

namespace {

bool is_graphic(char c)
{
    return std::strchr("#$&*+-./:<=>?@^~\\", c) != nullptr && c != '\0';
}

bool is_alnum(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || (static_cast<unsigned char>(c) >= 0x80);
}

bool is_letter_atom(const std::string& s)
{
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0])))
        return false;
    for (char c : s)
        if (!is_alnum(c))
            return false;
    return true;
}

bool is_graphic_atom(const std::string& s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!is_graphic(c))
            return false;
    // A lone `.` or a leading `/*` would be read differently.
    return s != "." && s.rfind("/*", 0) != 0;
}

std::string escape_quoted(const std::string& s)
{
    std::string out = "'";
    for (char c : s) {
        switch (c) {
        case '\'':
            out += "\\'";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\t':
            out += "\\t";
            break;
        case '\r':
            out += "\\r";
            break;
        case '\a':
            out += "\\a";
            break;
        case '\b':
            out += "\\b";
            break;
        case '\f':
            out += "\\f";
            break;
        case '\v':
            out += "\\v";
            break;
        case '\0':
            out += "\\0\\";
            break;
        default:
            out += c;
        }
    }
    return out + "'";
}

std::string var_name(std::int64_t n)
{
    std::string s(1, static_cast<char>('A' + n % 26));
    if (n >= 26)
        s += std::to_string(n / 26);
    return s;
}

class Writer {
public:
    Writer(const WriteOptions& o, const OperatorTable& ops) : o_(o), ops_(ops) {}

    std::string run(const Term& t, int priority)
    {
        write(t, priority, 0);
        return std::move(out_);
    }

private:
    // Appends a token, inserting a space where the previous token would glue.
    void emit(const std::string& s)
    {
        if (s.empty())
            return;
        if (!out_.empty()) {
            char a = out_.back(), b = s.front();
            bool glue = (is_graphic(a) && is_graphic(b)) || (is_alnum(a) && is_alnum(b));
            if (glue)
                out_ += ' ';
        }
        out_ += s;
    }

    std::string atom_text(const std::string& name) const
    {
        if (!o_.quoted)
            return name;
        return quote_atom_if_needed(name);
    }

    int atom_priority(const std::string& name) const
    {
        int p = 0;
        if (auto d = ops_.prefix(name))
            p = std::max(p, d->priority);
        if (auto d = ops_.infix(name))
            p = std::max(p, d->priority);
        if (auto d = ops_.postfix(name))
            p = std::max(p, d->priority);
        return p;
    }

    void write_atom(const Term& t, int max)
    {
        const std::string& name = t.name();
        if (!o_.ignore_ops && max < 1200 && atom_priority(name) > max && name != "[]" && name != "{}") {
            emit("(");
            out_ += atom_text(name);
            out_ += ")";
            return;
        }
        emit(atom_text(name));
    }

    void write_number(const Term& t)
    {
        emit(t.is_integer() ? std::to_string(t.int_value()) : format_float(t.float_value()));
    }

    void write(const Term& t, int max, std::size_t depth)
    {
        if (o_.max_depth && depth >= o_.max_depth) {
            emit("...");
            return;
        }
        switch (t.kind()) {
        case Term::Kind::Variable:
            emit(t.var_id().text());
            return;
        case Term::Kind::Number:
            write_number(t);
            return;
        case Term::Kind::Host:
            emit("host<" + t.host_ref()->kind() + ">");
            return;
        case Term::Kind::Compound:
            break;
        }
        if (t.is_atom()) {
            write_atom(t, max);
            return;
        }
        if (t.is_cons()) {
            write_list(t, depth);
            return;
        }
        const std::string& name = t.name();
        if (o_.numbervars && t.arity() == 1 && name == "$VAR") {
            const Term& a = t.arg(0);
            if (a.is_integer() && a.int_value() >= 0) {
                emit(var_name(a.int_value()));
                return;
            }
            if (a.is_atom()) {
                emit(a.name());
                return;
            }
        }
        if (!o_.ignore_ops) {
            if (t.arity() == 1 && name == "{}") {
                emit("{");
                write(t.arg(0), 1200, depth + 1);
                out_ += "}";
                return;
            }
            if (t.arity() == 2) {
                if (auto d = ops_.infix(name)) {
                    write_infix(t, *d, max, depth);
                    return;
                }
            }
            if (t.arity() == 1) {
                if (auto d = ops_.prefix(name)) {
                    write_prefix(t, *d, max, depth);
                    return;
                }
                if (auto d = ops_.postfix(name)) {
                    write_postfix(t, *d, max, depth);
                    return;
                }
            }
        }
        emit(atom_text(name));
        out_ += "(";
        for (std::size_t i = 0; i < t.arity(); ++i) {
            if (i > 0)
                out_ += ",";
            write_argument(t.arg(i), depth + 1);
        }
        out_ += ")";
    }

    void write_list(const Term& t, std::size_t depth)
    {
        emit("[");
        const Term* cur = &t;
        std::size_t i = 0;
        for (;;) {
            if (o_.max_depth && i >= o_.max_depth) {
                out_ += "...";
                break;
            }
            write_argument(cur->arg(0), depth + 1);
            const Term& tail = cur->arg(1);
            if (tail.is_cons()) {
                out_ += ",";
                cur = &tail;
                ++i;
                continue;
            }
            if (!tail.is_nil()) {
                out_ += "|";
                write_argument(tail, depth + 1);
            }
            break;
        }
        out_ += "]";
    }

    void write_infix(const Term& t, OpDef d, int max, std::size_t depth)
    {
        int p = d.priority;
        int lmax = d.type == OpType::yfx ? p : p - 1;
        int rmax = d.type == OpType::xfy ? p : p - 1;
        bool wrap = p > max;
        if (wrap)
            emit("(");
        write_operand(t.arg(0), lmax, depth + 1);
        const std::string& name = t.name();
        if (name == ",") {
            out_ += ",";
        } else if (name == "|") {
            out_ += "|";
        } else {
            std::string op = atom_text(name);
            bool alpha = is_alnum(op.front());
            if (alpha || name == "->" || name == ":-" || name == "-->") {
                out_ += ' ';
                out_ += op;
                out_ += ' ';
            } else {
                emit(op);
            }
        }
        write_operand(t.arg(1), rmax, depth + 1);
        if (wrap)
            out_ += ")";
    }

    void write_prefix(const Term& t, OpDef d, int max, std::size_t depth)
    {
        int p = d.priority;
        int amax = d.type == OpType::fy ? p : p - 1;
        const Term& a = t.arg(0);
        bool wrap = p > max;
        if (wrap)
            emit("(");
        const std::string& name = t.name();
        emit(atom_text(name));
        bool operand_wrapped = operand_priority(a) > amax;
        // `- 1` is the compound, `-1` the number; `-(a,b)` would read as
        // functional notation.
        if (a.is_number() || operand_wrapped || is_alnum(out_.back()) ||
            (a.is_atom() && atom_priority(a.name()) > 0))
            out_ += ' ';
        if (operand_wrapped) {
            out_ += "(";
            write(a, 1200, depth + 1);
            out_ += ")";
        } else {
            std::size_t at = out_.size();
            write_operand(a, amax, depth + 1);
            // The operand may itself start with a bracket, `- (a)^b`, or
            // with a number that the sign would attach to, `- 1^a`.
            if (at < out_.size() && out_[at - 1] != ' ' &&
                (out_[at] == '(' || ((name == "-" || name == "+") && std::isdigit(static_cast<unsigned char>(out_[at])))))
                out_.insert(at, " ");
        }
        if (wrap)
            out_ += ")";
    }

    void write_postfix(const Term& t, OpDef d, int max, std::size_t depth)
    {
        int p = d.priority;
        int amax = d.type == OpType::yf ? p : p - 1;
        bool wrap = p > max;
        if (wrap)
            emit("(");
        write_operand(t.arg(0), amax, depth + 1);
        emit(atom_text(t.name()));
        if (wrap)
            out_ += ")";
    }

    // Between argument delimiters an operator atom can stand alone: f(;, -).
    void write_argument(const Term& a, std::size_t depth)
    {
        if (a.is_atom() && !(o_.max_depth && depth >= o_.max_depth))
            emit(atom_text(a.name()));
        else
            write(a, 999, depth);
    }

    // An operator atom next to another operator is bracketed: `- (-)`.
    void write_operand(const Term& a, int max, std::size_t depth)
    {
        if (a.is_atom() && !o_.ignore_ops && atom_priority(a.name()) > 0) {
            emit("(");
            out_ += atom_text(a.name());
            out_ += ")";
            return;
        }
        write(a, max, depth);
    }

    int operand_priority(const Term& t) const
    {
        if (o_.ignore_ops || !t.is_callable())
            return 0;
        if (t.is_atom())
            return atom_priority(t.name());
        if (t.is_cons() || t.has_functor(sym::curly(), 1))
            return 0;
        if (t.arity() == 2)
            if (auto d = ops_.infix(t.name()))
                return d->priority;
        if (t.arity() == 1) {
            if (auto d = ops_.prefix(t.name()))
                return d->priority;
            if (auto d = ops_.postfix(t.name()))
                return d->priority;
        }
        return 0;
    }

    const WriteOptions& o_;
    const OperatorTable& ops_;
    std::string out_;
};

} // namespace

std::string quote_atom_if_needed(const std::string& name)
{
    if (name == "[]" || name == "{}" || name == "!" || name == ";" || is_letter_atom(name) || is_graphic_atom(name))
        return name;
    return escape_quoted(name);
}

std::string format_float(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v)
            break;
    }
    std::string s = buf;
    auto e = s.find_first_of("eE");
    std::string mantissa = e == std::string::npos ? s : s.substr(0, e);
    std::string exponent = e == std::string::npos ? "" : s.substr(e + 1);
    if (mantissa.find('.') == std::string::npos)
        mantissa += ".0";
    if (exponent.empty())
        return mantissa;
    if (exponent[0] == '+')
        exponent.erase(0, 1);
    return mantissa + "e" + exponent;
}

std::string render_term(const Term& t, const WriteOptions& options, const OperatorTable& ops, int priority)
{
    Writer w(options, ops);
    return w.run(t, priority);
}

Term resolve_for_display(const Term& t, const Substitution& s, std::size_t limit)
{
    if (limit == 0)
        return Term::atom("...");
    if (t.is_var()) {
        if (const Term* v = s.find(t.var_id()); v && !(v->is_var() && v->var_id() == t.var_id()))
            return resolve_for_display(*v, s, limit - 1);
        return t;
    }
    if (!t.is_compound() || t.is_ground())
        return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const Term& a : t.args())
        args.push_back(resolve_for_display(a, s, limit));
    return Term::compound(t.functor(), std::move(args));
}

} // namespace plweb
