#include "library.hpp"

#include "plweb/text.hpp"
#include "plweb/unify.hpp"
#include "plweb/writer.hpp"

#include <algorithm>
#include <cstdlib>

namespace plweb {

namespace {

using Native = bool (*)(Thread&, const PointPtr&, const Term&);

Term code_list(const std::string& s)
{
    std::vector<Term> items;
    for (auto c : decode_utf8(s))
        items.push_back(Term::integer(c));
    return Term::list(items);
}

Term char_list(const std::string& s)
{
    std::vector<Term> items;
    for (auto c : decode_utf8(s))
        items.push_back(Term::atom(utf8_encode(c)));
    return Term::list(items);
}

std::string number_text(const Term& n)
{
    return n.is_integer() ? std::to_string(n.int_value()) : format_float(n.float_value());
}

// Text of an atomic term, or nullopt.
std::optional<std::string> atomic_text(const Term& t)
{
    if (t.is_atom())
        return t.name();
    if (t.is_number())
        return number_text(t);
    return std::nullopt;
}

// Parses number syntax as number_codes/2 does; throws PrologError.
Term parse_number(const std::string& text, const Term& ctx)
{
    auto bad = [&] { throw PrologError{err::syntax("illegal_number", ctx)}; };
    std::vector<Token> toks;
    try {
        toks = tokenize(text);
    } catch (const SyntaxError&) {
        bad();
    }
    std::size_t i = 0;
    bool negative = false;
    if (i < toks.size() && toks[i].kind == TokenKind::name && toks[i].text == "-") {
        negative = true;
        ++i;
    }
    if (i >= toks.size() || (toks[i].kind != TokenKind::integer && toks[i].kind != TokenKind::floating))
        bad();
    if (negative && toks[i].layout_before)
        bad();
    const Token& tok = toks[i];
    if (i + 1 < toks.size() && toks[i + 1].kind != TokenKind::eof)
        bad();
    // Trailing layout is not allowed.
    if (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        bad();
    if (tok.kind == TokenKind::integer)
        return Term::integer(negative ? -tok.ival : tok.ival);
    return Term::floating(negative ? -tok.fval : tok.fval);
}

// Text from a code or char list; PrologError on malformed input.
std::optional<std::string> text_from_list(const Term& list, bool codes, const Term& ctx)
{
    std::string out;
    Term cur = list;
    while (cur.is_cons()) {
        const Term& item = cur.arg(0);
        if (item.is_var())
            return std::nullopt;
        if (codes) {
            if (!item.is_integer())
                throw PrologError{err::representation("character_code", ctx)};
            if (item.int_value() < 0 || item.int_value() > 0x10FFFF)
                throw PrologError{err::representation("character_code", ctx)};
            append_utf8(out, static_cast<std::uint32_t>(item.int_value()));
        } else {
            if (!item.is_atom() || utf8_count(item.name()) != 1)
                throw PrologError{err::type("character", item, ctx)};
            out += item.name();
        }
        cur = cur.arg(1);
    }
    if (cur.is_var())
        return std::nullopt;
    if (!cur.is_nil())
        throw PrologError{err::type("list", list, ctx)};
    return out;
}

bool guarded(Thread& t, const PointPtr& p, const Term& a, bool (*body)(Thread&, const PointPtr&, const Term&))
{
    try {
        return body(t, p, a);
    } catch (const PrologError& e) {
        t.throw_error(e.ball);
        return false;
    }
}

bool functor_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("functor", 3);
    const Term &term = a.arg(0), &name = a.arg(1), &arity = a.arg(2);
    if (!term.is_var()) {
        Term n = term.is_callable() ? Term::atom(term.functor()) : term;
        Term ar = Term::integer(term.is_callable() ? static_cast<std::int64_t>(term.arity()) : 0);
        std::vector<Term> x{name, arity}, y{n, ar};
        if (auto mgu = unify_sequences(x, y, t.occurs_check()))
            t.success(p, *mgu);
        return false;
    }
    if (name.is_var() || arity.is_var())
        return raise(t, err::instantiation(ctx));
    if (!arity.is_integer())
        return raise(t, err::type("integer", arity, ctx));
    if (arity.int_value() < 0)
        return raise(t, err::domain("not_less_than_zero", arity, ctx));
    if (arity.int_value() == 0) {
        if (!name.is_atomic())
            return raise(t, err::type("atomic", name, ctx));
        t.unify_and_continue(p, term, name);
        return false;
    }
    if (name.is_compound())
        return raise(t, err::type("atomic", name, ctx));
    if (!name.is_atom())
        return raise(t, err::type("atom", name, ctx));
    std::vector<Term> args;
    for (std::int64_t i = 0; i < arity.int_value(); ++i)
        args.push_back(Term::var(t.fresh().next()));
    t.unify_and_continue(p, term, Term::compound(name.functor(), std::move(args)));
    return false;
}

bool arg_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("arg", 3);
    const Term &n = a.arg(0), &term = a.arg(1), &value = a.arg(2);
    if (term.is_var())
        return raise(t, err::instantiation(ctx));
    if (!term.is_compound())
        return raise(t, err::type("compound", term, ctx));
    if (n.is_var()) {
        std::vector<PointPtr> states;
        for (std::size_t i = 0; i < term.arity(); ++i) {
            std::vector<Term> x{n, value}, y{Term::integer(static_cast<std::int64_t>(i + 1)), term.arg(i)};
            if (auto mgu = unify_sequences(x, y, t.occurs_check()))
                states.push_back(t.make_child(p, p->goal->next, *mgu));
        }
        t.prepend(std::move(states));
        return false;
    }
    if (!n.is_integer())
        return raise(t, err::type("integer", n, ctx));
    if (n.int_value() < 0)
        return raise(t, err::domain("not_less_than_zero", n, ctx));
    auto i = static_cast<std::size_t>(n.int_value());
    if (i >= 1 && i <= term.arity())
        t.unify_and_continue(p, value, term.arg(i - 1));
    return false;
}

bool univ_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("=..", 2);
    const Term &term = a.arg(0), &list = a.arg(1);
    if (!term.is_var()) {
        std::vector<Term> items;
        if (term.is_callable()) {
            items.push_back(Term::atom(term.functor()));
            items.insert(items.end(), term.args().begin(), term.args().end());
        } else {
            items.push_back(term);
        }
        t.unify_and_continue(p, list, Term::list(items));
        return false;
    }
    auto items = list_items(list);
    if (!items) {
        Term cur = list;
        while (cur.is_cons())
            cur = cur.arg(1);
        if (cur.is_var())
            return raise(t, err::instantiation(ctx));
        return raise(t, err::type("list", list, ctx));
    }
    if (items->empty())
        return raise(t, err::domain("non_empty_list", list, ctx));
    const Term& head = (*items)[0];
    if (head.is_var())
        return raise(t, err::instantiation(ctx));
    if (items->size() == 1) {
        if (head.is_compound())
            return raise(t, err::type("atomic", head, ctx));
        t.unify_and_continue(p, term, head);
        return false;
    }
    if (!head.is_atom())
        return raise(t, head.is_compound() ? err::type("atomic", head, ctx) : err::type("atom", head, ctx));
    t.unify_and_continue(p, term, Term::compound(head.functor(), std::vector<Term>(items->begin() + 1, items->end())));
    return false;
}

bool copy_term_goal(Thread& t, const PointPtr& p, const Term& a)
{
    t.unify_and_continue(p, a.arg(1), copy_term(a.arg(0), t.fresh()));
    return false;
}

bool atom_length_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("atom_length", 2);
    const Term &atom = a.arg(0), &len = a.arg(1);
    if (atom.is_var())
        return raise(t, err::instantiation(ctx));
    auto text = atomic_text(atom);
    if (!text || !atom.is_atom())
        return raise(t, err::type("atom", atom, ctx));
    if (!len.is_var()) {
        if (!len.is_integer())
            return raise(t, err::type("integer", len, ctx));
        if (len.int_value() < 0)
            return raise(t, err::domain("not_less_than_zero", len, ctx));
    }
    t.unify_and_continue(p, len, Term::integer(static_cast<std::int64_t>(utf8_count(*text))));
    return false;
}

// atom_codes/2, atom_chars/2, number_codes/2, number_chars/2.
template <bool Codes, bool Number>
bool text_convert(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = err::indicator(a);
    const Term &x = a.arg(0), &list = a.arg(1);
    if (!x.is_var()) {
        if (Number && !x.is_number())
            return raise(t, err::type("number", x, ctx));
        auto text = atomic_text(x);
        if (!text)
            return raise(t, err::type("atom", x, ctx));
        if (!Number && list.is_ground()) {
            // Verify the list shape before comparing.
            text_from_list(list, Codes, ctx);
        }
        t.unify_and_continue(p, list, Codes ? code_list(*text) : char_list(*text));
        return false;
    }
    auto text = text_from_list(list, Codes, ctx);
    if (!text)
        return raise(t, err::instantiation(ctx));
    if (Number)
        t.unify_and_continue(p, x, parse_number(*text, ctx));
    else
        t.unify_and_continue(p, x, Term::atom(*text));
    return false;
}

bool char_code_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("char_code", 2);
    const Term &c = a.arg(0), &code = a.arg(1);
    if (!c.is_var()) {
        if (!c.is_atom() || utf8_count(c.name()) != 1)
            return raise(t, err::type("character", c, ctx));
        t.unify_and_continue(p, code, Term::integer(decode_utf8(c.name())[0]));
        return false;
    }
    if (code.is_var())
        return raise(t, err::instantiation(ctx));
    if (!code.is_integer())
        return raise(t, err::type("integer", code, ctx));
    if (code.int_value() < 0 || code.int_value() > 0x10FFFF)
        return raise(t, err::representation("character_code", ctx));
    t.unify_and_continue(p, c, Term::atom(utf8_encode(static_cast<std::uint32_t>(code.int_value()))));
    return false;
}

bool atom_number_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("atom_number", 2);
    const Term &atom = a.arg(0), &num = a.arg(1);
    if (atom.is_var()) {
        if (num.is_var())
            return raise(t, err::instantiation(ctx));
        if (!num.is_number())
            return raise(t, err::type("number", num, ctx));
        t.unify_and_continue(p, atom, Term::atom(number_text(num)));
        return false;
    }
    if (!atom.is_atom())
        return raise(t, err::type("atom", atom, ctx));
    try {
        Term n = parse_number(atom.name(), ctx);
        t.unify_and_continue(p, num, n);
    } catch (const PrologError&) {
    }
    return false;
}

bool atom_concat_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("atom_concat", 3);
    const Term &x = a.arg(0), &y = a.arg(1), &z = a.arg(2);
    if (!x.is_var() && !y.is_var()) {
        auto tx = atomic_text(x), ty = atomic_text(y);
        if (!tx)
            return raise(t, err::type("atomic", x, ctx));
        if (!ty)
            return raise(t, err::type("atomic", y, ctx));
        t.unify_and_continue(p, z, Term::atom(*tx + *ty));
        return false;
    }
    if (z.is_var())
        return raise(t, err::instantiation(ctx));
    auto tz = atomic_text(z);
    if (!tz)
        return raise(t, err::type("atomic", z, ctx));
    auto codes = decode_utf8(*tz);
    std::vector<PointPtr> states;
    std::string left;
    for (std::size_t i = 0; i <= codes.size(); ++i) {
        std::string right;
        for (std::size_t j = i; j < codes.size(); ++j)
            append_utf8(right, codes[j]);
        std::vector<Term> pat{x, y}, val{Term::atom(left), Term::atom(right)};
        if (auto mgu = unify_sequences(pat, val, t.occurs_check()))
            states.push_back(t.make_child(p, p->goal->next, *mgu));
        if (i < codes.size())
            append_utf8(left, codes[i]);
    }
    t.prepend(std::move(states));
    return false;
}

bool sub_atom_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("sub_atom", 5);
    const Term& atom = a.arg(0);
    if (atom.is_var())
        return raise(t, err::instantiation(ctx));
    if (!atom.is_atom())
        return raise(t, err::type("atom", atom, ctx));
    for (std::size_t i = 1; i <= 3; ++i) {
        const Term& v = a.arg(i);
        if (!v.is_var() && !v.is_integer())
            return raise(t, err::type("integer", v, ctx));
    }
    const Term& sub = a.arg(4);
    if (!sub.is_var() && !sub.is_atom())
        return raise(t, err::type("atom", sub, ctx));
    auto codes = decode_utf8(atom.name());
    auto n = static_cast<std::int64_t>(codes.size());
    auto text_of = [&](std::int64_t b, std::int64_t l) {
        std::string s;
        for (std::int64_t i = b; i < b + l; ++i)
            append_utf8(s, codes[static_cast<std::size_t>(i)]);
        return s;
    };
    std::optional<std::int64_t> fb, fl, fa;
    if (a.arg(1).is_integer())
        fb = a.arg(1).int_value();
    if (a.arg(2).is_integer())
        fl = a.arg(2).int_value();
    if (a.arg(3).is_integer())
        fa = a.arg(3).int_value();
    std::optional<std::int64_t> sub_len;
    if (sub.is_atom())
        sub_len = static_cast<std::int64_t>(utf8_count(sub.name()));
    std::vector<PointPtr> states;
    for (std::int64_t b = 0; b <= n; ++b) {
        if (fb && *fb != b)
            continue;
        for (std::int64_t l = 0; b + l <= n; ++l) {
            if (fl && *fl != l)
                continue;
            if (sub_len && *sub_len != l)
                continue;
            std::int64_t after = n - b - l;
            if (fa && *fa != after)
                continue;
            std::string s = text_of(b, l);
            if (sub.is_atom() && sub.name() != s)
                continue;
            std::vector<Term> pat{a.arg(1), a.arg(2), a.arg(3), sub};
            std::vector<Term> val{Term::integer(b), Term::integer(l), Term::integer(after), Term::atom(s)};
            if (auto mgu = unify_sequences(pat, val, t.occurs_check()))
                states.push_back(t.make_child(p, p->goal->next, *mgu));
        }
    }
    t.prepend(std::move(states));
    return false;
}

template <bool Upper>
bool case_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = err::indicator(a);
    if (a.arg(0).is_var())
        return raise(t, err::instantiation(ctx));
    auto text = atomic_text(a.arg(0));
    if (!text)
        return raise(t, err::type("atom", a.arg(0), ctx));
    std::string out;
    for (auto c : decode_utf8(*text)) {
        if (c < 128)
            c = static_cast<std::uint32_t>(Upper ? std::toupper(static_cast<int>(c)) : std::tolower(static_cast<int>(c)));
        append_utf8(out, c);
    }
    t.unify_and_continue(p, a.arg(1), Term::atom(out));
    return false;
}

bool term_variables_goal(Thread& t, const PointPtr& p, const Term& a)
{
    std::vector<Term> vars;
    for (const auto& v : term_variables(a.arg(0)))
        vars.push_back(Term::var(v));
    t.unify_and_continue(p, a.arg(1), Term::list(vars));
    return false;
}

// Items of a proper list for sorting predicates, raising ISO errors.
std::optional<std::vector<Term>> sort_input(Thread& t, const Term& list, const Term& ctx)
{
    Term cur = list;
    std::vector<Term> items;
    while (cur.is_cons()) {
        items.push_back(cur.arg(0));
        cur = cur.arg(1);
    }
    if (cur.is_var()) {
        t.throw_error(err::instantiation(ctx));
        return std::nullopt;
    }
    if (!cur.is_nil()) {
        t.throw_error(err::type("list", list, ctx));
        return std::nullopt;
    }
    return items;
}

bool check_sorted_output(Thread& t, const Term& out, const Term& ctx)
{
    Term cur = out;
    while (cur.is_cons())
        cur = cur.arg(1);
    if (!cur.is_var() && !cur.is_nil()) {
        t.throw_error(err::type("list", out, ctx));
        return false;
    }
    return true;
}

bool msort_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = err::indicator(a);
    auto items = sort_input(t, a.arg(0), ctx);
    if (!items || !check_sorted_output(t, a.arg(1), ctx))
        return false;
    std::stable_sort(items->begin(), items->end(), [](const Term& x, const Term& y) { return compare_terms(x, y) < 0; });
    if (a.functor() == Symbol("sort")) {
        auto last = std::unique(items->begin(), items->end(),
                                [](const Term& x, const Term& y) { return compare_terms(x, y) == 0; });
        items->erase(last, items->end());
    }
    t.unify_and_continue(p, a.arg(1), Term::list(*items));
    return false;
}

bool sort4_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("sort", 4);
    const Term &key = a.arg(0), &order = a.arg(1);
    if (key.is_var() || order.is_var())
        return raise(t, err::instantiation(ctx));
    if (!key.is_integer() || key.int_value() < 0)
        return raise(t, err::type("integer", key, ctx));
    static const std::vector<std::string> orders{"@<", "@>", "@=<", "@>="};
    if (!order.is_atom() || std::find(orders.begin(), orders.end(), order.name()) == orders.end())
        return raise(t, err::domain("order", order, ctx));
    auto items = sort_input(t, a.arg(2), ctx);
    if (!items)
        return false;
    auto k = static_cast<std::size_t>(key.int_value());
    for (const Term& item : *items)
        if (k > 0 && (!item.is_compound() || item.arity() < k))
            return raise(t, err::type("compound", item, ctx));
    auto key_of = [k](const Term& x) -> const Term& { return k == 0 ? x : x.arg(k - 1); };
    const std::string& o = order.name();
    bool descending = o == "@>" || o == "@>=";
    std::stable_sort(items->begin(), items->end(), [&](const Term& x, const Term& y) {
        int c = compare_terms(key_of(x), key_of(y));
        return descending ? c > 0 : c < 0;
    });
    if (o == "@<" || o == "@>") {
        auto last = std::unique(items->begin(), items->end(),
                                [&](const Term& x, const Term& y) { return compare_terms(key_of(x), key_of(y)) == 0; });
        items->erase(last, items->end());
    }
    t.unify_and_continue(p, a.arg(3), Term::list(*items));
    return false;
}

bool keysort_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("keysort", 2);
    auto items = sort_input(t, a.arg(0), ctx);
    if (!items || !check_sorted_output(t, a.arg(1), ctx))
        return false;
    for (const Term& item : *items) {
        if (item.is_var())
            return raise(t, err::instantiation(ctx));
        if (!item.has_functor(sym::minus(), 2))
            return raise(t, err::type("pair", item, ctx));
    }
    std::stable_sort(items->begin(), items->end(),
                     [](const Term& x, const Term& y) { return compare_terms(x.arg(0), y.arg(0)) < 0; });
    t.unify_and_continue(p, a.arg(1), Term::list(*items));
    return false;
}

bool atomic_list_concat_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = err::indicator(a);
    bool with_sep = a.arity() == 3;
    std::string sep;
    if (with_sep) {
        if (a.arg(1).is_var())
            return raise(t, err::instantiation(ctx));
        auto s = atomic_text(a.arg(1));
        if (!s)
            return raise(t, err::type("atomic", a.arg(1), ctx));
        sep = *s;
    }
    const Term& result = a.arg(with_sep ? 2 : 1);
    auto items = list_items(a.arg(0));
    bool ground = items && std::all_of(items->begin(), items->end(), [](const Term& x) { return !x.is_var(); });
    if (ground) {
        std::string out;
        for (std::size_t i = 0; i < items->size(); ++i) {
            auto s = atomic_text((*items)[i]);
            if (!s)
                return raise(t, err::type("atomic", (*items)[i], ctx));
            if (i > 0)
                out += sep;
            out += *s;
        }
        t.unify_and_continue(p, result, Term::atom(out));
        return false;
    }
    // Split mode.
    if (!with_sep || sep.empty() || result.is_var())
        return raise(t, err::instantiation(ctx));
    auto whole = atomic_text(result);
    if (!whole)
        return raise(t, err::type("atomic", result, ctx));
    std::vector<Term> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = whole->find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(Term::atom(whole->substr(start)));
            break;
        }
        parts.push_back(Term::atom(whole->substr(start, pos - start)));
        start = pos + sep.size();
    }
    t.unify_and_continue(p, a.arg(0), Term::list(parts));
    return false;
}

bool numbervars_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("numbervars", 3);
    if (!a.arg(1).is_integer())
        return raise(t, a.arg(1).is_var() ? err::instantiation(ctx) : err::type("integer", a.arg(1), ctx));
    std::int64_t n = a.arg(1).int_value();
    Substitution s;
    for (const auto& v : term_variables(a.arg(0)))
        s.bind(v, Term::compound("$VAR", {Term::integer(n++)}));
    auto mgu = unify(a.arg(2), Term::integer(n), t.occurs_check());
    if (!mgu)
        return false;
    for (const auto& [v, val] : *mgu)
        s.bind(v, val);
    t.success(p, s);
    return false;
}

bool term_to_atom_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("term_to_atom", 2);
    const Term &term = a.arg(0), &atom = a.arg(1);
    if (atom.is_var()) {
        if (term.is_var())
            return raise(t, err::instantiation(ctx));
        t.unify_and_continue(p, atom, Term::atom(render_term(term, {true, false, true, 0}, t.session().operators())));
        return false;
    }
    if (!atom.is_atom())
        return raise(t, err::type("atom", atom, ctx));
    try {
        ReadResult r = parse_term(atom.name(), t.session().operators(), t.session().read_options());
        rename_read(r, t.fresh());
        t.unify_and_continue(p, term, r.term);
    } catch (const SyntaxError& e) {
        t.throw_error(syntax_error_ball(e));
    }
    return false;
}

bool atom_to_term_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("atom_to_term", 3);
    const Term& atom = a.arg(0);
    if (atom.is_var())
        return raise(t, err::instantiation(ctx));
    auto text = atomic_text(atom);
    if (!text)
        return raise(t, err::type("atom", atom, ctx));
    try {
        ReadResult r = parse_term(*text, t.session().operators(), t.session().read_options());
        rename_read(r, t.fresh());
        std::vector<Term> pairs;
        for (const auto& [name, id] : r.variable_names)
            pairs.push_back(Term::compound("=", {Term::atom(name), Term::var(id)}));
        std::vector<Term> pat{a.arg(1), a.arg(2)}, val{r.term, Term::list(pairs)};
        if (auto mgu = unify_sequences(pat, val, t.occurs_check()))
            t.success(p, *mgu);
    } catch (const SyntaxError& e) {
        t.throw_error(syntax_error_ball(e));
    }
    return false;
}

bool free_variable_set_goal(Thread& t, const PointPtr& p, const Term& a)
{
    const Term& spec = a.arg(0);
    std::vector<VarId> bound = term_variables(spec.arg(0));
    Term g = spec.arg(1);
    while (g.has_functor(Symbol("^"), 2)) {
        collect_variables(g.arg(0), bound);
        g = g.arg(1);
    }
    std::vector<Term> free;
    for (const auto& v : term_variables(g))
        if (std::find(bound.begin(), bound.end(), v) == bound.end())
            free.push_back(Term::var(v));
    std::vector<Term> pat{a.arg(1), a.arg(2)}, val{g, Term::list(free)};
    if (auto mgu = unify_sequences(pat, val, t.occurs_check()))
        t.success(p, *mgu);
    return false;
}

} // namespace

void rename_read(ReadResult& r, FreshVars& fresh)
{
    Substitution s;
    for (const auto& v : term_variables(r.term))
        s.bind(v, Term::var(fresh.next()));
    r.term = s.apply(r.term);
    for (auto& [name, id] : r.variable_names)
        if (const Term* v = s.find(id))
            id = v->var_id();
}

Term text_to_number(const std::string& text, const Term& ctx)
{
    return parse_number(text, ctx);
}

void install_system_terms(Module& m)
{
    auto def = [&m](std::string_view name, std::size_t arity, Native fn) {
        m.define_native(name, arity, [fn](Thread& t, const PointPtr& p, const Term& a) { return guarded(t, p, a, fn); });
    };
    def("functor", 3, functor_goal);
    def("arg", 3, arg_goal);
    def("=..", 2, univ_goal);
    def("copy_term", 2, copy_term_goal);
    def("atom_length", 2, atom_length_goal);
    def("atom_codes", 2, text_convert<true, false>);
    def("atom_chars", 2, text_convert<false, false>);
    def("number_codes", 2, text_convert<true, true>);
    def("number_chars", 2, text_convert<false, true>);
    def("char_code", 2, char_code_goal);
    def("atom_number", 2, atom_number_goal);
    def("atom_concat", 3, atom_concat_goal);
    def("sub_atom", 5, sub_atom_goal);
    def("upcase_atom", 2, case_goal<true>);
    def("downcase_atom", 2, case_goal<false>);
    def("term_variables", 2, term_variables_goal);
    def("msort", 2, msort_goal);
    def("sort", 2, msort_goal);
    def("sort", 4, sort4_goal);
    def("keysort", 2, keysort_goal);
    def("atomic_list_concat", 2, atomic_list_concat_goal);
    def("atomic_list_concat", 3, atomic_list_concat_goal);
    def("numbervars", 3, numbervars_goal);
    def("term_to_atom", 2, term_to_atom_goal);
    def("atom_to_term", 3, atom_to_term_goal);
    def("$free_variable_set", 2 + 1, free_variable_set_goal);
}

} // namespace plweb
