#include "library.hpp"

namespace plweb {

namespace {

Term wrap(Term formal, const Term& context)
{
    return Term::compound(sym::error(), {std::move(formal), context.empty() ? Term::var(VarId{Symbol("_"), 0}) : context});
}

} // namespace

Term make_indicator(std::string_view name, std::size_t arity)
{
    return Term::compound("/", {Term::atom(name), Term::integer(static_cast<std::int64_t>(arity))});
}

namespace err {

Term instantiation(const Term& context)
{
    return wrap(Term::atom("instantiation_error"), context);
}

Term type(std::string_view type, const Term& culprit, const Term& context)
{
    return wrap(Term::compound("type_error", {Term::atom(type), culprit}), context);
}

Term domain(std::string_view domain, const Term& culprit, const Term& context)
{
    return wrap(Term::compound("domain_error", {Term::atom(domain), culprit}), context);
}

Term existence(std::string_view kind, const Term& culprit, const Term& context)
{
    return wrap(Term::compound("existence_error", {Term::atom(kind), culprit}), context);
}

Term permission(std::string_view action, std::string_view type, const Term& culprit, const Term& context)
{
    return wrap(Term::compound("permission_error", {Term::atom(action), Term::atom(type), culprit}), context);
}

Term representation(std::string_view what, const Term& context)
{
    return wrap(Term::compound("representation_error", {Term::atom(what)}), context);
}

Term evaluation(std::string_view what, const Term& context)
{
    return wrap(Term::compound("evaluation_error", {Term::atom(what)}), context);
}

Term syntax(std::string_view detail, const Term& context)
{
    return wrap(Term::compound("syntax_error", {Term::atom(detail)}), context);
}

Term system(std::string_view description, const Term& context)
{
    return wrap(Term::compound("system_error", {Term::atom(description)}), context);
}

Term indicator(const Term& atom)
{
    return make_indicator(atom.name(), atom.arity());
}

} // namespace err

Term syntax_error_ball(const SyntaxError& e)
{
    const auto& w = e.where();
    Term where = Term::compound("-", {Term::compound("line", {Term::integer(static_cast<std::int64_t>(w.line))}),
                                      Term::compound("column", {Term::integer(static_cast<std::int64_t>(w.column))})});
    return err::syntax(e.detail(), where);
}

std::optional<Term> normalize_body(const Term& body)
{
    if (body.is_var())
        return Term::compound("call", {body});
    if (!body.is_callable())
        return std::nullopt;
    static const Symbol comma = sym::comma(), semi(";"), arrow("->"), soft("*->");
    if (body.arity() == 2 && (body.functor() == comma || body.functor() == semi || body.functor() == arrow ||
                              body.functor() == soft)) {
        // Iterate along right-nested conjunctions to keep deep bodies off the stack.
        std::vector<Term> lefts;
        std::vector<Symbol> ops;
        Term cur = body;
        while (cur.is_callable() && cur.arity() == 2 &&
               (cur.functor() == comma || cur.functor() == semi || cur.functor() == arrow || cur.functor() == soft)) {
            auto l = normalize_body(cur.arg(0));
            if (!l)
                return std::nullopt;
            lefts.push_back(*l);
            ops.push_back(cur.functor());
            cur = cur.arg(1);
        }
        auto r = normalize_body(cur);
        if (!r)
            return std::nullopt;
        Term out = *r;
        for (std::size_t i = lefts.size(); i-- > 0;)
            out = Term::compound(ops[i], {lefts[i], out});
        return out;
    }
    return body;
}

} // namespace plweb
