#include "plweb/reader.hpp"
#include "plweb/substitution.hpp"

#include <stdexcept>

namespace plweb {

namespace {

Term eq(const Term& a, const Term& b) { return Term::compound("=", {a, b}); }
Term conj(const Term& a, const Term& b) { return Term::compound(sym::comma(), {a, b}); }

Term extend(const Term& callable, const Term& s0, const Term& s)
{
    std::vector<Term> args = callable.args();
    args.push_back(s0);
    args.push_back(s);
    return Term::compound(callable.functor(), std::move(args));
}

// s0 = [t1, ..., tn | s]
Term terminals(const Term& list, const Term& s0, const Term& s)
{
    auto items = list_items(list);
    if (!items)
        throw std::invalid_argument("dcg terminal list is not a proper list");
    return eq(s0, Term::list(*items, s));
}

} // namespace

Term translate_dcg_body(const Term& body, const Term& s0, const Term& s, FreshVars& fresh)
{
    if (body.is_var())
        return Term::compound("phrase", {body, s0, s});
    if (!body.is_callable())
        throw std::invalid_argument("dcg body is not callable: " + std::string(body.is_number() ? "number" : "host value"));
    if (body.has_functor(sym::comma(), 2)) {
        Term mid = Term::var(fresh.next());
        return conj(translate_dcg_body(body.arg(0), s0, mid, fresh), translate_dcg_body(body.arg(1), mid, s, fresh));
    }
    if (body.has_functor(Symbol(";"), 2) || body.has_functor(Symbol("|"), 2))
        return Term::compound(";", {translate_dcg_body(body.arg(0), s0, s, fresh),
                                    translate_dcg_body(body.arg(1), s0, s, fresh)});
    if (body.has_functor(Symbol("->"), 2)) {
        Term mid = Term::var(fresh.next());
        return Term::compound("->", {translate_dcg_body(body.arg(0), s0, mid, fresh),
                                     translate_dcg_body(body.arg(1), mid, s, fresh)});
    }
    if (body.has_functor(Symbol("\\+"), 1)) {
        Term ignored = Term::var(fresh.next());
        return conj(Term::compound("\\+", {translate_dcg_body(body.arg(0), s0, ignored, fresh)}), eq(s0, s));
    }
    if (body.is_atom(Symbol("!")))
        return conj(body, eq(s0, s));
    if (body.is_nil())
        return eq(s0, s);
    if (body.has_functor(sym::curly(), 1))
        return conj(body.arg(0), eq(s0, s));
    if (body.is_cons())
        return terminals(body, s0, s);
    if (body.functor() == Symbol("call") && body.arity() >= 1)
        return extend(body, s0, s);
    return extend(body, s0, s);
}

Term translate_dcg_rule(const Term& rule)
{
    if (!rule.has_functor(Symbol("-->"), 2))
        throw std::invalid_argument("not a grammar rule");
    FreshVars fresh;
    Term head = rule.arg(0);
    Term pushback;
    if (head.has_functor(sym::comma(), 2)) {
        pushback = head.arg(1);
        head = head.arg(0);
    }
    if (head.is_var() || !head.is_callable())
        throw std::invalid_argument("grammar rule head must be callable");
    Term s0 = Term::var(fresh.next());
    Term s = Term::var(fresh.next());
    Term body;
    if (pushback.empty()) {
        body = translate_dcg_body(rule.arg(1), s0, s, fresh);
    } else {
        Term mid = Term::var(fresh.next());
        body = conj(translate_dcg_body(rule.arg(1), s0, mid, fresh), terminals(pushback, s, mid));
    }
    return Term::compound(sym::clause_neck(), {extend(head, s0, s), body});
}

} // namespace plweb
