#include "library.hpp"

#include "plweb/unify.hpp"

namespace plweb {

namespace {

// Module that user-level database changes from this goal apply to.
Module& target_module(Thread& t, const PointPtr& p, Term& clause)
{
    Session& s = t.session();
    const Module* m = p->goal->module;
    while (clause.has_functor(sym::colon(), 2) && clause.arg(0).is_atom()) {
        m = &s.module(clause.arg(0).name());
        clause = clause.arg(1);
    }
    if (!m || m->is_library())
        return s.user();
    return *const_cast<Module*>(m);
}

void split_clause(const Term& c, Term& head, Term& body)
{
    if (c.has_functor(sym::clause_neck(), 2)) {
        head = c.arg(0);
        body = c.arg(1);
    } else {
        head = c;
        body = Term::atom(sym::true_());
    }
}

bool assert_goal(Thread& t, const PointPtr& p, const Term& a, bool at_end)
{
    Term clause = a.arg(0);
    Module& m = target_module(t, p, clause);
    if (auto e = t.session().add_clause(m, clause, at_end, err::indicator(a)))
        return raise(t, *e);
    t.success(p);
    return false;
}

// Locates a user-modifiable predicate for clause/retract; raises when the
// predicate is built in.
std::optional<Predicate*> access_predicate(Thread& t, const PointPtr& p, Term& head, const Term& ctx,
                                           std::string_view action, Module** owner)
{
    Module& m = target_module(t, p, head);
    if (head.is_var()) {
        t.throw_error(err::instantiation(ctx));
        return std::nullopt;
    }
    if (!head.is_callable()) {
        t.throw_error(err::type("callable", head, ctx));
        return std::nullopt;
    }
    PredicateIndicator pi = PredicateIndicator::of(head);
    Session& s = t.session();
    auto [defining, pred] = s.resolve(pi, &m);
    if (pred && (pred->is_native() || (defining && defining->is_library()))) {
        t.throw_error(err::permission(action, action == "access" ? "private_procedure" : "static_procedure",
                                      pi.to_term(), ctx));
        return std::nullopt;
    }
    *owner = defining ? defining : &m;
    return pred;
}

Term erase_goal(const Module& m, const PredicateIndicator& pi, std::uint64_t id)
{
    return Term::compound("$erase", {Term::atom(m.name()), pi.to_term(), Term::integer(static_cast<std::int64_t>(id))});
}

bool retract_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("retract", 1);
    Term head, body;
    Term clause = a.arg(0);
    Module* owner = nullptr;
    Module& m = target_module(t, p, clause);
    split_clause(clause, head, body);
    auto pred = access_predicate(t, p, head, ctx, "modify", &owner);
    if (!pred)
        return false;
    (void)m;
    if (!*pred)
        return false;
    PredicateIndicator pi = PredicateIndicator::of(head);
    std::vector<PointPtr> states;
    for (const auto& stored : (*pred)->clauses()) {
        Clause c = rename_clause(stored->clause, t.fresh());
        std::vector<Term> pattern{head, body};
        std::vector<Term> actual{c.head, c.body};
        auto mgu = unify_sequences(pattern, actual, t.occurs_check());
        if (!mgu)
            continue;
        GoalList g = push_goal(erase_goal(*owner, pi, stored->id), 0, p->goal->module, p->goal->next);
        states.push_back(t.make_child(p, g, *mgu));
    }
    t.prepend(std::move(states));
    return false;
}

bool clause_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("clause", 2);
    Term head = a.arg(0);
    const Term& body = a.arg(1);
    if (!body.is_var() && !body.is_callable())
        return raise(t, err::type("callable", body, ctx));
    Module* owner = nullptr;
    auto pred = access_predicate(t, p, head, ctx, "access", &owner);
    if (!pred || !*pred)
        return false;
    std::vector<PointPtr> states;
    for (const auto& stored : (*pred)->clauses()) {
        Clause c = rename_clause(stored->clause, t.fresh());
        std::vector<Term> pattern{head, body};
        std::vector<Term> actual{c.head, c.body};
        if (auto mgu = unify_sequences(pattern, actual, t.occurs_check()))
            states.push_back(t.make_child(p, p->goal->next, *mgu));
    }
    t.prepend(std::move(states));
    return false;
}

std::optional<PredicateIndicator> indicator_arg(Thread& t, const Term& spec, const Term& ctx)
{
    if (spec.is_var()) {
        t.throw_error(err::instantiation(ctx));
        return std::nullopt;
    }
    if (!spec.has_functor(Symbol("/"), 2)) {
        t.throw_error(err::type("predicate_indicator", spec, ctx));
        return std::nullopt;
    }
    const Term &n = spec.arg(0), &ar = spec.arg(1);
    if (n.is_var() || ar.is_var()) {
        t.throw_error(err::instantiation(ctx));
        return std::nullopt;
    }
    if (!n.is_atom()) {
        t.throw_error(err::type("atom", n, ctx));
        return std::nullopt;
    }
    if (!ar.is_integer()) {
        t.throw_error(err::type("integer", ar, ctx));
        return std::nullopt;
    }
    if (ar.int_value() < 0) {
        t.throw_error(err::domain("not_less_than_zero", ar, ctx));
        return std::nullopt;
    }
    return PredicateIndicator{n.functor(), static_cast<std::size_t>(ar.int_value())};
}

bool dynamic_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = err::indicator(a);
    std::vector<Term> specs;
    Term cur = a.arg(0);
    while (cur.has_functor(sym::comma(), 2)) {
        specs.push_back(cur.arg(0));
        cur = cur.arg(1);
    }
    if (auto items = list_items(cur); items && !cur.is_nil())
        specs.insert(specs.end(), items->begin(), items->end());
    else
        specs.push_back(cur);
    for (Term spec : specs) {
        Module& m = target_module(t, p, spec);
        auto pi = indicator_arg(t, spec, ctx);
        if (!pi)
            return false;
        if (auto e = t.session().check_modifiable(m, *pi, ctx))
            return raise(t, *e);
        if (a.functor() == Symbol("dynamic"))
            m.define(*pi).dynamic = true;
    }
    t.success(p);
    return false;
}

} // namespace

void install_database(Module& m)
{
    m.define_native("assert", 1, [](Thread& t, const PointPtr& p, const Term& a) { return assert_goal(t, p, a, true); });
    m.define_native("assertz", 1, [](Thread& t, const PointPtr& p, const Term& a) { return assert_goal(t, p, a, true); });
    m.define_native("asserta", 1, [](Thread& t, const PointPtr& p, const Term& a) { return assert_goal(t, p, a, false); });
    m.define_native("retract", 1, retract_goal);
    m.define_native("clause", 2, clause_goal);
    m.define_native("$erase", 3, [](Thread& t, const PointPtr& p, const Term& a) {
        Module* m = t.session().find_module(a.arg(0).name());
        const Term& pi = a.arg(1);
        Predicate* pred = m ? m->find({pi.arg(0).functor(), static_cast<std::size_t>(pi.arg(1).int_value())}) : nullptr;
        // Already removed by someone else: retract fails for this clause.
        if (pred && pred->erase(static_cast<std::uint64_t>(a.arg(2).int_value())))
            t.success(p);
        return false;
    });
    m.define_native("abolish", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        Term ctx = make_indicator("abolish", 1);
        Term spec = a.arg(0);
        Module& m = target_module(t, p, spec);
        auto pi = indicator_arg(t, spec, ctx);
        if (!pi)
            return false;
        if (auto e = t.session().check_modifiable(m, *pi, ctx))
            return raise(t, *e);
        m.remove(*pi);
        t.success(p);
        return false;
    });
    m.define_native("retractall", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        Term ctx = make_indicator("retractall", 1);
        Term head = a.arg(0);
        Module& m = target_module(t, p, head);
        if (head.is_var())
            return raise(t, err::instantiation(ctx));
        if (!head.is_callable())
            return raise(t, err::type("callable", head, ctx));
        PredicateIndicator pi = PredicateIndicator::of(head);
        if (auto e = t.session().check_modifiable(m, pi, ctx))
            return raise(t, *e);
        Predicate& pred = m.define(pi);
        if (pred.clauses().empty())
            pred.dynamic = true;
        std::vector<std::uint64_t> doomed;
        for (const auto& stored : pred.clauses())
            if (unify(head, rename_clause(stored->clause, t.fresh()).head, t.occurs_check()))
                doomed.push_back(stored->id);
        for (auto id : doomed)
            pred.erase(id);
        t.success(p);
        return false;
    });
    m.define_native("dynamic", 1, dynamic_goal);
    m.define_native("discontiguous", 1, dynamic_goal);
    m.define_native("multifile", 1, dynamic_goal);
}

} // namespace plweb
