#include "library.hpp"

#include "plweb/unify.hpp"

namespace plweb {

namespace {

const GoalNode& node(const PointPtr& p)
{
    return *p->goal;
}

// Appends extra arguments to a callable; nullopt when g is not callable.
std::optional<Term> add_args(const Term& g, std::span<const Term> extra)
{
    if (!g.is_callable())
        return std::nullopt;
    std::vector<Term> args = g.args();
    args.insert(args.end(), extra.begin(), extra.end());
    return Term::compound(g.functor(), std::move(args));
}

// Peels Module:Goal qualifications.
const Module* strip_module(Session& s, Term& goal, const Module* context)
{
    while (goal.has_functor(sym::colon(), 2) && goal.arg(0).is_atom()) {
        context = &s.module(goal.arg(0).name());
        goal = goal.arg(1);
    }
    return context;
}

bool call_n(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    Term goal = atom.arg(0);
    const Module* m = strip_module(t.session(), goal, node(p).module);
    if (goal.is_var())
        return raise(t, err::instantiation(ctx));
    auto full = add_args(goal, std::span<const Term>(atom.args()).subspan(1));
    if (!full)
        return raise(t, err::type("callable", goal, ctx));
    auto normal = normalize_body(*full);
    if (!normal)
        return raise(t, err::type("callable", *full, ctx));
    t.replace_in(p, *normal, m, t.height());
    return false;
}

bool conjunction(Thread& t, const PointPtr& p, const Term& atom)
{
    const GoalNode& g = node(p);
    GoalList rest = push_goal(atom.arg(1), g.cut_barrier, g.module, g.next);
    t.push(t.make_child(p, push_goal(atom.arg(0), g.cut_barrier, g.module, rest), {}));
    return false;
}

bool disjunction(Thread& t, const PointPtr& p, const Term& atom)
{
    const GoalNode& g = node(p);
    const Term& left = atom.arg(0);
    std::size_t h = t.height();
    PointPtr alt = t.make_child(p, push_goal(atom.arg(1), g.cut_barrier, g.module, g.next), {});
    if (left.has_functor(Symbol("->"), 2)) {
        t.push(alt);
        GoalList then = push_goal(left.arg(1), g.cut_barrier, g.module, g.next);
        GoalList cut = push_goal(Term::compound("$cut", {Term::integer(static_cast<std::int64_t>(h))}), 0, g.module,
                                 then);
        t.push(t.make_child(p, push_goal(left.arg(0), h + 1, g.module, cut), {}));
        return false;
    }
    if (left.has_functor(Symbol("*->"), 2)) {
        t.push(alt);
        std::uint64_t serial = t.points().back()->serial;
        GoalList then = push_goal(left.arg(1), g.cut_barrier, g.module, g.next);
        GoalList soft = push_goal(Term::compound("$softcut", {Term::integer(static_cast<std::int64_t>(serial))}), 0,
                                  g.module, then);
        t.push(t.make_child(p, push_goal(left.arg(0), h + 1, g.module, soft), {}));
        return false;
    }
    PointPtr main = t.make_child(p, push_goal(left, g.cut_barrier, g.module, g.next), {});
    t.prepend({main, alt});
    return false;
}

bool if_then(Thread& t, const PointPtr& p, const Term& atom)
{
    const GoalNode& g = node(p);
    std::size_t h = t.height();
    GoalList then = push_goal(atom.arg(1), g.cut_barrier, g.module, g.next);
    if (atom.functor() == Symbol("->"))
        then = push_goal(Term::compound("$cut", {Term::integer(static_cast<std::int64_t>(h))}), 0, g.module, then);
    t.push(t.make_child(p, push_goal(atom.arg(0), h, g.module, then), {}));
    return false;
}

bool not_provable(Thread& t, const PointPtr& p, const Term& atom)
{
    const GoalNode& g = node(p);
    std::size_t h = t.height();
    t.push(t.make_child(p, g.next, {}));
    GoalList fail = push_goal(Term::atom(sym::fail()), 0, g.module, nullptr);
    GoalList cut = push_goal(Term::compound("$cut", {Term::integer(static_cast<std::int64_t>(h))}), 0, g.module, fail);
    t.push(t.make_child(p, push_goal(Term::compound("call", {atom.arg(0)}), h + 1, g.module, cut), {}));
    return false;
}

bool catch_goal(Thread& t, const PointPtr& p, const Term& atom)
{
    const GoalNode& g = node(p);
    auto frame = std::make_shared<CatchFrame>();
    frame->id = t.next_catch_id();
    frame->catcher = atom.arg(1);
    frame->recovery = atom.arg(2);
    frame->continuation = g.next;
    frame->cut_barrier = g.cut_barrier;
    frame->module = g.module;
    auto marker = std::make_shared<ChoicePoint>();
    marker->bindings = p->bindings;
    marker->parent = p;
    marker->catch_frame = frame;
    t.push(marker);
    GoalList exit = push_goal(Term::compound("$catch_exit", {Term::integer(static_cast<std::int64_t>(frame->id))}), 0,
                              g.module, g.next);
    t.push(t.make_child(p, push_goal(Term::compound("call", {atom.arg(0)}), t.height(), g.module, exit), {}));
    return false;
}

bool findall_goal(Thread& t, const PointPtr& p, const Term& atom)
{
    const GoalNode& g = node(p);
    Term ctx = err::indicator(atom);
    const Term& result = atom.arg(2);
    Term tail = result;
    while (tail.is_cons())
        tail = tail.arg(1);
    if (!tail.is_var() && !tail.is_nil())
        return raise(t, err::type("list", result, ctx));
    std::uint64_t id = t.next_findall_id();
    Term idt = Term::integer(static_cast<std::int64_t>(id));
    std::vector<Term> done_args{idt, result};
    if (atom.arity() == 4)
        done_args.push_back(atom.arg(3));
    t.push(t.make_child(p, push_goal(Term::compound("$findall_done", done_args), g.cut_barrier, g.module, g.next), {}));
    GoalList fail = push_goal(Term::atom(sym::fail()), 0, g.module, nullptr);
    GoalList collect = push_goal(Term::compound("$findall_collect", {idt, atom.arg(0)}), 0, g.module, fail);
    t.push(t.make_child(p, push_goal(Term::compound("call", {atom.arg(1)}), 0, g.module, collect), {}));
    return false;
}

bool between_goal(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = make_indicator("between", 3);
    const Term &lo = atom.arg(0), &hi = atom.arg(1), &x = atom.arg(2);
    if (lo.is_var() || hi.is_var())
        return raise(t, err::instantiation(ctx));
    if (!lo.is_integer())
        return raise(t, err::type("integer", lo, ctx));
    bool infinite = hi.is_atom() && (hi.name() == "inf" || hi.name() == "infinite");
    if (!infinite && !hi.is_integer())
        return raise(t, err::type("integer", hi, ctx));
    if (!x.is_var() && !x.is_integer())
        return raise(t, err::type("integer", x, ctx));
    std::int64_t l = lo.int_value();
    std::int64_t h = infinite ? INT64_MAX : hi.int_value();
    if (l > h)
        return false;
    if (x.is_integer()) {
        if (x.int_value() >= l && x.int_value() <= h)
            t.success(p);
        return false;
    }
    Substitution s;
    s.bind(x.var_id(), Term::integer(l));
    PointPtr first = t.make_child(p, node(p).next, s);
    if (l == h) {
        t.push(first);
        return false;
    }
    Term next = Term::compound("between", {Term::integer(l + 1), hi, x});
    PointPtr rest = t.make_child(p, push_goal(next, node(p).cut_barrier, node(p).module, node(p).next), {});
    t.prepend({first, rest});
    return false;
}

} // namespace

void install_control(Module& m)
{
    m.define_native("true", 0, [](Thread& t, const PointPtr& p, const Term&) {
        t.success(p);
        return false;
    });
    m.define_native("otherwise", 0, [](Thread& t, const PointPtr& p, const Term&) {
        t.success(p);
        return false;
    });
    m.define_native("fail", 0, [](Thread&, const PointPtr&, const Term&) { return false; });
    m.define_native("false", 0, [](Thread&, const PointPtr&, const Term&) { return false; });
    m.define_native(",", 2, conjunction);
    m.define_native(";", 2, disjunction);
    m.define_native("|", 2, disjunction);
    m.define_native("->", 2, if_then);
    m.define_native("*->", 2, if_then);
    m.define_native("\\+", 1, not_provable);
    m.define_native("not", 1, not_provable);
    m.define_native("!", 0, [](Thread& t, const PointPtr& p, const Term&) {
        t.cut(node(p).cut_barrier);
        t.success(p);
        return false;
    });
    m.define_native("$cut", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        t.cut(static_cast<std::size_t>(a.arg(0).int_value()));
        t.success(p);
        return false;
    });
    m.define_native("$softcut", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        t.remove_point(static_cast<std::uint64_t>(a.arg(0).int_value()));
        t.success(p);
        return false;
    });
    for (std::size_t n = 1; n <= 8; ++n)
        m.define_native("call", n, call_n);
    m.define_native(":", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        if (a.arg(0).is_var())
            return raise(t, err::instantiation(make_indicator(":", 2)));
        if (!a.arg(0).is_atom())
            return raise(t, err::type("atom", a.arg(0), make_indicator(":", 2)));
        t.replace_in(p, a.arg(1), &t.session().module(a.arg(0).name()), node(p).cut_barrier);
        return false;
    });
    m.define_native("catch", 3, catch_goal);
    m.define_native("$catch_exit", 1, [](Thread& t, const PointPtr& p, const Term&) {
        t.success(p);
        return false;
    });
    m.define_native("throw", 1, [](Thread& t, const PointPtr&, const Term& a) {
        if (a.arg(0).is_var())
            return raise(t, err::instantiation(make_indicator("throw", 1)));
        return raise(t, a.arg(0));
    });
    m.define_native("findall", 3, findall_goal);
    m.define_native("findall", 4, findall_goal);
    m.define_native("$findall_collect", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        auto id = static_cast<std::uint64_t>(a.arg(0).int_value());
        t.findall_bucket(id).push_back(copy_term(a.arg(1), t.fresh()));
        t.success(p);
        return false;
    });
    m.define_native("$findall_done", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        auto id = static_cast<std::uint64_t>(a.arg(0).int_value());
        std::vector<Term> items = std::move(t.findall_bucket(id));
        t.drop_findall_bucket(id);
        t.unify_and_continue(p, a.arg(1), Term::list(items));
        return false;
    });
    m.define_native("$findall_done", 3, [](Thread& t, const PointPtr& p, const Term& a) {
        auto id = static_cast<std::uint64_t>(a.arg(0).int_value());
        std::vector<Term> items = std::move(t.findall_bucket(id));
        t.drop_findall_bucket(id);
        t.unify_and_continue(p, a.arg(1), Term::list(items, a.arg(2)));
        return false;
    });
    m.define_native("between", 3, between_goal);
    m.define_native("halt", 0, [](Thread& t, const PointPtr&, const Term&) {
        t.session().halt(0);
        t.cut(0);
        return false;
    });
    m.define_native("halt", 1, [](Thread& t, const PointPtr&, const Term& a) {
        if (a.arg(0).is_var())
            return raise(t, err::instantiation(make_indicator("halt", 1)));
        if (!a.arg(0).is_integer())
            return raise(t, err::type("integer", a.arg(0), make_indicator("halt", 1)));
        t.session().halt(static_cast<int>(a.arg(0).int_value()));
        t.cut(0);
        return false;
    });
}

} // namespace plweb
