#include "library.hpp"

#include <algorithm>
#include <cmath>

namespace plweb {

namespace {

bool random3(Thread& t, const PointPtr& p, const Term& atom)
{
    const Term &lower = atom.arg(0), &upper = atom.arg(1), &rand = atom.arg(2);
    Term ctx = err::indicator(atom);
    if (lower.is_var() || upper.is_var())
        return raise(t, err::instantiation(ctx));
    if (!lower.is_number())
        return raise(t, err::type("number", lower, ctx));
    if (!upper.is_number())
        return raise(t, err::type("number", upper, ctx));
    if (!rand.is_var() && !rand.is_number())
        return raise(t, err::type("number", rand, ctx));
    if (lower.as_double() < upper.as_double()) {
        bool is_float = lower.is_float() || upper.is_float();
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(t.session().rng());
        double gen = lower.as_double() + u * (upper.as_double() - lower.as_double());
        Term value = is_float ? Term::floating(gen) : Term::integer(static_cast<std::int64_t>(std::floor(gen)));
        t.replace(p, Term::compound("=", {rand, value}));
    }
    return false;
}

bool random1(Thread& t, const PointPtr& p, const Term& atom)
{
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(t.session().rng());
    t.unify_and_continue(p, atom.arg(0), Term::floating(u));
    return false;
}

bool random_between(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    const Term &lo = atom.arg(0), &hi = atom.arg(1);
    if (lo.is_var() || hi.is_var())
        return raise(t, err::instantiation(ctx));
    if (!lo.is_integer())
        return raise(t, err::type("integer", lo, ctx));
    if (!hi.is_integer())
        return raise(t, err::type("integer", hi, ctx));
    if (lo.int_value() > hi.int_value())
        return false;
    std::uniform_int_distribution<std::int64_t> d(lo.int_value(), hi.int_value());
    t.unify_and_continue(p, atom.arg(2), Term::integer(d(t.session().rng())));
    return false;
}

bool random_member(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    auto items = list_items(atom.arg(1));
    if (!items)
        return raise(t, err::type("list", atom.arg(1), ctx));
    if (items->empty())
        return false;
    std::uniform_int_distribution<std::size_t> d(0, items->size() - 1);
    t.unify_and_continue(p, atom.arg(0), (*items)[d(t.session().rng())]);
    return false;
}

bool random_permutation(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    auto items = list_items(atom.arg(0));
    if (!items)
        return raise(t, err::type("list", atom.arg(0), ctx));
    std::shuffle(items->begin(), items->end(), t.session().rng());
    t.unify_and_continue(p, atom.arg(1), Term::list(*items));
    return false;
}

bool set_random(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    const Term& opt = atom.arg(0);
    if (opt.is_var())
        return raise(t, err::instantiation(ctx));
    if (opt.has_functor(Symbol("seed"), 1) && opt.arg(0).is_integer()) {
        t.session().seed(static_cast<std::uint64_t>(opt.arg(0).int_value()));
        t.success(p);
        return false;
    }
    return raise(t, err::domain("set_random", opt, ctx));
}

} // namespace

void install_random(Session& s)
{
    Module& m = s.module("random");
    m.export_all(true);
    m.define_native("random", 3, random3);
    m.define_native("random", 1, random1);
    m.define_native("random_between", 3, random_between);
    m.define_native("random_member", 2, random_member);
    m.define_native("random_permutation", 2, random_permutation);
    m.define_native("set_random", 1, set_random);
}

} // namespace plweb
