#include "library.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace plweb {

namespace {

struct Eval {
    Session& session;
    Term context;

    [[noreturn]] void fail(Term ball) const { throw PrologError{std::move(ball)}; }

    Term flt(double v) const
    {
        if (std::isnan(v))
            fail(err::evaluation("undefined", context));
        if (std::isinf(v))
            fail(err::evaluation("float_overflow", context));
        return Term::floating(v);
    }

    std::int64_t need_int(const Term& t) const
    {
        if (!t.is_integer())
            fail(err::type("integer", t, context));
        return t.int_value();
    }

    Term promote(double v) const
    {
        session.note_overflow();
        return flt(v);
    }

    Term to_integer(double v) const
    {
        if (std::isnan(v) || std::isinf(v))
            fail(err::evaluation("undefined", context));
        if (v >= 9.2233720368547758e18 || v < -9.2233720368547758e18)
            return promote(v);
        return Term::integer(static_cast<std::int64_t>(v));
    }

    Term eval(const Term& e)
    {
        if (e.is_var())
            fail(err::instantiation(context));
        if (e.is_number())
            return e;
        if (!e.is_callable())
            fail(err::type("evaluable", e, context));
        const std::string& f = e.name();
        if (e.arity() == 0)
            return constant(e, f);
        if (e.is_cons() && e.arg(1).is_nil())
            return eval(e.arg(0));
        if (e.arity() == 1)
            return unary(e, f, eval(e.arg(0)));
        if (e.arity() == 2) {
            Term a = eval(e.arg(0));
            Term b = eval(e.arg(1));
            return binary(e, f, a, b);
        }
        fail(err::type("evaluable", make_indicator(f, e.arity()), context));
    }

    Term constant(const Term& e, const std::string& f)
    {
        if (f == "pi")
            return Term::floating(M_PI);
        if (f == "e")
            return Term::floating(M_E);
        if (f == "inf" || f == "infinite")
            return Term::floating(std::numeric_limits<double>::infinity());
        if (f == "nan")
            return Term::floating(std::numeric_limits<double>::quiet_NaN());
        if (f == "epsilon")
            return Term::floating(std::numeric_limits<double>::epsilon());
        if (f == "max_tagged_integer")
            return Term::integer(std::numeric_limits<std::int64_t>::max());
        if (f == "random")
            return Term::floating(std::uniform_real_distribution<double>(0.0, 1.0)(session.rng()));
        if (f == "cputime")
            return Term::floating(static_cast<double>(std::clock()) / CLOCKS_PER_SEC);
        if (f == "[]")
            fail(err::type("evaluable", e, context));
        fail(err::type("evaluable", make_indicator(f, 0), context));
    }

    Term unary(const Term& e, const std::string& f, const Term& x)
    {
        bool i = x.is_integer();
        double d = x.as_double();
        if (f == "-") {
            if (i) {
                if (x.int_value() == std::numeric_limits<std::int64_t>::min())
                    return promote(-d);
                return Term::integer(-x.int_value());
            }
            return flt(-d);
        }
        if (f == "+")
            return x;
        if (f == "abs") {
            if (i) {
                if (x.int_value() == std::numeric_limits<std::int64_t>::min())
                    return promote(-d);
                return Term::integer(std::llabs(x.int_value()));
            }
            return flt(std::fabs(d));
        }
        if (f == "sign") {
            if (i)
                return Term::integer((x.int_value() > 0) - (x.int_value() < 0));
            return flt(d > 0 ? 1.0 : d < 0 ? -1.0 : 0.0);
        }
        if (f == "sqrt") {
            if (d < 0)
                fail(err::evaluation("undefined", context));
            return flt(std::sqrt(d));
        }
        if (f == "sin")
            return flt(std::sin(d));
        if (f == "cos")
            return flt(std::cos(d));
        if (f == "tan")
            return flt(std::tan(d));
        if (f == "asin")
            return flt(std::asin(d));
        if (f == "acos")
            return flt(std::acos(d));
        if (f == "atan")
            return flt(std::atan(d));
        if (f == "exp")
            return flt(std::exp(d));
        if (f == "log") {
            if (d <= 0) {
                if (d == 0)
                    fail(err::evaluation("undefined", context));
                fail(err::evaluation("undefined", context));
            }
            return flt(std::log(d));
        }
        if (f == "float")
            return flt(d);
        if (f == "integer")
            return i ? x : to_integer(std::round(d));
        if (f == "float_integer_part")
            return flt(std::trunc(need_float(x)));
        if (f == "float_fractional_part") {
            double v = need_float(x);
            return flt(v - std::trunc(v));
        }
        if (f == "truncate")
            return i ? x : to_integer(std::trunc(d));
        if (f == "round")
            return i ? x : to_integer(std::round(d));
        if (f == "ceiling")
            return i ? x : to_integer(std::ceil(d));
        if (f == "floor")
            return i ? x : to_integer(std::floor(d));
        if (f == "\\")
            return Term::integer(~need_int(x));
        if (f == "msb") {
            std::int64_t v = need_int(x);
            if (v <= 0)
                fail(err::type("not_less_than_one", x, context));
            return Term::integer(63 - __builtin_clzll(static_cast<unsigned long long>(v)));
        }
        if (f == "succ") {
            std::int64_t r;
            if (__builtin_add_overflow(need_int(x), 1, &r))
                return promote(d + 1);
            return Term::integer(r);
        }
        if (f == "random") {
            std::int64_t n = need_int(x);
            if (n <= 0)
                fail(err::domain("positive_integer", x, context));
            return Term::integer(std::uniform_int_distribution<std::int64_t>(0, n - 1)(session.rng()));
        }
        if (f == "random_float")
            return Term::floating(std::uniform_real_distribution<double>(0.0, 1.0)(session.rng()));
        (void)e;
        fail(err::type("evaluable", make_indicator(f, 1), context));
    }

    double need_float(const Term& x) const
    {
        if (!x.is_float())
            fail(err::type("float", x, context));
        return x.float_value();
    }

    Term int_pow(std::int64_t base, std::int64_t exp, double approx)
    {
        if (exp < 0) {
            if (base == 1)
                return Term::integer(1);
            if (base == -1)
                return Term::integer(exp % 2 == 0 ? 1 : -1);
            if (base == 0)
                fail(err::evaluation("zero_divisor", context));
            fail(err::type("float", Term::integer(base), context));
        }
        std::int64_t result = 1;
        std::int64_t b = base;
        std::int64_t e = exp;
        while (e > 0) {
            if (e & 1)
                if (__builtin_mul_overflow(result, b, &result))
                    return promote(approx);
            e >>= 1;
            if (e > 0 && __builtin_mul_overflow(b, b, &b))
                return promote(approx);
        }
        return Term::integer(result);
    }

    Term binary(const Term& e, const std::string& f, const Term& a, const Term& b)
    {
        bool ints = a.is_integer() && b.is_integer();
        double x = a.as_double(), y = b.as_double();
        if (f == "+") {
            std::int64_t r;
            if (ints)
                return __builtin_add_overflow(a.int_value(), b.int_value(), &r) ? promote(x + y) : Term::integer(r);
            return flt(x + y);
        }
        if (f == "-") {
            std::int64_t r;
            if (ints)
                return __builtin_sub_overflow(a.int_value(), b.int_value(), &r) ? promote(x - y) : Term::integer(r);
            return flt(x - y);
        }
        if (f == "*") {
            std::int64_t r;
            if (ints)
                return __builtin_mul_overflow(a.int_value(), b.int_value(), &r) ? promote(x * y) : Term::integer(r);
            return flt(x * y);
        }
        if (f == "/") {
            if (y == 0 && (ints || b.is_integer()))
                fail(err::evaluation("zero_divisor", context));
            if (y == 0)
                fail(err::evaluation("zero_divisor", context));
            if (ints && a.int_value() % b.int_value() == 0 &&
                !(a.int_value() == std::numeric_limits<std::int64_t>::min() && b.int_value() == -1))
                return Term::integer(a.int_value() / b.int_value());
            return flt(x / y);
        }
        if (f == "//" || f == "mod" || f == "rem" || f == "div") {
            std::int64_t p = need_int(a), q = need_int(b);
            if (q == 0)
                fail(err::evaluation("zero_divisor", context));
            if (q == -1 && p == std::numeric_limits<std::int64_t>::min()) {
                if (f == "//" || f == "div")
                    return promote(-x);
                return Term::integer(0);
            }
            if (f == "//")
                return Term::integer(p / q);
            if (f == "rem")
                return Term::integer(p % q);
            std::int64_t m = p % q;
            if (m != 0 && ((m < 0) != (q < 0)))
                m += q;
            if (f == "mod")
                return Term::integer(m);
            return Term::integer((p - m) / q);
        }
        if (f == "min")
            return compare_numbers(a, b) <= 0 ? a : b;
        if (f == "max")
            return compare_numbers(a, b) >= 0 ? a : b;
        if (f == "**") {
            if (ints)
                return int_pow(a.int_value(), b.int_value(), std::pow(x, y));
            if (x == 0 && y < 0)
                fail(err::evaluation("zero_divisor", context));
            return flt(std::pow(x, y));
        }
        if (f == "^") {
            if (ints)
                return int_pow(a.int_value(), b.int_value(), std::pow(x, y));
            if (x == 0 && y < 0)
                fail(err::evaluation("zero_divisor", context));
            return flt(std::pow(x, y));
        }
        if (f == "atan2" || f == "atan")
            return flt(std::atan2(x, y));
        if (f == "copysign")
            return flt(std::copysign(x, y));
        if (f == "log") {
            if (x <= 0 || y <= 0)
                fail(err::evaluation("undefined", context));
            return flt(std::log(y) / std::log(x));
        }
        if (f == ">>")
            return Term::integer(need_int(a) >> need_int(b));
        if (f == "<<") {
            std::int64_t v = need_int(a), s = need_int(b);
            if (s >= 63 || (s > 0 && (v > (std::numeric_limits<std::int64_t>::max() >> s) ||
                                      v < (std::numeric_limits<std::int64_t>::min() >> s))))
                return promote(std::ldexp(x, static_cast<int>(s)));
            return Term::integer(static_cast<std::int64_t>(static_cast<std::uint64_t>(v) << s));
        }
        if (f == "/\\")
            return Term::integer(need_int(a) & need_int(b));
        if (f == "\\/")
            return Term::integer(need_int(a) | need_int(b));
        if (f == "xor")
            return Term::integer(need_int(a) ^ need_int(b));
        if (f == "gcd")
            return Term::integer(std::gcd(need_int(a), need_int(b)));
        if (f == "truncate")
            return to_integer(std::trunc(x));
        (void)e;
        fail(err::type("evaluable", make_indicator(f, 2), context));
    }
};

bool compare_goal(Thread& t, const PointPtr& p, const Term& atom, bool (*test)(int))
{
    Term context = err::indicator(atom);
    try {
        Term a = evaluate(t.session(), atom.arg(0), context);
        Term b = evaluate(t.session(), atom.arg(1), context);
        if (test(compare_numbers(a, b)))
            t.success(p);
    } catch (const PrologError& e) {
        t.throw_error(e.ball);
    }
    return false;
}

} // namespace

Term evaluate(Session& s, const Term& expr, const Term& context)
{
    Eval ev{s, context};
    return ev.eval(expr);
}

int compare_numbers(const Term& a, const Term& b)
{
    if (a.is_integer() && b.is_integer())
        return (a.int_value() > b.int_value()) - (a.int_value() < b.int_value());
    double x = a.as_double(), y = b.as_double();
    return (x > y) - (x < y);
}

void install_arith(Module& m)
{
    m.define_native("is", 2, [](Thread& t, const PointPtr& p, const Term& atom) {
        try {
            Term v = evaluate(t.session(), atom.arg(1), make_indicator("is", 2));
            t.unify_and_continue(p, atom.arg(0), v);
        } catch (const PrologError& e) {
            t.throw_error(e.ball);
        }
        return false;
    });
    m.define_native("=:=", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        return compare_goal(t, p, a, [](int c) { return c == 0; });
    });
    m.define_native("=\\=", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        return compare_goal(t, p, a, [](int c) { return c != 0; });
    });
    m.define_native("<", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        return compare_goal(t, p, a, [](int c) { return c < 0; });
    });
    m.define_native(">", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        return compare_goal(t, p, a, [](int c) { return c > 0; });
    });
    m.define_native("=<", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        return compare_goal(t, p, a, [](int c) { return c <= 0; });
    });
    m.define_native(">=", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        return compare_goal(t, p, a, [](int c) { return c >= 0; });
    });
    m.define_native("succ", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        Term ctx = make_indicator("succ", 2);
        const Term& x = a.arg(0);
        const Term& y = a.arg(1);
        if (x.is_var() && y.is_var())
            return raise(t, err::instantiation(ctx));
        if (!x.is_var()) {
            if (!x.is_integer())
                return raise(t, err::type("integer", x, ctx));
            if (x.int_value() < 0)
                return raise(t, err::type("not_less_than_zero", x, ctx));
            t.unify_and_continue(p, y, Term::integer(x.int_value() + 1));
            return false;
        }
        if (!y.is_integer())
            return raise(t, err::type("integer", y, ctx));
        if (y.int_value() < 0)
            return raise(t, err::type("not_less_than_zero", y, ctx));
        if (y.int_value() > 0)
            t.unify_and_continue(p, x, Term::integer(y.int_value() - 1));
        return false;
    });
    m.define_native("plus", 3, [](Thread& t, const PointPtr& p, const Term& a) {
        Term ctx = make_indicator("plus", 3);
        const Term &x = a.arg(0), &y = a.arg(1), &z = a.arg(2);
        try {
            if (!x.is_var() && !y.is_var())
                t.unify_and_continue(p, z, evaluate(t.session(), Term::compound("+", {x, y}), ctx));
            else if (!x.is_var() && !z.is_var())
                t.unify_and_continue(p, y, evaluate(t.session(), Term::compound("-", {z, x}), ctx));
            else if (!y.is_var() && !z.is_var())
                t.unify_and_continue(p, x, evaluate(t.session(), Term::compound("-", {z, y}), ctx));
            else
                t.throw_error(err::instantiation(ctx));
        } catch (const PrologError& e) {
            t.throw_error(e.ball);
        }
        return false;
    });
}

} // namespace plweb
