#pragma once

// Randomized suites shared by the unit tests and the acceptance binary. Each
// returns how many cases ran and the first counterexample, if any.

#include "oracles.hpp"
#include "random_terms.hpp"

#include "plweb/reader.hpp"
#include "plweb/unify.hpp"
#include "plweb/writer.hpp"

#include <string>

namespace plweb::testing {

struct SuiteResult {
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;

    bool ok() const { return failures == 0 && cases > 0; }
    void fail(const std::string& what)
    {
        if (failures++ == 0)
            first_failure = what;
    }
};

namespace detail {

// b shares structure with a, with some subterms swapped for variables or
// other random terms, so that a fair share of pairs unify.
inline Term perturb(TermGen& g, const Term& a, int depth)
{
    if (g.chance(15))
        return g.variable();
    if (g.chance(5))
        return g.term(depth);
    if (!a.is_compound())
        return a;
    std::vector<Term> args;
    for (const auto& x : a.args())
        args.push_back(perturb(g, x, depth - 1));
    return Term::compound(a.functor(), std::move(args));
}

inline std::string show(const Term& t)
{
    static const OperatorTable ops;
    return render_term(t, {true, true, false, 0}, ops);
}

} // namespace detail

// Checks unify() against a reference unifier: same success, results that
// make both sides identical, idempotence, symmetry and occurs-check failure.
inline SuiteResult unification_suite(std::size_t n, std::uint64_t seed)
{
    SuiteResult r;
    TermGen g(seed);
    g.exotic = false;
    for (std::size_t i = 0; i < n; ++i, ++r.cases) {
        Term a = g.term(4);
        Term b = g.chance(70) ? detail::perturb(g, a, 3) : g.term(4);
        std::string pair = detail::show(a) + " = " + detail::show(b);

        oracle::Robinson ref;
        bool expected = ref.unify(a, b);
        auto got = unify(a, b, true);
        if (got.has_value() != expected) {
            r.fail("success mismatch on " + pair);
            continue;
        }
        auto swapped = unify(b, a, true);
        if (swapped.has_value() != expected) {
            r.fail("not symmetric on " + pair);
            continue;
        }
        if (!got)
            continue;
        Term ua = got->apply(a), ub = got->apply(b);
        if (!(ua == ub)) {
            r.fail("unifier does not equate the sides of " + pair);
            continue;
        }
        if (!(got->apply(ua) == ua)) {
            r.fail("unifier is not idempotent on " + pair);
            continue;
        }
        if (!oracle::variant(ua, ref.resolve(a))) {
            r.fail("result is not a variant of the reference mgu on " + pair);
            continue;
        }
        if (!oracle::variant(swapped->apply(a), ua)) {
            r.fail("swapped unifier gives a different instance on " + pair);
            continue;
        }
    }
    // Occurs check: X against a compound containing X never unifies with
    // the check on, and does without it.
    for (std::size_t i = 0; i < n / 10; ++i, ++r.cases) {
        Term x = Term::var("X");
        Term inner = g.term(2);
        Term t = Term::compound("f", {inner, Term::list({x})});
        if (unify(x, t, true)) {
            r.fail("occurs check let X = " + detail::show(t) + " through");
            continue;
        }
        if (!unify(x, t, false))
            r.fail("X = " + detail::show(t) + " failed without the occurs check");
    }
    return r;
}

// writeq output parses back to the identical term.
inline SuiteResult roundtrip_suite(std::size_t n, std::uint64_t seed)
{
    SuiteResult r;
    TermGen g(seed);
    OperatorTable ops;
    for (std::size_t i = 0; i < n; ++i, ++r.cases) {
        Term t = g.term(4);
        std::string text = render_term(t, {true, false, false, 0}, ops);
        try {
            Term back = parse_term(text, ops).term;
            if (!(back == t))
                r.fail(text + " read back as " + detail::show(back) + " (expected " + detail::show(t) + ")");
        } catch (const std::exception& e) {
            r.fail(text + " does not parse: " + e.what());
        }
    }
    return r;
}

} // namespace plweb::testing
