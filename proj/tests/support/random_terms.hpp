#pragma once

#include "plweb/term.hpp"

#include <limits>
#include <random>
#include <string>
#include <vector>

namespace plweb::testing {

// Random terms for property tests. Atoms and functors include ones that need
// quoting and ones that are operators, so the writer has to work for them.
class TermGen {
public:
    explicit TermGen(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64& rng() { return rng_; }

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    bool chance(int percent) { return pick(100) < percent; }

    Term variable()
    {
        static const char* names[] = {"X", "Y", "Z", "W", "Acc", "_P", "Q1", "_"};
        const char* n = names[pick(with_anonymous ? 8 : 7)];
        if (std::string(n) == "_")
            return Term::var(VarId{Symbol("_"), 0});
        return Term::var(n);
    }

    Term atom()
    {
        static const char* plain[] = {"a", "b", "foo", "nil", "x_1", "[]", "{}", "!", ";"};
        static const char* odd[] = {"hello world", "A", "_x", "don't", "", "back\\slash", "new\nline",
                                    "+", "-", "*", "=", ":-", ",", "|", "\\+", "is", "-->", "é", "[", "}"};
        if (!exotic || chance(60))
            return Term::atom(plain[pick(9)]);
        return Term::atom(odd[pick(20)]);
    }

    Term number()
    {
        switch (pick(6)) {
        case 0: return Term::integer(pick(10));
        case 1: return Term::integer(-pick(1000) - 1);
        case 2: return Term::integer(std::numeric_limits<std::int64_t>::max() - pick(3));
        case 3: return Term::integer(std::numeric_limits<std::int64_t>::min() + 1 + pick(3));
        case 4: {
            static const double fs[] = {0.5, -2.25, 1.0e10, 3.0e-7, 1.5e300, 0.1, 123456.789, -0.0};
            return Term::floating(fs[pick(8)]);
        }
        default: return Term::integer(pick(1'000'000));
        }
    }

    Term term(int depth)
    {
        if (depth <= 0 || chance(30)) {
            switch (pick(4)) {
            case 0: return variable();
            case 1: return number();
            default: return atom();
            }
        }
        switch (pick(5)) {
        case 0: {
            std::vector<Term> items;
            int n = pick(4);
            for (int i = 0; i < n; ++i)
                items.push_back(term(depth - 1));
            Term tail = chance(25) ? variable() : Term();
            return Term::list(std::span<const Term>(items), tail);
        }
        case 1:
            if (exotic)
                return Term::compound("{}", {term(depth - 1)});
            [[fallthrough]];
        default: {
            static const char* plain[] = {"f", "g", "h", "pair"};
            static const char* ops[] = {"+", "-", "*", "/", "^", "=", ":-", ",", ";", "->", "\\+", "is",
                                        "-->", ":", "mod", "hello world", "?-", "@", "=..", "\\"};
            Symbol f(exotic && chance(50) ? ops[pick(20)] : plain[pick(4)]);
            int arity = 1 + pick(3);
            std::vector<Term> args;
            for (int i = 0; i < arity; ++i)
                args.push_back(term(depth - 1));
            return Term::compound(f, std::move(args));
        }
        }
    }

    bool exotic = true;
    bool with_anonymous = false;

private:
    std::mt19937_64 rng_;
};

} // namespace plweb::testing
