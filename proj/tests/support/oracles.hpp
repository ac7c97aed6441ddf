#pragma once

// Reference implementations used to check the library. They work on terms
// through the public accessors only and share no code with src/.

#include "plweb/term.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace plweb::testing::oracle {

inline std::string var_key(const Term& v)
{
    return v.var_id().name.str() + "#" + std::to_string(v.var_id().serial);
}

// Textbook unification with a triangular binding map.
class Robinson {
public:
    Term walk(Term t) const
    {
        while (t.is_var()) {
            auto it = bound.find(var_key(t));
            if (it == bound.end())
                break;
            t = it->second;
        }
        return t;
    }

    bool occurs(const std::string& key, const Term& t) const
    {
        Term w = walk(t);
        if (w.is_var())
            return var_key(w) == key;
        if (w.is_compound())
            for (const auto& a : w.args())
                if (occurs(key, a))
                    return true;
        return false;
    }

    bool unify(const Term& x, const Term& y)
    {
        Term a = walk(x), b = walk(y);
        if (a.is_var() && b.is_var() && var_key(a) == var_key(b))
            return true;
        if (a.is_var())
            return bind(a, b);
        if (b.is_var())
            return bind(b, a);
        if (a.is_number() || b.is_number()) {
            if (!a.is_number() || !b.is_number() || a.is_float() != b.is_float())
                return false;
            return a.is_float() ? a.float_value() == b.float_value() : a.int_value() == b.int_value();
        }
        if (a.name() != b.name() || a.arity() != b.arity())
            return false;
        for (std::size_t i = 0; i < a.arity(); ++i)
            if (!unify(a.arg(i), b.arg(i)))
                return false;
        return true;
    }

    Term resolve(const Term& t) const
    {
        Term w = walk(t);
        if (!w.is_compound())
            return w;
        std::vector<Term> args;
        for (const auto& a : w.args())
            args.push_back(resolve(a));
        return Term::compound(w.functor(), std::move(args));
    }

    std::map<std::string, Term> bound;

private:
    bool bind(const Term& v, const Term& t)
    {
        if (occurs(var_key(v), t))
            return false;
        bound.emplace(var_key(v), t);
        return true;
    }
};

// Equal up to a consistent bijective renaming of variables.
inline bool variant(const Term& a, const Term& b, std::map<std::string, std::string>& fwd,
                    std::map<std::string, std::string>& back)
{
    if (a.is_var() || b.is_var()) {
        if (!a.is_var() || !b.is_var())
            return false;
        auto ka = var_key(a), kb = var_key(b);
        auto f = fwd.emplace(ka, kb).first;
        auto r = back.emplace(kb, ka).first;
        return f->second == kb && r->second == ka;
    }
    if (a.is_number() || b.is_number())
        return a == b;
    if (a.kind() != b.kind() || a.name() != b.name() || a.arity() != b.arity())
        return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (!variant(a.arg(i), b.arg(i), fwd, back))
            return false;
    return true;
}

inline bool variant(const Term& a, const Term& b)
{
    std::map<std::string, std::string> f, r;
    return variant(a, b, f, r);
}

inline void collect_vars(const Term& t, std::vector<std::string>& out)
{
    if (t.is_var())
        out.push_back(var_key(t));
    else if (t.is_compound())
        for (const auto& a : t.args())
            collect_vars(a, out);
}

} // namespace plweb::testing::oracle
