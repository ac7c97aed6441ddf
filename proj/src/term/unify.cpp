#include "plweb/unify.hpp"

#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace plweb {

namespace {

// Martelli-Montanari over an explicit equation stack. Variable elimination is
// kept triangular while solving and made idempotent once at the end.
class Solver {
public:
    explicit Solver(bool occurs_check) : occurs_check_(occurs_check) {}

    void push(const Term& a, const Term& b) { work_.emplace_back(a, b); }

    bool solve()
    {
        while (!work_.empty()) {
            auto [x, y] = std::move(work_.back());
            work_.pop_back();
            Term a = deref(x);
            Term b = deref(y);
            if (a.same_node(b))
                continue;
            if (a.is_var() && b.is_var() && a.var_id() == b.var_id())
                continue;
            if (a.is_var() && b.is_var() && b.var_id().serial > a.var_id().serial)
                std::swap(a, b); // bind the newer variable, older terms stay untouched
            if (a.is_var()) {
                if (!eliminate(a.var_id(), b))
                    return false;
                continue;
            }
            if (b.is_var()) { // orient
                if (!eliminate(b.var_id(), a))
                    return false;
                continue;
            }
            if (a.is_host() || b.is_host()) {
                if (!host_equation(a, b))
                    return false;
                continue;
            }
            if (a.is_number() || b.is_number()) {
                if (!(a == b))
                    return false;
                continue;
            }
            // decompose
            if (a.functor() != b.functor() || a.arity() != b.arity())
                return false;
            if (a.is_ground() && b.is_ground()) {
                if (!(a == b))
                    return false;
                continue;
            }
            for (std::size_t i = a.arity(); i-- > 0;)
                work_.emplace_back(a.arg(i), b.arg(i));
        }
        return true;
    }

    Substitution result()
    {
        Substitution out;
        for (const auto& [v, value] : triangular_)
            out.bind(v, resolve_var(v));
        return out;
    }

private:
    Term deref(Term t) const
    {
        while (t.is_var()) {
            const Term* b = triangular_.find(t.var_id());
            if (!b)
                break;
            t = *b;
        }
        return t;
    }

    bool occurs(const VarId& v, const Term& t) const
    {
        if (t.is_ground())
            return false;
        bool absent = v.serial ? t.newest_serial() < v.serial : !t.has_named_var();
        if (absent && triangular_.cannot_touch(t))
            return false;
        if (t.is_var()) {
            if (t.var_id() == v)
                return true;
            const Term* b = triangular_.find(t.var_id());
            return b && occurs(v, *b);
        }
        for (const auto& a : t.args())
            if (occurs(v, a))
                return true;
        return false;
    }

    bool eliminate(const VarId& v, const Term& t)
    {
        if (occurs_check_ && occurs(v, t))
            return false;
        triangular_.bind(v, t);
        return true;
    }

    bool host_equation(const Term& a, const Term& b)
    {
        if (a.is_host() && b.is_host())
            return a.host_ref()->identity() == b.host_ref()->identity();
        const Term& host = a.is_host() ? a : b;
        const Term& record = a.is_host() ? b : a;
        if (!record.has_functor(sym::curly(), 1))
            return false;
        std::vector<Term> props;
        Term pointer = deref(record.arg(0));
        while (pointer.has_functor(sym::comma(), 2)) {
            props.push_back(pointer.arg(0));
            pointer = deref(pointer.arg(1));
        }
        props.push_back(pointer);
        std::vector<std::pair<Term, Term>> pairs;
        for (const auto& p : props) {
            Term bind = deref(p);
            if (!bind.has_functor(sym::colon(), 2))
                return false;
            Term name = deref(bind.arg(0));
            if (!name.is_atom())
                return false;
            auto value = host.host_ref()->property_term(name.name());
            if (!value)
                return false;
            pairs.emplace_back(*value, bind.arg(1));
        }
        for (auto it = pairs.rbegin(); it != pairs.rend(); ++it)
            work_.push_back(*it);
        return true;
    }

    Term resolve_var(const VarId& v)
    {
        if (auto it = memo_.find(v); it != memo_.end())
            return it->second;
        const Term* b = triangular_.find(v);
        if (!b)
            return Term::var(v);
        if (in_progress_.count(v))
            return Term::var(v); // cyclic binding, only without occurs check
        in_progress_.insert(v);
        Term r = resolve(*b);
        in_progress_.erase(v);
        memo_.emplace(v, r);
        return r;
    }

    Term resolve(const Term& t)
    {
        if (triangular_.cannot_touch(t))
            return t;
        if (t.is_var())
            return resolve_var(t.var_id());
        bool changed = false;
        std::vector<Term> args;
        args.reserve(t.arity());
        for (const auto& a : t.args()) {
            args.push_back(resolve(a));
            changed = changed || !args.back().same_node(a);
        }
        return changed ? Term::compound(t.functor(), std::move(args)) : t;
    }

    bool occurs_check_;
    std::vector<std::pair<Term, Term>> work_;
    Substitution triangular_;
    std::unordered_map<VarId, Term, VarIdHash> memo_;
    std::unordered_set<VarId, VarIdHash> in_progress_;
};

} // namespace

std::optional<Substitution> unify(const Term& a, const Term& b, bool occurs_check)
{
    Solver s(occurs_check);
    s.push(a, b);
    if (!s.solve())
        return std::nullopt;
    return s.result();
}

std::optional<Substitution> unify_sequences(std::span<const Term> a, std::span<const Term> b,
                                            bool occurs_check)
{
    if (a.size() != b.size())
        return std::nullopt;
    Solver s(occurs_check);
    for (std::size_t i = a.size(); i-- > 0;)
        s.push(a[i], b[i]);
    if (!s.solve())
        return std::nullopt;
    return s.result();
}

std::optional<Substitution> unify_host(const Term& host, const Term& t, bool occurs_check)
{
    if (!host.is_host())
        return std::nullopt;
    return unify(host, t, occurs_check);
}

} // namespace plweb
