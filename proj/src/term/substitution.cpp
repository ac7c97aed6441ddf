#include "plweb/substitution.hpp"

#include <algorithm>
#include <unordered_set>

namespace plweb {

namespace {

constexpr std::size_t kIndexThreshold = 16;

// Rewrites a term bottom-up, walking the last-argument spine iteratively so
// long lists do not exhaust the call stack. `leaf` maps a variable to its
// replacement (or returns an empty Term to keep it). Subterms for which
// `keep` holds are returned unchanged.
template <typename Keep, typename Leaf>
Term rewrite(const Term& t, Keep&& keep, Leaf&& leaf)
{
    std::vector<const Term*> spine;
    const Term* cur = &t;
    Term tail;
    for (;;) {
        if (keep(*cur)) {
            tail = *cur;
            break;
        }
        if (cur->is_var()) {
            Term r = leaf(*cur);
            tail = r.empty() ? *cur : std::move(r);
            break;
        }
        spine.push_back(cur);
        cur = &cur->arg(cur->arity() - 1);
    }
    for (auto it = spine.rbegin(); it != spine.rend(); ++it) {
        const Term& node = **it;
        std::size_t n = node.arity();
        bool changed = !tail.same_node(node.arg(n - 1));
        std::vector<Term> args;
        args.reserve(n);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            args.push_back(rewrite(node.arg(i), keep, leaf));
            changed = changed || !args.back().same_node(node.arg(i));
        }
        if (!changed) {
            tail = node;
            continue;
        }
        args.push_back(std::move(tail));
        tail = Term::compound(node.functor(), std::move(args));
    }
    return tail;
}

} // namespace

const Term* Substitution::find(const VarId& v) const
{
    if (!index_.empty()) {
        auto it = index_.find(v);
        return it == index_.end() ? nullptr : &bindings_[it->second].second;
    }
    for (const auto& b : bindings_)
        if (b.first == v)
            return &b.second;
    return nullptr;
}

void Substitution::bind(const VarId& v, Term t)
{
    if (!index_.empty()) {
        auto it = index_.find(v);
        if (it != index_.end()) {
            bindings_[it->second].second = std::move(t);
            return;
        }
        index_.emplace(v, bindings_.size());
        bindings_.emplace_back(v, std::move(t));
        note_domain(v);
        return;
    }
    for (auto& b : bindings_)
        if (b.first == v) {
            b.second = std::move(t);
            return;
        }
    bindings_.emplace_back(v, std::move(t));
    note_domain(v);
    if (bindings_.size() > kIndexThreshold)
        reindex();
}

void Substitution::note_domain(const VarId& v)
{
    if (v.serial == 0)
        named_ = true;
    else
        oldest_ = std::min(oldest_, v.serial);
}

void Substitution::reindex()
{
    index_.clear();
    for (std::size_t i = 0; i < bindings_.size(); ++i)
        index_.emplace(bindings_[i].first, i);
}

Term Substitution::apply(const Term& t) const
{
    if (bindings_.empty())
        return t;
    return rewrite(t, [this](const Term& u) { return cannot_touch(u); }, [this](const Term& v) -> Term {
        const Term* b = find(v.var_id());
        return b ? *b : Term();
    });
}

bool Substitution::touches(const Term& t) const
{
    std::vector<const Term*> todo{&t};
    while (!todo.empty()) {
        const Term* cur = todo.back();
        todo.pop_back();
        if (cannot_touch(*cur))
            continue;
        if (cur->is_var()) {
            if (find(cur->var_id()))
                return true;
            continue;
        }
        for (const Term& a : cur->args())
            todo.push_back(&a);
    }
    return false;
}

Substitution Substitution::identity(std::span<const VarId> vars)
{
    Substitution s;
    for (const auto& v : vars)
        s.bind(v, Term::var(v));
    return s;
}

BindingChain::Link::~Link()
{
    // Long chains are released iteratively.
    auto p = std::move(prev);
    while (p && p.use_count() == 1)
        p = std::move(p->prev);
}

BindingChain BindingChain::root(Substitution query)
{
    return BindingChain(std::make_shared<const Link>(Link{std::move(query), nullptr}));
}

BindingChain BindingChain::extend(const Substitution& mgu) const
{
    if (mgu.empty() || !head_)
        return *this;
    return BindingChain(std::make_shared<const Link>(Link{mgu, head_}));
}

namespace {

// Reads a run of unifier steps, newest first, as one triangular
// substitution. Should a variable be bound twice the earlier binding wins,
// as eager composition would have it. Bindings are resolved on demand, depth
// first on an explicit stack so long chains of bindings cannot overflow.
class ChainResolver {
public:
    explicit ChainResolver(const std::vector<const Substitution*>& steps)
    {
        for (const Substitution* step : steps)
            for (const auto& [v, t] : *step)
                bound_[v] = &t;
    }

    Term operator()(const Term& t)
    {
        if (bound_.empty() || t.is_ground())
            return t;
        std::vector<VarId> stack;
        pending(t, stack);
        while (!stack.empty()) {
            VarId u = stack.back();
            if (resolved_.count(u)) {
                stack.pop_back();
                continue;
            }
            std::vector<VarId> wait;
            if (!active_.count(u)) {
                pending(*bound_[u], wait);
                active_.insert(u);
            }
            if (wait.empty()) {
                // A variable still active inside its own value is a cyclic
                // binding, left as it is.
                resolved_.emplace(u, substitute(*bound_[u]));
                active_.erase(u);
                stack.pop_back();
            } else {
                stack.insert(stack.end(), wait.begin(), wait.end());
            }
        }
        return substitute(t);
    }

private:
    // Bound variables of t still waiting for their value.
    void pending(const Term& t, std::vector<VarId>& out) const
    {
        std::vector<const Term*> todo{&t};
        while (!todo.empty()) {
            const Term* cur = todo.back();
            todo.pop_back();
            if (cur->is_ground())
                continue;
            if (cur->is_var()) {
                auto id = cur->var_id();
                if (bound_.count(id) && !resolved_.count(id) && !active_.count(id))
                    out.push_back(id);
                continue;
            }
            for (const Term& a : cur->args())
                todo.push_back(&a);
        }
    }

    Term substitute(const Term& t) const
    {
        return rewrite(t, [](const Term& u) { return u.is_ground(); }, [this](const Term& v) -> Term {
            auto it = resolved_.find(v.var_id());
            return it == resolved_.end() ? Term() : it->second;
        });
    }

    std::unordered_map<VarId, const Term*, VarIdHash> bound_;
    std::unordered_map<VarId, Term, VarIdHash> resolved_;
    std::unordered_set<VarId, VarIdHash> active_;
};

} // namespace

Substitution BindingChain::resolve() const
{
    if (!head_)
        return {};
    std::vector<const Substitution*> steps;
    const Link* l = head_.get();
    for (; l->prev; l = l->prev.get())
        steps.push_back(&l->step);
    // The last link holds the query variables.
    ChainResolver r(steps);
    Substitution out;
    for (const auto& [v, t] : l->step)
        out.bind(v, r(t));
    return out;
}

Term BindingChain::resolve_since(const Term& t, const BindingChain& since) const
{
    std::vector<const Substitution*> steps;
    for (const Link* l = head_.get(); l && l->prev && l != since.head_.get(); l = l->prev.get())
        steps.push_back(&l->step);
    ChainResolver r(steps);
    return r(t);
}

Term Renamer::rename(const Term& t)
{
    return rewrite(t, [](const Term& u) { return u.is_ground(); }, [this](const Term& v) -> Term {
        auto id = v.var_id();
        for (const auto& [from, to] : map_)
            if (from == id)
                return to;
        Term fresh = Term::var(fresh_.next());
        map_.emplace_back(id, fresh);
        return fresh;
    });
}

Clause rename_clause(const Clause& c, FreshVars& fresh)
{
    Renamer r(fresh);
    Term head = r.rename(c.head);
    Term body = r.rename(c.body);
    return {std::move(head), std::move(body)};
}

Term copy_term(const Term& t, FreshVars& fresh)
{
    Renamer r(fresh);
    return r.rename(t);
}

} // namespace plweb
