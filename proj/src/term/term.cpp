#include "plweb/term.hpp"

#include <algorithm>
#include <unordered_map>

namespace plweb {

Term::Node::~Node()
{
    // Deep terms (long lists) are released without recursion.
    std::vector<std::shared_ptr<const Node>> stack;
    for (auto& a : args)
        if (a.node_ && a.node_.use_count() == 1)
            stack.push_back(std::move(a.node_));
    while (!stack.empty()) {
        auto n = std::move(stack.back());
        stack.pop_back();
        for (auto& a : const_cast<Node&>(*n).args)
            if (a.node_ && a.node_.use_count() == 1)
                stack.push_back(std::move(a.node_));
    }
}

Term Term::var(std::string_view name)
{
    return var(VarId{Symbol(name), 0});
}

Term Term::var(VarId id)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->ground = false;
    n->name = id.name;
    n->serial = id.serial;
    n->newest = id.serial;
    n->has_named = id.serial == 0;
    return Term(std::move(n));
}

Term Term::integer(std::int64_t v)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->ival = v;
    return Term(std::move(n));
}

Term Term::floating(double v)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->is_float = true;
    n->fval = v;
    return Term(std::move(n));
}

Term Term::atom(Symbol name)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Compound;
    n->name = name;
    return Term(std::move(n));
}

Term Term::compound(Symbol functor, std::vector<Term> args)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Compound;
    n->name = functor;
    n->ground = std::all_of(args.begin(), args.end(), [](const Term& a) { return a.is_ground(); });
    if (!n->ground)
        for (const Term& a : args) {
            n->newest = std::max(n->newest, a.node_->newest);
            n->has_named = n->has_named || a.node_->has_named;
        }
    n->args = std::move(args);
    return Term(std::move(n));
}

Term Term::host(std::shared_ptr<const HostRef> ref)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Host;
    n->host = std::move(ref);
    return Term(std::move(n));
}

Term Term::list(std::span<const Term> items, Term tail)
{
    Term out = tail.empty() ? atom(sym::nil()) : std::move(tail);
    for (auto it = items.rbegin(); it != items.rend(); ++it)
        out = compound(sym::dot(), {*it, out});
    return out;
}

std::string Term::indicator() const
{
    return name() + "/" + std::to_string(arity());
}

bool operator==(const Term& x, const Term& y)
{
    const Term* a = &x;
    const Term* b = &y;
    for (;;) {
        if (a->node_ == b->node_)
            return true;
        if (a->kind() != b->kind())
            return false;
        switch (a->kind()) {
        case Term::Kind::Variable:
            return a->var_id() == b->var_id();
        case Term::Kind::Number:
            if (a->is_float() != b->is_float())
                return false;
            return a->is_float() ? a->float_value() == b->float_value() : a->int_value() == b->int_value();
        case Term::Kind::Host:
            return a->host_ref()->identity() == b->host_ref()->identity();
        case Term::Kind::Compound: {
            if (a->functor() != b->functor() || a->arity() != b->arity())
                return false;
            std::size_t n = a->arity();
            if (n == 0)
                return true;
            for (std::size_t i = 0; i + 1 < n; ++i)
                if (!(a->arg(i) == b->arg(i)))
                    return false;
            a = &a->arg(n - 1);
            b = &b->arg(n - 1);
            break;
        }
        }
    }
}

namespace {

int kind_rank(const Term& t)
{
    switch (t.kind()) {
    case Term::Kind::Variable: return 0;
    case Term::Kind::Number: return 1;
    case Term::Kind::Compound: return t.is_atom() ? 3 : 4;
    case Term::Kind::Host: return 5;
    }
    return 6;
}

int compare_numbers(const Term& a, const Term& b)
{
    if (a.is_integer() && b.is_integer())
        return a.int_value() < b.int_value() ? -1 : (a.int_value() > b.int_value() ? 1 : 0);
    double x = a.as_double(), y = b.as_double();
    if (x < y)
        return -1;
    if (x > y)
        return 1;
    // 1.0 @< 1
    if (a.is_float() != b.is_float())
        return a.is_float() ? -1 : 1;
    return 0;
}

} // namespace

int compare_terms(const Term& x, const Term& y)
{
    const Term* a = &x;
    const Term* b = &y;
    for (;;) {
        int ra = kind_rank(*a), rb = kind_rank(*b);
        if (ra != rb)
            return ra < rb ? -1 : 1;
        switch (a->kind()) {
        case Term::Kind::Variable: {
            auto va = a->var_id(), vb = b->var_id();
            if (va.serial != vb.serial)
                return va.serial < vb.serial ? -1 : 1;
            int c = va.name.str().compare(vb.name.str());
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case Term::Kind::Number:
            return compare_numbers(*a, *b);
        case Term::Kind::Host: {
            auto ia = a->host_ref()->identity(), ib = b->host_ref()->identity();
            return ia < ib ? -1 : (ia > ib ? 1 : 0);
        }
        case Term::Kind::Compound: {
            if (a->arity() != b->arity())
                return a->arity() < b->arity() ? -1 : 1;
            if (a->functor() != b->functor()) {
                int c = a->name().compare(b->name());
                return c < 0 ? -1 : 1;
            }
            std::size_t n = a->arity();
            if (n == 0)
                return 0;
            for (std::size_t i = 0; i + 1 < n; ++i)
                if (int c = compare_terms(a->arg(i), b->arg(i)))
                    return c;
            a = &a->arg(n - 1);
            b = &b->arg(n - 1);
            break;
        }
        }
    }
}

void collect_variables(const Term& t, std::vector<VarId>& out)
{
    const Term* cur = &t;
    for (;;) {
        if (cur->is_ground())
            return;
        if (cur->is_var()) {
            auto id = cur->var_id();
            if (std::find(out.begin(), out.end(), id) == out.end())
                out.push_back(id);
            return;
        }
        if (cur->kind() != Term::Kind::Compound || cur->arity() == 0)
            return;
        std::size_t n = cur->arity();
        for (std::size_t i = 0; i + 1 < n; ++i)
            collect_variables(cur->arg(i), out);
        cur = &cur->arg(n - 1);
    }
}

std::vector<VarId> term_variables(const Term& t)
{
    std::vector<VarId> out;
    collect_variables(t, out);
    return out;
}

bool occurs_in(const VarId& v, const Term& t)
{
    const Term* cur = &t;
    for (;;) {
        if (cur->is_ground())
            return false;
        if (cur->is_var())
            return cur->var_id() == v;
        std::size_t n = cur->arity();
        if (n == 0)
            return false;
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (occurs_in(v, cur->arg(i)))
                return true;
        cur = &cur->arg(n - 1);
    }
}

std::optional<std::vector<Term>> list_items(const Term& t)
{
    std::vector<Term> out;
    const Term* cur = &t;
    while (cur->is_cons()) {
        out.push_back(cur->arg(0));
        cur = &cur->arg(1);
    }
    if (!cur->is_nil())
        return std::nullopt;
    return out;
}

namespace {

bool variant_walk(const Term& a, const Term& b, std::unordered_map<VarId, VarId, VarIdHash>& ab,
                  std::unordered_map<VarId, VarId, VarIdHash>& ba)
{
    if (a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case Term::Kind::Variable: {
        auto va = a.var_id(), vb = b.var_id();
        auto ia = ab.find(va);
        auto ib = ba.find(vb);
        if (ia == ab.end() && ib == ba.end()) {
            ab.emplace(va, vb);
            ba.emplace(vb, va);
            return true;
        }
        return ia != ab.end() && ib != ba.end() && ia->second == vb && ib->second == va;
    }
    case Term::Kind::Compound:
        if (a.functor() != b.functor() || a.arity() != b.arity())
            return false;
        for (std::size_t i = 0; i < a.arity(); ++i)
            if (!variant_walk(a.arg(i), b.arg(i), ab, ba))
                return false;
        return true;
    default:
        return a == b;
    }
}

} // namespace

bool is_variant(const Term& a, const Term& b)
{
    std::unordered_map<VarId, VarId, VarIdHash> ab, ba;
    return variant_walk(a, b, ab, ba);
}

Term PredicateIndicator::to_term() const
{
    return Term::compound("/", {Term::atom(name), Term::integer(static_cast<std::int64_t>(arity))});
}

} // namespace plweb
