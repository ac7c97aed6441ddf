#pragma once

#include "plweb/term.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace plweb {

// Map from variables to terms. Bindings keep insertion order so answers can
// be rendered in query order.
class Substitution {
public:
    using Binding = std::pair<VarId, Term>;

    Substitution() = default;

    const Term* find(const VarId& v) const;
    void bind(const VarId& v, Term t); // inserts or overwrites
    bool contains(const VarId& v) const { return find(v) != nullptr; }

    std::size_t size() const { return bindings_.size(); }
    bool empty() const { return bindings_.empty(); }
    auto begin() const { return bindings_.begin(); }
    auto end() const { return bindings_.end(); }
    const std::vector<Binding>& bindings() const { return bindings_; }

    // Replaces every bound variable of t by its value. Single pass: relies on
    // the substitution being idempotent.
    Term apply(const Term& t) const;

    // Identity substitution over the given variables (X -> X).
    static Substitution identity(std::span<const VarId> vars);

    // True when no variable of the domain can occur in t.
    bool cannot_touch(const Term& t) const { return t.is_ground() || (t.newest_serial() < oldest_ && !(named_ && t.has_named_var())); }
    // True when some variable of the domain occurs in t.
    bool touches(const Term& t) const;
    std::uint64_t oldest_serial() const { return oldest_; }
    bool binds_named() const { return named_; }

private:
    void reindex();
    void note_domain(const VarId& v);

    std::vector<Binding> bindings_;
    std::unordered_map<VarId, std::size_t, VarIdHash> index_;
    std::uint64_t oldest_ = UINT64_MAX; // smallest fresh serial in the domain
    bool named_ = false;                // domain has a source-named variable
};

// Query bindings of a resolution state, kept as the chain of unifiers that led
// to it. Extending is O(1); the composed substitution is built on demand.
class BindingChain {
public:
    BindingChain() = default;
    static BindingChain root(Substitution query);
    BindingChain extend(const Substitution& mgu) const;
    Substitution resolve() const;
    // Applies the unifiers added since `since` (an ancestor of this chain) to
    // t. Falls back to the whole chain when `since` is not an ancestor.
    Term resolve_since(const Term& t, const BindingChain& since) const;

private:
    struct Link {
        Substitution step;
        mutable std::shared_ptr<const Link> prev;
        ~Link();
    };
    explicit BindingChain(std::shared_ptr<const Link> head) : head_(std::move(head)) {}
    std::shared_ptr<const Link> head_;
};

// Fresh-variable source; lives in the engine's thread record.
class FreshVars {
public:
    VarId next() { return {Symbol("_G"), ++counter_}; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t counter_ = 0;
};

// Consistent renaming of variables to fresh ones: repeated variables stay
// shared, ground subterms are reused as-is.
class Renamer {
public:
    explicit Renamer(FreshVars& fresh) : fresh_(fresh) {}
    Term rename(const Term& t);

private:
    FreshVars& fresh_;
    std::vector<std::pair<VarId, Term>> map_;
};

Clause rename_clause(const Clause& c, FreshVars& fresh);
Term copy_term(const Term& t, FreshVars& fresh);

} // namespace plweb
