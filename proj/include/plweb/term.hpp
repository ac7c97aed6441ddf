#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace plweb {

// Interned text. Two symbols are equal iff their text is equal.
class Symbol {
public:
    Symbol() = default;
    explicit Symbol(std::string_view text);

    const std::string& str() const { return *text_; }
    bool operator==(const Symbol& o) const { return text_ == o.text_; }
    bool operator!=(const Symbol& o) const { return text_ != o.text_; }
    std::size_t hash() const { return std::hash<const void*>{}(text_); }
    bool valid() const { return text_ != nullptr; }

private:
    const std::string* text_ = nullptr;
};

namespace sym {
Symbol nil();         // []
Symbol dot();         // '.'
Symbol comma();       // ','
Symbol true_();
Symbol fail();
Symbol curly();       // {}
Symbol colon();       // :
Symbol clause_neck(); // :-
Symbol minus();
Symbol error();
} // namespace sym

class Term;

// Identity of a variable: a source name, or a fresh serial in the reserved
// `_G<n>` namespace (serial > 0).
struct VarId {
    Symbol name;
    std::uint64_t serial = 0;

    bool operator==(const VarId& o) const { return name == o.name && serial == o.serial; }
    std::string text() const;
};

struct VarIdHash {
    std::size_t operator()(const VarId& v) const { return v.name.hash() ^ (v.serial * 0x9e3779b97f4a7c15ULL); }
};

// An opaque host object reachable from Prolog. Implemented by the host bridge
// and the document model; term-core only needs identity and property lookup.
class HostRef {
public:
    virtual ~HostRef() = default;
    virtual const void* identity() const = 0;
    virtual std::string kind() const = 0;
    // Converted value of an own property, or nullopt when the host object has
    // no such property.
    virtual std::optional<Term> property_term(std::string_view name) const = 0;
};

class Term {
public:
    enum class Kind : std::uint8_t { Variable, Number, Compound, Host };

    Term() = default; // empty handle; only valid as a placeholder

    static Term var(std::string_view name);
    static Term var(VarId id);
    static Term integer(std::int64_t v);
    static Term floating(double v);
    static Term atom(Symbol name);
    static Term atom(std::string_view name) { return atom(Symbol(name)); }
    static Term compound(Symbol functor, std::vector<Term> args);
    static Term compound(std::string_view functor, std::vector<Term> args)
    {
        return compound(Symbol(functor), std::move(args));
    }
    static Term host(std::shared_ptr<const HostRef> ref);

    // Proper list of items terminated by tail (default []).
    static Term list(std::span<const Term> items, Term tail = Term());
    static Term list(std::initializer_list<Term> items) { return list(std::span<const Term>(items.begin(), items.size())); }

    bool empty() const { return node_ == nullptr; }
    Kind kind() const { return node_->kind; }

    bool is_var() const { return node_->kind == Kind::Variable; }
    bool is_number() const { return node_->kind == Kind::Number; }
    bool is_integer() const { return is_number() && !node_->is_float; }
    bool is_float() const { return is_number() && node_->is_float; }
    bool is_compound() const { return node_->kind == Kind::Compound && !node_->args.empty(); }
    bool is_atom() const { return node_->kind == Kind::Compound && node_->args.empty(); }
    bool is_atom(Symbol s) const { return is_atom() && node_->name == s; }
    bool is_callable() const { return node_->kind == Kind::Compound; }
    bool is_atomic() const { return is_atom() || is_number() || is_host(); }
    bool is_host() const { return node_->kind == Kind::Host; }
    bool is_ground() const { return node_->ground; }
    bool has_functor(Symbol f, std::size_t arity) const
    {
        return node_->kind == Kind::Compound && node_->name == f && node_->args.size() == arity;
    }
    bool is_cons() const { return has_functor(sym::dot(), 2); }
    bool is_nil() const { return is_atom(sym::nil()); }

    VarId var_id() const { return {node_->name, node_->serial}; }
    Symbol functor() const { return node_->name; }
    const std::string& name() const { return node_->name.str(); }
    std::size_t arity() const { return node_->args.size(); }
    const std::vector<Term>& args() const { return node_->args; }
    const Term& arg(std::size_t i) const { return node_->args[i]; }
    std::int64_t int_value() const { return node_->ival; }
    double float_value() const { return node_->fval; }
    double as_double() const { return node_->is_float ? node_->fval : static_cast<double>(node_->ival); }
    const std::shared_ptr<const HostRef>& host_ref() const { return node_->host; }

    // name/arity for callable terms.
    std::string indicator() const;

    // Largest fresh-variable serial occurring in the term (0 when none), and
    // whether a source-named variable occurs. Cheap bounds for skipping
    // terms a substitution cannot touch.
    std::uint64_t newest_serial() const { return node_->newest; }
    bool has_named_var() const { return node_->has_named; }

    // Pointer identity of the underlying node; structural equality is `==`.
    bool same_node(const Term& o) const { return node_ == o.node_; }

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

private:
    struct Node {
        Kind kind;
        bool ground = true;
        bool is_float = false;
        Symbol name;
        std::uint64_t serial = 0;
        std::uint64_t newest = 0;
        bool has_named = false;
        std::int64_t ival = 0;
        double fval = 0;
        std::vector<Term> args;
        std::shared_ptr<const HostRef> host;
        ~Node();
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// ISO standard order: Var < Number < Atom < Compound; host values after
// compounds, ordered by identity.
int compare_terms(const Term& a, const Term& b);

// Variables of t in depth-first left-to-right order, without duplicates.
std::vector<VarId> term_variables(const Term& t);
void collect_variables(const Term& t, std::vector<VarId>& out);
bool occurs_in(const VarId& v, const Term& t);

// Items of a proper list; nullopt when t is not a proper list.
std::optional<std::vector<Term>> list_items(const Term& t);

// Structural equivalence up to consistent variable renaming (=@=).
bool is_variant(const Term& a, const Term& b);

struct PredicateIndicator {
    Symbol name;
    std::size_t arity = 0;

    bool operator==(const PredicateIndicator& o) const { return name == o.name && arity == o.arity; }
    std::string str() const { return name.str() + "/" + std::to_string(arity); }
    Term to_term() const;
    static PredicateIndicator of(const Term& callable) { return {callable.functor(), callable.arity()}; }
};

struct PredicateIndicatorHash {
    std::size_t operator()(const PredicateIndicator& p) const { return p.name.hash() * 31 + p.arity; }
};

struct Clause {
    Term head;
    Term body; // atom `true` for facts

    bool is_fact() const { return body.is_atom(sym::true_()); }
};

} // namespace plweb
