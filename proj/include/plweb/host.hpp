#pragma once

#include "plweb/term.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace plweb {
class Session;
}

namespace plweb::host {

class Object;
using ObjectPtr = std::shared_ptr<Object>;

struct Undefined {
    bool operator==(const Undefined&) const = default;
};
struct Null {
    bool operator==(const Null&) const = default;
};

using Value = std::variant<Undefined, Null, bool, double, std::string, ObjectPtr>;

// A host-side exception; surfaces in Prolog as system_error(Message).
struct Exception : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by invoke() when the member does not exist or is not callable.
struct MissingMember : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A host object: record, array, function, deferred result, or something
// more specific (document nodes, events) provided by subclasses.
class Object : public HostRef, public std::enable_shared_from_this<Object> {
public:
    using Function = std::function<Value(const Value& self, const std::vector<Value>& args)>;

    static ObjectPtr record(std::string kind = "object");
    static ObjectPtr array(std::vector<Value> items = {});
    static ObjectPtr function(std::string name, Function f);

    const void* identity() const override { return this; }
    std::string kind() const override { return kind_; }
    std::optional<Term> property_term(std::string_view name) const override;

    // Own properties in insertion order.
    virtual std::optional<Value> get(std::string_view name) const;
    virtual void set(std::string_view name, Value v);
    virtual std::vector<std::string> keys() const;
    bool has(std::string_view name) const { return get(name).has_value(); }

    bool is_array() const { return array_; }
    std::vector<Value>& items() { return items_; }
    const std::vector<Value>& items() const { return items_; }

    bool callable() const { return static_cast<bool>(function_); }
    Value call(const Value& self, const std::vector<Value>& args) const { return function_(self, args); }
    const std::string& function_name() const { return function_name_; }

protected:
    explicit Object(std::string kind) : kind_(std::move(kind)) {}

private:
    std::string kind_;
    std::vector<std::pair<std::string, Value>> props_;
    bool array_ = false;
    std::vector<Value> items_;
    Function function_;
    std::string function_name_;
};

// A value that becomes available later (fetch-style APIs). Settles once.
class Deferred : public Object {
public:
    using Callback = std::function<void(bool ok, const Value& value, const std::string& reason)>;

    static std::shared_ptr<Deferred> create();

    void resolve(Value v);
    void reject(std::string reason);
    // Runs immediately when already settled.
    void on_settled(Callback cb);
    bool settled() const { return settled_; }

private:
    Deferred() : Object("deferred") {}
    void fire();

    bool settled_ = false;
    bool ok_ = false;
    Value value_;
    std::string reason_;
    std::vector<Callback> callbacks_;
};

// Handles given out to clients that cannot hold live objects (JSON
// boundary). Holds strong references until released.
class HandleTable {
public:
    std::uint64_t add(const ObjectPtr& obj);
    ObjectPtr get(std::uint64_t id) const;
    bool release(std::uint64_t id);
    std::size_t size() const { return by_id_.size(); }

private:
    std::map<std::uint64_t, ObjectPtr> by_id_;
    std::map<const void*, std::uint64_t> by_identity_;
    std::uint64_t next_ = 0;
};

// Conversion table: numbers, booleans <-> true/false, strings <-> atoms,
// arrays <-> proper lists, null/undefined <-> undefined; anything else stays
// wrapped as a HostValue term.
Term to_term(const Value& v);
// nullopt for variables and compounds other than proper lists.
std::optional<Value> to_value(const Term& t);

// Structural equality for scalars and arrays, identity for other objects.
bool host_equal(const Value& a, const Value& b);

// JSON-style conversion: records {k: v, ...} and lists become fresh host
// objects and arrays. nullopt when t is not convertible.
std::optional<Value> json_to_host(const Term& t);
// Objects become record terms, arrays become lists; functions and other
// special objects stay wrapped.
Term host_to_json(const Value& v);

// "undefined", "null", "boolean", "number", "string", "array", "function",
// or the object's kind.
std::string classify(const Value& v);

std::string describe(const Value& v);

// The embedding's side of the foreign function interface.
class HostBridge {
public:
    virtual ~HostBridge() = default;

    virtual Value get_global() = 0;
    virtual std::optional<Value> get_property(const Value& target, std::string_view name) = 0;
    virtual bool has_property(const Value& target, std::string_view name) = 0;
    // member is a property name (string) of target or a function object.
    // Throws MissingMember or Exception.
    virtual Value invoke(const Value& target, const Value& member, const std::vector<Value>& args) = 0;
    virtual ObjectPtr make_record() = 0;
    virtual ObjectPtr make_array(std::vector<Value> items) = 0;
    virtual std::string classify_value(const Value& v) { return classify(v); }

    HandleTable& handles() { return handles_; }

private:
    HandleTable handles_;
};

// In-memory host. Strings and arrays get a handful of the usual methods
// (concat, join, slice, indexOf, toUpperCase, ...); everything else comes
// from the configured object graph.
class FakeHost : public HostBridge {
public:
    FakeHost();

    // Object graph from JSON. {"$function": "name"} refers to a function
    // registered beforehand; throws std::invalid_argument otherwise.
    static std::shared_ptr<FakeHost> from_json(const std::string& json_text,
                                               const std::map<std::string, Object::Function>& functions = {});

    ObjectPtr global() const { return global_; }

    Value get_global() override { return global_; }
    std::optional<Value> get_property(const Value& target, std::string_view name) override;
    bool has_property(const Value& target, std::string_view name) override;
    Value invoke(const Value& target, const Value& member, const std::vector<Value>& args) override;
    ObjectPtr make_record() override { return Object::record(); }
    ObjectPtr make_array(std::vector<Value> items) override { return Object::array(std::move(items)); }

private:
    ObjectPtr global_;
};

// The bridge used by a session's js and dom predicates; a FakeHost with an
// empty global object is installed when none was set.
std::shared_ptr<HostBridge> bridge_of(Session& s);
void set_bridge(Session& s, std::shared_ptr<HostBridge> bridge);

} // namespace plweb::host
