#include "plweb/host.hpp"
#include "plweb/engine.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace plweb::host {

ObjectPtr Object::record(std::string kind)
{
    return ObjectPtr(new Object(std::move(kind)));
}

ObjectPtr Object::array(std::vector<Value> items)
{
    ObjectPtr o(new Object("array"));
    o->array_ = true;
    o->items_ = std::move(items);
    return o;
}

ObjectPtr Object::function(std::string name, Function f)
{
    ObjectPtr o(new Object("function"));
    o->function_ = std::move(f);
    o->function_name_ = std::move(name);
    return o;
}

std::optional<Term> Object::property_term(std::string_view name) const
{
    if (auto v = get(name))
        return to_term(*v);
    return std::nullopt;
}

std::optional<Value> Object::get(std::string_view name) const
{
    for (const auto& [k, v] : props_)
        if (k == name)
            return v;
    return std::nullopt;
}

void Object::set(std::string_view name, Value v)
{
    for (auto& [k, old] : props_) {
        if (k == name) {
            old = std::move(v);
            return;
        }
    }
    props_.emplace_back(std::string(name), std::move(v));
}

std::vector<std::string> Object::keys() const
{
    std::vector<std::string> out;
    for (const auto& [k, v] : props_)
        out.push_back(k);
    return out;
}

std::shared_ptr<Deferred> Deferred::create()
{
    return std::shared_ptr<Deferred>(new Deferred());
}

void Deferred::resolve(Value v)
{
    if (settled_)
        return;
    settled_ = true;
    ok_ = true;
    value_ = std::move(v);
    fire();
}

void Deferred::reject(std::string reason)
{
    if (settled_)
        return;
    settled_ = true;
    reason_ = std::move(reason);
    fire();
}

void Deferred::on_settled(Callback cb)
{
    callbacks_.push_back(std::move(cb));
    if (settled_)
        fire();
}

void Deferred::fire()
{
    auto cbs = std::move(callbacks_);
    callbacks_.clear();
    for (auto& cb : cbs)
        cb(ok_, value_, reason_);
}

std::uint64_t HandleTable::add(const ObjectPtr& obj)
{
    auto it = by_identity_.find(obj.get());
    if (it != by_identity_.end())
        return it->second;
    std::uint64_t id = ++next_;
    by_id_[id] = obj;
    by_identity_[obj.get()] = id;
    return id;
}

ObjectPtr HandleTable::get(std::uint64_t id) const
{
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : it->second;
}

bool HandleTable::release(std::uint64_t id)
{
    auto it = by_id_.find(id);
    if (it == by_id_.end())
        return false;
    by_identity_.erase(it->second.get());
    by_id_.erase(it);
    return true;
}

namespace {

Term number_term(double d)
{
    if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 9.2e18)
        return Term::integer(static_cast<std::int64_t>(d));
    return Term::floating(d);
}

Term record_term(const std::vector<Term>& pairs)
{
    if (pairs.empty())
        return Term::atom("{}");
    Term body = pairs.back();
    for (auto it = pairs.rbegin() + 1; it != pairs.rend(); ++it)
        body = Term::compound(",", {*it, body});
    return Term::compound("{}", {body});
}

// Splits the body of {...} into its comma-separated members.
std::vector<Term> record_members(const Term& t)
{
    std::vector<Term> out;
    Term cur = t.arg(0);
    while (cur.has_functor(Symbol(","), 2)) {
        out.push_back(cur.arg(0));
        cur = cur.arg(1);
    }
    out.push_back(cur);
    return out;
}

std::string number_text(double d)
{
    if (std::isnan(d))
        return "NaN";
    if (std::isinf(d))
        return d > 0 ? "Infinity" : "-Infinity";
    if (d == std::floor(d) && std::fabs(d) < 1e21)
        return std::to_string(static_cast<long long>(d));
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, r.ptr);
}

std::string to_text(const Value& v)
{
    if (std::holds_alternative<std::string>(v))
        return std::get<std::string>(v);
    if (std::holds_alternative<double>(v))
        return number_text(std::get<double>(v));
    if (std::holds_alternative<bool>(v))
        return std::get<bool>(v) ? "true" : "false";
    if (std::holds_alternative<Null>(v))
        return "null";
    if (std::holds_alternative<Undefined>(v))
        return "undefined";
    const auto& o = std::get<ObjectPtr>(v);
    if (o->is_array()) {
        std::string out;
        for (std::size_t i = 0; i < o->items().size(); ++i) {
            if (i)
                out += ",";
            const Value& item = o->items()[i];
            if (!std::holds_alternative<Undefined>(item) && !std::holds_alternative<Null>(item))
                out += to_text(item);
        }
        return out;
    }
    return "[object " + o->kind() + "]";
}

double to_number(const Value& v)
{
    if (std::holds_alternative<double>(v))
        return std::get<double>(v);
    if (std::holds_alternative<bool>(v))
        return std::get<bool>(v) ? 1 : 0;
    if (std::holds_alternative<std::string>(v)) {
        const auto& s = std::get<std::string>(v);
        double d = 0;
        auto r = std::from_chars(s.data(), s.data() + s.size(), d);
        return r.ec == std::errc() && r.ptr == s.data() + s.size() ? d : std::nan("");
    }
    return std::nan("");
}

// JavaScript-style relative index clamping for slice().
std::size_t clamp_index(const std::vector<Value>& args, std::size_t i, std::size_t len, std::size_t fallback)
{
    if (args.size() <= i || std::holds_alternative<Undefined>(args[i]))
        return fallback;
    double d = to_number(args[i]);
    if (std::isnan(d))
        return 0;
    auto n = static_cast<long long>(d);
    if (n < 0)
        n = std::max(0LL, static_cast<long long>(len) + n);
    return std::min(static_cast<std::size_t>(n), len);
}

Value string_method(const std::string& self, const std::string& name, const std::vector<Value>& args)
{
    auto arg_text = [&](std::size_t i) { return i < args.size() ? to_text(args[i]) : std::string("undefined"); };
    if (name == "concat") {
        std::string out = self;
        for (const auto& a : args)
            out += to_text(a);
        return out;
    }
    if (name == "toUpperCase" || name == "toLowerCase") {
        std::string out = self;
        for (char& c : out)
            c = name == "toUpperCase" ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                                      : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    }
    if (name == "indexOf") {
        auto pos = self.find(arg_text(0));
        return pos == std::string::npos ? -1.0 : static_cast<double>(pos);
    }
    if (name == "includes")
        return self.find(arg_text(0)) != std::string::npos;
    if (name == "startsWith")
        return self.rfind(arg_text(0), 0) == 0;
    if (name == "endsWith") {
        std::string s = arg_text(0);
        return self.size() >= s.size() && self.compare(self.size() - s.size(), s.size(), s) == 0;
    }
    if (name == "slice" || name == "substring") {
        std::size_t b = clamp_index(args, 0, self.size(), 0);
        std::size_t e = clamp_index(args, 1, self.size(), self.size());
        return e > b ? self.substr(b, e - b) : std::string();
    }
    if (name == "charAt") {
        std::size_t i = clamp_index(args, 0, self.size(), 0);
        return i < self.size() ? std::string(1, self[i]) : std::string();
    }
    if (name == "trim") {
        auto b = self.find_first_not_of(" \t\r\n");
        if (b == std::string::npos)
            return std::string();
        return self.substr(b, self.find_last_not_of(" \t\r\n") - b + 1);
    }
    if (name == "split") {
        std::vector<Value> parts;
        std::string sep = arg_text(0);
        if (sep.empty()) {
            for (char c : self)
                parts.emplace_back(std::string(1, c));
        } else {
            std::size_t start = 0;
            for (;;) {
                auto pos = self.find(sep, start);
                parts.emplace_back(self.substr(start, pos - start));
                if (pos == std::string::npos)
                    break;
                start = pos + sep.size();
            }
        }
        return Object::array(std::move(parts));
    }
    if (name == "repeat") {
        std::string out;
        for (double n = to_number(args.empty() ? Value() : args[0]); n >= 1; --n)
            out += self;
        return out;
    }
    if (name == "toString")
        return self;
    throw MissingMember(name);
}

Value array_method(const ObjectPtr& self, const std::string& name, const std::vector<Value>& args)
{
    const auto& items = self->items();
    if (name == "concat") {
        std::vector<Value> out = items;
        for (const auto& a : args) {
            if (std::holds_alternative<ObjectPtr>(a) && std::get<ObjectPtr>(a)->is_array()) {
                const auto& more = std::get<ObjectPtr>(a)->items();
                out.insert(out.end(), more.begin(), more.end());
            } else {
                out.push_back(a);
            }
        }
        return Object::array(std::move(out));
    }
    if (name == "join") {
        std::string sep = args.empty() || std::holds_alternative<Undefined>(args[0]) ? "," : to_text(args[0]);
        std::string out;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i)
                out += sep;
            out += to_text(items[i]);
        }
        return out;
    }
    if (name == "slice") {
        std::size_t b = clamp_index(args, 0, items.size(), 0);
        std::size_t e = clamp_index(args, 1, items.size(), items.size());
        return Object::array(e > b ? std::vector<Value>(items.begin() + static_cast<std::ptrdiff_t>(b),
                                                        items.begin() + static_cast<std::ptrdiff_t>(e))
                                   : std::vector<Value>{});
    }
    if (name == "indexOf" || name == "includes") {
        for (std::size_t i = 0; i < items.size(); ++i)
            if (!args.empty() && host_equal(items[i], args[0]))
                return name == "includes" ? Value(true) : Value(static_cast<double>(i));
        return name == "includes" ? Value(false) : Value(-1.0);
    }
    if (name == "reverse") {
        std::vector<Value> out(items.rbegin(), items.rend());
        return Object::array(std::move(out));
    }
    if (name == "push") {
        for (const auto& a : args)
            self->items().push_back(a);
        return static_cast<double>(self->items().size());
    }
    if (name == "toString")
        return to_text(self);
    throw MissingMember(name);
}

} // namespace

Term to_term(const Value& v)
{
    return std::visit(
        [](const auto& x) -> Term {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Undefined> || std::is_same_v<T, Null>)
                return Term::atom("undefined");
            else if constexpr (std::is_same_v<T, bool>)
                return Term::atom(x ? "true" : "false");
            else if constexpr (std::is_same_v<T, double>)
                return number_term(x);
            else if constexpr (std::is_same_v<T, std::string>)
                return Term::atom(x);
            else {
                if (x->is_array()) {
                    std::vector<Term> items;
                    for (const auto& item : x->items())
                        items.push_back(to_term(item));
                    return Term::list(items);
                }
                return Term::host(x);
            }
        },
        v);
}

std::optional<Value> to_value(const Term& t)
{
    switch (t.kind()) {
    case Term::Kind::Variable:
        return std::nullopt;
    case Term::Kind::Number:
        return t.as_double();
    case Term::Kind::Host: {
        auto ref = std::const_pointer_cast<HostRef>(t.host_ref());
        if (auto obj = std::dynamic_pointer_cast<Object>(ref))
            return obj;
        return std::nullopt;
    }
    case Term::Kind::Compound:
        break;
    }
    if (t.is_nil() || t.is_cons()) {
        auto items = list_items(t);
        if (!items)
            return std::nullopt;
        std::vector<Value> out;
        for (const auto& item : *items) {
            auto v = to_value(item);
            if (!v)
                return std::nullopt;
            out.push_back(std::move(*v));
        }
        return Object::array(std::move(out));
    }
    if (!t.is_atom())
        return std::nullopt;
    const std::string& name = t.name();
    if (name == "true")
        return true;
    if (name == "false")
        return false;
    if (name == "undefined")
        return Undefined{};
    return name;
}

bool host_equal(const Value& a, const Value& b)
{
    if (a.index() != b.index())
        return false;
    if (!std::holds_alternative<ObjectPtr>(a))
        return a == b;
    const auto& x = std::get<ObjectPtr>(a);
    const auto& y = std::get<ObjectPtr>(b);
    if (x == y)
        return true;
    if (!x->is_array() || !y->is_array() || x->items().size() != y->items().size())
        return false;
    for (std::size_t i = 0; i < x->items().size(); ++i)
        if (!host_equal(x->items()[i], y->items()[i]))
            return false;
    return true;
}

std::optional<Value> json_to_host(const Term& t)
{
    if (t.is_var())
        return std::nullopt;
    if (t.is_atom() && t.name() == "{}")
        return Object::record();
    if (t.has_functor(Symbol("{}"), 1)) {
        ObjectPtr obj = Object::record();
        for (const Term& m : record_members(t)) {
            if (!m.has_functor(Symbol(":"), 2) || !m.arg(0).is_atom())
                return std::nullopt;
            auto v = json_to_host(m.arg(1));
            if (!v)
                return std::nullopt;
            obj->set(m.arg(0).name(), std::move(*v));
        }
        return obj;
    }
    if (t.is_cons()) {
        auto items = list_items(t);
        if (!items)
            return std::nullopt;
        std::vector<Value> out;
        for (const auto& item : *items) {
            auto v = json_to_host(item);
            if (!v)
                return std::nullopt;
            out.push_back(std::move(*v));
        }
        return Object::array(std::move(out));
    }
    return to_value(t);
}

Term host_to_json(const Value& v)
{
    if (!std::holds_alternative<ObjectPtr>(v))
        return to_term(v);
    const auto& o = std::get<ObjectPtr>(v);
    if (o->is_array()) {
        std::vector<Term> items;
        for (const auto& item : o->items())
            items.push_back(host_to_json(item));
        return Term::list(items);
    }
    if (o->kind() != "object")
        return Term::host(o);
    std::vector<Term> pairs;
    for (const auto& k : o->keys())
        pairs.push_back(Term::compound(":", {Term::atom(k), host_to_json(*o->get(k))}));
    return record_term(pairs);
}

std::string classify(const Value& v)
{
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Undefined>)
                return "undefined";
            else if constexpr (std::is_same_v<T, Null>)
                return "null";
            else if constexpr (std::is_same_v<T, bool>)
                return "boolean";
            else if constexpr (std::is_same_v<T, double>)
                return "number";
            else if constexpr (std::is_same_v<T, std::string>)
                return "string";
            else
                return x->kind();
        },
        v);
}

std::string describe(const Value& v)
{
    return to_text(v);
}

FakeHost::FakeHost() : global_(Object::record("global")) {}

std::optional<Value> FakeHost::get_property(const Value& target, std::string_view name)
{
    if (std::holds_alternative<std::string>(target)) {
        const auto& s = std::get<std::string>(target);
        if (name == "length")
            return static_cast<double>(s.size());
        return std::nullopt;
    }
    if (!std::holds_alternative<ObjectPtr>(target))
        return std::nullopt;
    const auto& o = std::get<ObjectPtr>(target);
    if (o->is_array()) {
        if (name == "length")
            return static_cast<double>(o->items().size());
        std::size_t i = 0;
        auto r = std::from_chars(name.data(), name.data() + name.size(), i);
        if (r.ec == std::errc() && r.ptr == name.data() + name.size() && i < o->items().size())
            return o->items()[i];
    }
    return o->get(name);
}

bool FakeHost::has_property(const Value& target, std::string_view name)
{
    return get_property(target, name).has_value();
}

Value FakeHost::invoke(const Value& target, const Value& member, const std::vector<Value>& args)
{
    if (std::holds_alternative<ObjectPtr>(member)) {
        const auto& f = std::get<ObjectPtr>(member);
        if (!f->callable())
            throw MissingMember(describe(member));
        return f->call(target, args);
    }
    if (!std::holds_alternative<std::string>(member))
        throw MissingMember(describe(member));
    const auto& name = std::get<std::string>(member);
    if (std::holds_alternative<std::string>(target))
        return string_method(std::get<std::string>(target), name, args);
    if (std::holds_alternative<ObjectPtr>(target)) {
        const auto& o = std::get<ObjectPtr>(target);
        if (auto v = o->get(name)) {
            if (std::holds_alternative<ObjectPtr>(*v) && std::get<ObjectPtr>(*v)->callable())
                return std::get<ObjectPtr>(*v)->call(target, args);
            throw MissingMember(name);
        }
        if (o->is_array())
            return array_method(o, name, args);
    }
    if (std::holds_alternative<double>(target) && name == "toString")
        return to_text(target);
    throw MissingMember(name);
}

namespace {

struct BridgeSlot {
    std::shared_ptr<HostBridge> bridge;
};

} // namespace

std::shared_ptr<HostBridge> bridge_of(Session& s)
{
    auto* slot = s.extension<BridgeSlot>();
    if (!slot) {
        auto fresh = std::make_shared<BridgeSlot>();
        fresh->bridge = std::make_shared<FakeHost>();
        s.set_extension(fresh);
        return fresh->bridge;
    }
    return slot->bridge;
}

void set_bridge(Session& s, std::shared_ptr<HostBridge> bridge)
{
    auto slot = std::make_shared<BridgeSlot>();
    slot->bridge = std::move(bridge);
    s.set_extension(slot);
}

} // namespace plweb::host
