#include "plweb/host.hpp"

#include "../library/library.hpp"

namespace plweb {

namespace {

using host::Value;

// Hands a converted host value to Prolog, keeping wrapped objects in the
// bridge's handle table.
Term export_value(host::HostBridge& bridge, const Value& v)
{
    if (std::holds_alternative<host::ObjectPtr>(v)) {
        const auto& o = std::get<host::ObjectPtr>(v);
        if (!o->is_array())
            bridge.handles().add(o);
    }
    return host::to_term(v);
}

std::optional<Value> context_value(Thread& t, const Term& ctx, const Term& where)
{
    if (ctx.is_var()) {
        t.throw_error(err::instantiation(where));
        return std::nullopt;
    }
    auto v = host::json_to_host(ctx);
    if (!v)
        t.throw_error(err::type("host_value", ctx, where));
    return v;
}

bool apply_in(Thread& t, const PointPtr& p, const Value& context, const Term& method, const Term& args,
              const Term& result, const Term& where)
{
    auto bridge = host::bridge_of(t.session());
    if (method.is_var())
        return raise(t, err::instantiation(where));
    Value member;
    if (method.is_atom()) {
        member = method.name();
    } else if (method.kind() == Term::Kind::Host) {
        auto v = host::to_value(method);
        if (!v)
            return raise(t, err::type("callable", method, where));
        member = *v;
    } else {
        return raise(t, err::type("callable", method, where));
    }
    const Term* cur = &args;
    std::vector<Value> values;
    while (cur->is_cons()) {
        const Term& a = cur->arg(0);
        if (a.is_var())
            return raise(t, err::instantiation(where));
        auto v = host::json_to_host(a);
        if (!v)
            return raise(t, err::type("host_value", a, where));
        values.push_back(std::move(*v));
        cur = &cur->arg(1);
    }
    if (cur->is_var())
        return raise(t, err::instantiation(where));
    if (!cur->is_nil())
        return raise(t, err::type("list", args, where));

    Value out;
    try {
        out = bridge->invoke(context, member, values);
    } catch (const host::MissingMember&) {
        return raise(t, err::existence("procedure", method, where));
    } catch (const std::exception& e) {
        return raise(t, err::system(e.what(), where));
    }

    if (std::holds_alternative<host::ObjectPtr>(out)) {
        auto deferred = std::dynamic_pointer_cast<host::Deferred>(std::get<host::ObjectPtr>(out));
        if (deferred) {
            auto self = t.shared_from_this();
            auto keep = t.session_ptr();
            deferred->on_settled([self, keep, p, result, where, bridge](bool ok, const Value& v,
                                                                      const std::string& reason) {
                keep->executor().post([self, keep, p, result, where, bridge, ok, v, reason] {
                    if (ok)
                        self->unify_and_continue(p, result, export_value(*bridge, v));
                    else
                        self->throw_error(err::system(reason, where));
                    self->resume();
                });
            });
            return true;
        }
    }
    t.unify_and_continue(p, result, export_value(*bridge, out));
    return false;
}

bool apply4(Thread& t, const PointPtr& p, const Term& atom)
{
    Term where = make_indicator("apply", 4);
    auto ctx = context_value(t, atom.arg(0), where);
    if (!ctx)
        return false;
    return apply_in(t, p, *ctx, atom.arg(1), atom.arg(2), atom.arg(3), where);
}

bool apply3(Thread& t, const PointPtr& p, const Term& atom)
{
    auto bridge = host::bridge_of(t.session());
    return apply_in(t, p, bridge->get_global(), atom.arg(0), atom.arg(1), atom.arg(2), make_indicator("apply", 3));
}

bool get_prop_in(Thread& t, const PointPtr& p, const Value& context, const Term& prop, const Term& value,
                 const Term& where)
{
    auto bridge = host::bridge_of(t.session());
    if (prop.is_var())
        return raise(t, err::instantiation(where));
    if (!prop.is_atom())
        return raise(t, err::type("atom", prop, where));
    auto v = bridge->get_property(context, prop.name());
    if (v)
        t.unify_and_continue(p, value, export_value(*bridge, *v));
    return false;
}

bool get_prop3(Thread& t, const PointPtr& p, const Term& atom)
{
    Term where = make_indicator("get_prop", 3);
    auto ctx = context_value(t, atom.arg(0), where);
    if (!ctx)
        return false;
    return get_prop_in(t, p, *ctx, atom.arg(1), atom.arg(2), where);
}

bool get_prop2(Thread& t, const PointPtr& p, const Term& atom)
{
    auto bridge = host::bridge_of(t.session());
    return get_prop_in(t, p, bridge->get_global(), atom.arg(0), atom.arg(1), make_indicator("get_prop", 2));
}

bool global1(Thread& t, const PointPtr& p, const Term& atom)
{
    auto bridge = host::bridge_of(t.session());
    t.unify_and_continue(p, atom.arg(0), export_value(*bridge, bridge->get_global()));
    return false;
}

bool json_prolog(Thread& t, const PointPtr& p, const Term& atom)
{
    Term where = make_indicator("json_prolog", 2);
    auto bridge = host::bridge_of(t.session());
    const Term &term = atom.arg(0), &value = atom.arg(1);
    if (!term.is_var()) {
        auto v = host::json_to_host(term);
        if (!v)
            return raise(t, err::type("json_term", term, where));
        Term h = std::holds_alternative<host::ObjectPtr>(*v) ? Term::host(std::get<host::ObjectPtr>(*v))
                                                               : host::to_term(*v);
        if (std::holds_alternative<host::ObjectPtr>(*v))
            bridge->handles().add(std::get<host::ObjectPtr>(*v));
        t.unify_and_continue(p, value, h);
        return false;
    }
    if (value.is_var())
        return raise(t, err::instantiation(where));
    auto v = host::to_value(value);
    if (!v)
        return raise(t, err::type("json_term", value, where));
    t.unify_and_continue(p, term, host::host_to_json(*v));
    return false;
}

} // namespace

void install_js(Session& s)
{
    Module& m = s.module("js");
    m.export_all(true);
    m.define_native("apply", 4, apply4);
    m.define_native("apply", 3, apply3);
    m.define_native("get_prop", 3, get_prop3);
    m.define_native("get_prop", 2, get_prop2);
    m.define_native("global", 1, global1);
    m.define_native("json_prolog", 2, json_prolog);
}

} // namespace plweb
