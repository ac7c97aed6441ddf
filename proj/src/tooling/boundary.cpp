#include "plweb/boundary.hpp"
#include "plweb/tooling.hpp"

namespace plweb {

using nlohmann::json;

namespace {

json failure(const std::string& message)
{
    return {{"ok", false}, {"error", message}};
}

std::string render(Session& s, const Term& t)
{
    return render_term(t, {true, false, true, 0}, s.operators());
}

std::string kind_name(Answer::Kind k)
{
    switch (k) {
    case Answer::Kind::success: return "success";
    case Answer::Kind::failure: return "failure";
    case Answer::Kind::error: return "error";
    case Answer::Kind::limit: return "limit";
    }
    return "failure";
}

host::Value json_scalar(const json& j)
{
    if (j.is_boolean())
        return j.get<bool>();
    if (j.is_number())
        return j.get<double>();
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_null())
        return host::Null{};
    return host::Undefined{};
}

} // namespace

Boundary::Boundary()
{
    host_factory_ = [](const json& config) -> std::shared_ptr<host::HostBridge> {
        return host::FakeHost::from_json(config.dump());
    };
    document_factory_ = [](const json& config) -> std::shared_ptr<dom::DocumentHost> {
        return dom::VirtualDocument::from_markup(config.is_string() ? config.get<std::string>() : std::string());
    };
}

Session* Boundary::session(std::uint64_t id)
{
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second.session.get();
}

std::string Boundary::handle_text(const std::string& request)
{
    json r;
    try {
        r = json::parse(request);
    } catch (const json::parse_error& e) {
        return failure(std::string("bad request: ") + e.what()).dump();
    }
    return handle(r).dump();
}

json Boundary::handle(const json& r)
{
    try {
        if (!r.is_object() || !r.contains("op") || !r["op"].is_string())
            return failure("request needs an \"op\" string");
        std::string op = r["op"];
        if (op == "create_session")
            return create_session(r);
        if (!r.contains("session") || !r["session"].is_number_unsigned())
            return failure("request needs a \"session\" id");
        auto it = sessions_.find(r["session"].get<std::uint64_t>());
        if (it == sessions_.end())
            return failure("no such session");
        Entry& e = it->second;
        if (op == "destroy_session") {
            sessions_.erase(it);
            return {{"ok", true}};
        }
        if (op == "consult")
            return consult(e, r);
        if (op == "query")
            return query(e, r);
        if (op == "answer")
            return answer(e);
        if (op == "record_tree")
            return record_tree(e, r);
        if (op == "set_flag")
            return set_flag(e, r);
        if (op == "get_flag")
            return get_flag(e, r);
        if (op == "release")
            return {{"ok", e.handles.release(r.value("handle", std::uint64_t{0}))}};
        if (op == "dispatch_event")
            return dispatch_event(e, r);
        return failure("unknown op: " + op);
    } catch (const std::exception& ex) {
        return failure(ex.what());
    }
}

json Boundary::create_session(const json& r)
{
    SessionOptions options;
    if (r.contains("max_inferences"))
        options.max_inferences = r["max_inferences"].get<std::uint64_t>();
    if (r.contains("seed"))
        options.seed = r["seed"].get<std::uint64_t>();
    if (r.contains("vfs"))
        options.file_system = VirtualFileSystem::from_json(r["vfs"].dump());
    std::uint64_t id = ++next_id_;
    Entry& e = sessions_[id];
    e.session = Session::create(options);
    e.session->set_output([&e](std::string_view s) { e.output += s; });
    if (r.contains("host"))
        host::set_bridge(*e.session, host_factory_(r["host"]));
    if (r.contains("document"))
        dom::set_document(*e.session, document_factory_(r["document"]));
    return {{"ok", true}, {"session", id}};
}

json Boundary::consult(Entry& e, const json& r)
{
    Source src;
    if (r.contains("text"))
        src = Source::text(r["text"].get<std::string>());
    else if (r.contains("path"))
        src = Source::path(r["path"].get<std::string>());
    else
        return failure("consult needs \"text\" or \"path\"");
    bool done = false;
    std::optional<Term> error;
    e.session->consult(src, [&](const std::optional<Term>& err) {
        error = err;
        done = true;
    });
    e.session->executor().run_until([&] { return done; });
    if (!done)
        return failure("consult did not complete");
    if (error)
        return failure(render(*e.session, *error));
    return {{"ok", true}, {"warnings", e.session->warnings()}};
}

json Boundary::query(Entry& e, const json& r)
{
    if (!r.contains("goal") || !r["goal"].is_string())
        return failure("query needs a \"goal\" string");
    bool done = false;
    std::optional<Term> error;
    e.session->thread()->query(r["goal"].get<std::string>(), [&](const std::optional<Term>& err) {
        error = err;
        done = true;
    });
    e.session->executor().run_until([&] { return done; });
    if (error)
        return failure(render(*e.session, *error));
    return {{"ok", true}};
}

json Boundary::binding_value(Entry& e, const Term& t)
{
    if (t.kind() == Term::Kind::Host) {
        if (auto v = host::to_value(t); v && std::holds_alternative<host::ObjectPtr>(*v)) {
            const auto& obj = std::get<host::ObjectPtr>(*v);
            return {{"$handle", e.handles.add(obj)}, {"kind", obj->kind()}};
        }
    }
    return render_term(t, {}, e.session->operators());
}

json Boundary::answer(Entry& e)
{
    std::optional<Answer> got;
    e.session->thread()->answer([&](const Answer& a) { got = a; });
    e.session->executor().run_until([&] { return got.has_value(); });
    if (!got)
        return failure("no answer was delivered");
    json reply{{"ok", true}, {"kind", kind_name(got->kind)}, {"text", format_answer(*e.session, *got)}};
    if (got->is_success()) {
        json b = json::object();
        for (const auto& [var, value] : got->bindings) {
            const std::string& name = var.name.str();
            if (!name.empty() && name[0] != '_')
                b[name] = binding_value(e, value);
        }
        reply["bindings"] = b;
    }
    if (got->kind == Answer::Kind::error)
        reply["error"] = render(*e.session, got->ball);
    reply["output"] = e.output;
    e.output.clear();
    return reply;
}

json Boundary::record_tree(Entry& e, const json& r)
{
    if (!r.contains("goal") || !r["goal"].is_string())
        return failure("record_tree needs a \"goal\" string");
    std::string format = r.value("format", std::string("json"));
    if (format != "json" && format != "dot")
        return failure("unsupported tree format: " + format);
    auto thread = e.session->fork();
    bool done = false;
    std::optional<Term> error;
    thread->query(r["goal"].get<std::string>(), [&](const std::optional<Term>& err) {
        error = err;
        done = true;
    });
    e.session->executor().run_until([&] { return done; });
    if (error)
        return failure(render(*e.session, *error));
    DerivationTree tree = plweb::record_tree(*thread, r.value("max_answers", std::size_t{10}));
    std::string text = export_tree(tree, format);
    return {{"ok", true}, {"tree", format == "json" ? json::parse(text) : json(text)}};
}

json Boundary::set_flag(Entry& e, const json& r)
{
    std::string name = r.value("flag", std::string());
    std::string value = r.value("value", std::string());
    Term t;
    try {
        t = parse_term(value, e.session->operators(), e.session->read_options()).term;
    } catch (const SyntaxError& ex) {
        return failure(render(*e.session, syntax_error_ball(ex)));
    }
    if (auto err = e.session->set_flag(name, t))
        return failure(render(*e.session, *err));
    return {{"ok", true}};
}

json Boundary::get_flag(Entry& e, const json& r)
{
    auto v = e.session->get_flag(r.value("flag", std::string()));
    if (!v)
        return failure("unknown flag");
    return {{"ok", true}, {"value", render(*e.session, *v)}};
}

json Boundary::dispatch_event(Entry& e, const json& r)
{
    auto doc = std::dynamic_pointer_cast<dom::VirtualDocument>(dom::document_of(*e.session));
    if (!doc)
        return failure("events can only be dispatched into a virtual document");
    dom::NodeRef target;
    if (r.contains("target") && r["target"].contains("$handle"))
        target = e.handles.get(r["target"]["$handle"].get<std::uint64_t>());
    else if (r.contains("id"))
        if (auto found = doc->query_by(dom::DocumentHost::Selector::id, r["id"].get<std::string>()); !found.empty())
            target = found.front();
    if (!target)
        target = doc->body();
    std::map<std::string, host::Value> props;
    if (r.contains("properties"))
        for (const auto& [k, v] : r["properties"].items())
            props[k] = json_scalar(v);
    auto ev = doc->dispatch(target, r.value("type", std::string()), props);
    e.session->executor().run();
    json reply{{"ok", true}, {"default_prevented", ev->default_prevented}, {"output", e.output}};
    e.output.clear();
    return reply;
}

} // namespace plweb
