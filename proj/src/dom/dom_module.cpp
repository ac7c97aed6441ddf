#include "plweb/dom.hpp"
#include "plweb/unify.hpp"
#include "plweb/writer.hpp"

#include "../library/library.hpp"

#include <deque>
#include <unordered_set>

namespace plweb {

namespace {

using dom::DocumentHost;
using dom::NodeRef;

struct Subscription {
    NodeRef node;
    std::string type;
    Term event_var;
    Term goal;
    const Module* module = nullptr;
    std::uint64_t token = 0;
};

// Per-session event bookkeeping. Event goals run one at a time, in arrival
// order, each on its own forked thread.
struct DomState {
    std::vector<Subscription> subscriptions;
    std::deque<std::function<void(std::function<void()>)>> queue;
    bool running = false;
    std::unordered_set<const void*> active_events;
    std::uint64_t renames = 0;
};

DomState& state_of(Session& s)
{
    if (auto* st = s.extension<DomState>())
        return *st;
    auto st = std::make_shared<DomState>();
    s.set_extension(st);
    return *st;
}

void pump(const std::shared_ptr<Session>& s)
{
    DomState& st = state_of(*s);
    if (st.running || st.queue.empty())
        return;
    st.running = true;
    auto job = std::move(st.queue.front());
    st.queue.pop_front();
    std::weak_ptr<Session> weak = s;
    job([weak] {
        if (auto s = weak.lock()) {
            state_of(*s).running = false;
            pump(s);
        }
    });
}

// Gives the stored goal variables of its own, so they cannot clash with the
// fresh variables of the thread that will run it.
Term detach(DomState& st, const Term& t)
{
    Substitution s;
    for (const VarId& v : term_variables(t))
        s.bind(v, Term::var(VarId{Symbol("_Ev"), ++st.renames}));
    return s.apply(t);
}

void run_event(const std::shared_ptr<Session>& s, const Subscription& sub, const NodeRef& event,
               std::function<void()> done)
{
    DomState& st = state_of(*s);
    Substitution b;
    b.bind(sub.event_var.var_id(), Term::host(event));
    Term goal = b.apply(sub.goal);
    auto thread = s->fork();
    thread->query_term(goal, {}, sub.module);
    st.active_events.insert(event.get());
    std::weak_ptr<Session> weak = s;
    thread->answer([weak, thread, event, done](const Answer& a) {
        auto s = weak.lock();
        if (!s)
            return;
        state_of(*s).active_events.erase(event.get());
        if (a.kind == Answer::Kind::error)
            s->warn("uncaught exception in event handler: " +
                    render_term(a.ball, {true, false, true, 0}, s->operators()));
        else if (a.kind == Answer::Kind::limit)
            s->warn("inference limit exceeded in event handler");
        done();
    });
}

std::optional<NodeRef> node_arg(Thread& t, const Term& x, const Term& ctx)
{
    if (x.is_var()) {
        t.throw_error(err::instantiation(ctx));
        return std::nullopt;
    }
    if (x.kind() == Term::Kind::Host) {
        auto v = host::to_value(x);
        if (v && std::holds_alternative<host::ObjectPtr>(*v)) {
            auto obj = std::get<host::ObjectPtr>(*v);
            if (dom::document_of(t.session())->is_node(obj))
                return obj;
        }
    }
    t.throw_error(err::type("dom_object", x, ctx));
    return std::nullopt;
}

std::optional<std::string> atom_arg(Thread& t, const Term& x, const Term& ctx)
{
    if (x.is_var()) {
        t.throw_error(err::instantiation(ctx));
        return std::nullopt;
    }
    if (!x.is_atom()) {
        t.throw_error(err::type("atom", x, ctx));
        return std::nullopt;
    }
    return x.name();
}

// Text for markup and style values: atoms verbatim, numbers as written.
std::optional<std::string> text_arg(Thread& t, const Term& x, const Term& ctx)
{
    if (x.is_var()) {
        t.throw_error(err::instantiation(ctx));
        return std::nullopt;
    }
    if (x.is_atom())
        return x.name();
    if (x.is_number())
        return render_term(x, {}, t.session().operators());
    t.throw_error(err::type("atomic", x, ctx));
    return std::nullopt;
}

void alternatives(Thread& t, const PointPtr& p, const Term& target, const std::vector<NodeRef>& nodes)
{
    std::vector<PointPtr> states;
    for (const auto& n : nodes)
        if (auto mgu = unify(target, Term::host(n), t.occurs_check()))
            states.push_back(t.make_child(p, p->goal->next, *mgu));
    t.prepend(std::move(states));
}

NativeProcedure select_by(DocumentHost::Selector sel)
{
    return [sel](Thread& t, const PointPtr& p, const Term& atom) {
        Term ctx = err::indicator(atom);
        auto key = atom_arg(t, atom.arg(0), ctx);
        if (!key)
            return false;
        alternatives(t, p, atom.arg(1), dom::document_of(t.session())->query_by(sel, *key));
        return false;
    };
}

bool parent_of(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    auto doc = dom::document_of(t.session());
    const Term &child = atom.arg(0), &parent = atom.arg(1);
    if (!child.is_var()) {
        auto c = node_arg(t, child, ctx);
        if (!c)
            return false;
        if (auto par = doc->parent(*c))
            t.unify_and_continue(p, parent, Term::host(par));
        return false;
    }
    auto par = node_arg(t, parent, ctx);
    if (par)
        alternatives(t, p, child, doc->children(*par));
    return false;
}

bool sibling(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    auto doc = dom::document_of(t.session());
    const Term& known = atom.arg(0).is_var() ? atom.arg(1) : atom.arg(0);
    const Term& other = atom.arg(0).is_var() ? atom.arg(0) : atom.arg(1);
    auto n = node_arg(t, known, ctx);
    if (!n)
        return false;
    auto par = doc->parent(*n);
    if (!par)
        return false;
    auto kids = doc->children(par);
    std::vector<NodeRef> adjacent;
    for (std::size_t i = 0; i < kids.size(); ++i) {
        if (kids[i] != *n)
            continue;
        if (i > 0)
            adjacent.push_back(kids[i - 1]);
        if (i + 1 < kids.size())
            adjacent.push_back(kids[i + 1]);
    }
    alternatives(t, p, other, adjacent);
    return false;
}

bool create(Thread& t, const PointPtr& p, const Term& atom)
{
    auto tag = atom_arg(t, atom.arg(0), err::indicator(atom));
    if (tag)
        t.unify_and_continue(p, atom.arg(1), Term::host(dom::document_of(t.session())->create_element(*tag)));
    return false;
}

// insert(Child, Anchor) argument order differs between append_child/2
// (parent first) and insert_before/after (new node first).
NativeProcedure inserter(DocumentHost::Position pos)
{
    return [pos](Thread& t, const PointPtr& p, const Term& atom) {
        Term ctx = err::indicator(atom);
        bool parent_first = pos == DocumentHost::Position::append;
        auto anchor = node_arg(t, atom.arg(parent_first ? 0 : 1), ctx);
        if (!anchor)
            return false;
        auto child = node_arg(t, atom.arg(parent_first ? 1 : 0), ctx);
        if (!child)
            return false;
        if (dom::document_of(t.session())->insert(*child, *anchor, pos))
            t.success(p);
        return false;
    };
}

bool get_attr(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    auto n = node_arg(t, atom.arg(0), ctx);
    if (!n)
        return false;
    auto name = atom_arg(t, atom.arg(1), ctx);
    if (!name)
        return false;
    if (auto v = dom::document_of(t.session())->get_attribute(*n, *name))
        t.unify_and_continue(p, atom.arg(2), host::to_term(*v));
    return false;
}

bool set_attr(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    auto n = node_arg(t, atom.arg(0), ctx);
    if (!n)
        return false;
    auto name = atom_arg(t, atom.arg(1), ctx);
    if (!name)
        return false;
    const Term& value = atom.arg(2);
    if (value.is_var())
        return raise(t, err::instantiation(ctx));
    auto v = host::to_value(value);
    if (!v)
        return raise(t, err::type("atomic", value, ctx));
    dom::document_of(t.session())->set_attribute(*n, *name, *v);
    t.success(p);
    return false;
}

bool get_html(Thread& t, const PointPtr& p, const Term& atom)
{
    auto n = node_arg(t, atom.arg(0), err::indicator(atom));
    if (n)
        t.unify_and_continue(p, atom.arg(1), Term::atom(dom::document_of(t.session())->get_content(*n)));
    return false;
}

bool set_html(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    auto n = node_arg(t, atom.arg(0), ctx);
    if (!n)
        return false;
    auto text = text_arg(t, atom.arg(1), ctx);
    if (!text)
        return false;
    dom::document_of(t.session())->set_content(*n, *text);
    t.success(p);
    return false;
}

bool get_style(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    auto n = node_arg(t, atom.arg(0), ctx);
    if (!n)
        return false;
    auto name = atom_arg(t, atom.arg(1), ctx);
    if (!name)
        return false;
    if (auto v = dom::document_of(t.session())->get_style(*n, *name))
        t.unify_and_continue(p, atom.arg(2), Term::atom(*v));
    return false;
}

bool set_style(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    auto n = node_arg(t, atom.arg(0), ctx);
    if (!n)
        return false;
    auto name = atom_arg(t, atom.arg(1), ctx);
    if (!name)
        return false;
    auto text = text_arg(t, atom.arg(2), ctx);
    if (!text)
        return false;
    dom::document_of(t.session())->set_style(*n, *name, *text);
    t.success(p);
    return false;
}

enum class ClassOp { add, remove, test };

NativeProcedure class_op(ClassOp op)
{
    return [op](Thread& t, const PointPtr& p, const Term& atom) {
        Term ctx = err::indicator(atom);
        auto n = node_arg(t, atom.arg(0), ctx);
        if (!n)
            return false;
        auto c = atom_arg(t, atom.arg(1), ctx);
        if (!c)
            return false;
        auto doc = dom::document_of(t.session());
        switch (op) {
        case ClassOp::add: doc->add_class(*n, *c); break;
        case ClassOp::remove: doc->remove_class(*n, *c); break;
        case ClassOp::test:
            if (!doc->has_class(*n, *c))
                return false;
            break;
        }
        t.success(p);
        return false;
    };
}

enum class Visibility { hide, show, toggle };

NativeProcedure visibility(Visibility v)
{
    return [v](Thread& t, const PointPtr& p, const Term& atom) {
        auto n = node_arg(t, atom.arg(0), err::indicator(atom));
        if (!n)
            return false;
        auto doc = dom::document_of(t.session());
        bool now = v == Visibility::show || (v == Visibility::toggle && !doc->visible(*n));
        doc->set_visible(*n, now);
        t.success(p);
        return false;
    };
}

bool bind(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    auto n = node_arg(t, atom.arg(0), ctx);
    if (!n)
        return false;
    auto type = atom_arg(t, atom.arg(1), ctx);
    if (!type)
        return false;
    const Term &event = atom.arg(2), &goal = atom.arg(3);
    if (!event.is_var())
        return raise(t, err::type("variable", event, ctx));
    if (goal.is_var())
        return raise(t, err::instantiation(ctx));
    if (!goal.is_callable())
        return raise(t, err::type("callable", goal, ctx));

    DomState& st = state_of(t.session());
    Term stored = detach(st, Term::compound("-", {event, goal}));
    Subscription sub;
    sub.node = *n;
    sub.type = *type;
    sub.event_var = stored.arg(0);
    sub.goal = stored.arg(1);
    sub.module = p->goal->module;

    std::weak_ptr<Session> weak = t.session_ptr();
    sub.token = dom::document_of(t.session())->add_listener(*n, *type, [weak, sub](const NodeRef& ev) {
        auto s = weak.lock();
        if (!s)
            return;
        // Host callbacks only enqueue; the goal runs from the executor.
        s->executor().post([weak, sub, ev] {
            auto s = weak.lock();
            if (!s)
                return;
            state_of(*s).queue.push_back([weak, sub, ev](std::function<void()> done) {
                if (auto s = weak.lock())
                    run_event(s, sub, ev, std::move(done));
            });
            pump(s);
        });
    });
    st.subscriptions.push_back(sub);
    t.success(p);
    return false;
}

bool unbind(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    auto n = node_arg(t, atom.arg(0), ctx);
    if (!n)
        return false;
    auto type = atom_arg(t, atom.arg(1), ctx);
    if (!type)
        return false;
    std::optional<Term> goal;
    if (atom.arity() == 3)
        goal = atom.arg(2);
    auto doc = dom::document_of(t.session());
    auto& subs = state_of(t.session()).subscriptions;
    for (auto it = subs.begin(); it != subs.end();) {
        if (it->node == *n && it->type == *type && (!goal || is_variant(it->goal, *goal))) {
            doc->remove_listener(it->node, it->token);
            it = subs.erase(it);
        } else {
            ++it;
        }
    }
    t.success(p);
    return false;
}

std::optional<NodeRef> event_arg(Thread& t, const Term& x, const Term& ctx)
{
    if (x.is_var()) {
        t.throw_error(err::instantiation(ctx));
        return std::nullopt;
    }
    if (x.kind() == Term::Kind::Host) {
        auto v = host::to_value(x);
        if (v && std::holds_alternative<host::ObjectPtr>(*v))
            return std::get<host::ObjectPtr>(*v);
    }
    t.throw_error(err::type("dom_event", x, ctx));
    return std::nullopt;
}

bool event_property(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    auto ev = event_arg(t, atom.arg(0), ctx);
    if (!ev)
        return false;
    auto name = atom_arg(t, atom.arg(1), ctx);
    if (!name)
        return false;
    // Events carry no information outside their handlers.
    if (!state_of(t.session()).active_events.count(ev->get()))
        return false;
    if (auto v = dom::document_of(t.session())->event_property(*ev, *name))
        t.unify_and_continue(p, atom.arg(2), host::to_term(*v));
    return false;
}

bool prevent_default(Thread& t, const PointPtr& p, const Term& atom)
{
    auto ev = event_arg(t, atom.arg(0), err::indicator(atom));
    if (!ev)
        return false;
    dom::document_of(t.session())->prevent_default(*ev);
    t.success(p);
    return false;
}

} // namespace

void install_dom(Session& s)
{
    Module& m = s.module("dom");
    m.export_all(true);
    m.define_native("get_by_id", 2, select_by(DocumentHost::Selector::id));
    m.define_native("get_by_class", 2, select_by(DocumentHost::Selector::class_name));
    m.define_native("get_by_tag", 2, select_by(DocumentHost::Selector::tag));
    m.define_native("parent_of", 2, parent_of);
    m.define_native("sibling", 2, sibling);
    m.define_native("create", 2, create);
    m.define_native("append_child", 2, inserter(DocumentHost::Position::append));
    m.define_native("insert_before", 2, inserter(DocumentHost::Position::before));
    m.define_native("insert_after", 2, inserter(DocumentHost::Position::after));
    m.define_native("get_attr", 3, get_attr);
    m.define_native("set_attr", 3, set_attr);
    m.define_native("get_html", 2, get_html);
    m.define_native("set_html", 2, set_html);
    m.define_native("get_style", 3, get_style);
    m.define_native("set_style", 3, set_style);
    m.define_native("add_class", 2, class_op(ClassOp::add));
    m.define_native("remove_class", 2, class_op(ClassOp::remove));
    m.define_native("has_class", 2, class_op(ClassOp::test));
    m.define_native("hide", 1, visibility(Visibility::hide));
    m.define_native("show", 1, visibility(Visibility::show));
    m.define_native("toggle", 1, visibility(Visibility::toggle));
    m.define_native("bind", 4, bind);
    m.define_native("unbind", 2, unbind);
    m.define_native("unbind", 3, unbind);
    m.define_native("event_property", 3, event_property);
    m.define_native("prevent_default", 1, prevent_default);
}

} // namespace plweb
