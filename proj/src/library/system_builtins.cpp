#include "library.hpp"

#include "plweb/unify.hpp"
#include "plweb/writer.hpp"

namespace plweb {

namespace {

using Test = bool (*)(const Term&);

void type_test(Module& m, std::string_view name, Test test)
{
    m.define_native(name, 1, [test](Thread& t, const PointPtr& p, const Term& a) {
        if (test(a.arg(0)))
            t.success(p);
        return false;
    });
}

void order_test(Module& m, std::string_view name, bool (*test)(int))
{
    m.define_native(name, 2, [test](Thread& t, const PointPtr& p, const Term& a) {
        if (test(compare_terms(a.arg(0), a.arg(1))))
            t.success(p);
        return false;
    });
}

bool is_proper_list(const Term& t)
{
    Term cur = t;
    while (cur.is_cons())
        cur = cur.arg(1);
    return cur.is_nil();
}

bool write_with(Thread& t, const PointPtr& p, const Term& term, WriteOptions o)
{
    t.session().write_output(render_term(term, o, t.session().operators()));
    t.success(p);
    return false;
}

std::optional<OpType> op_type_of(const Term& t)
{
    if (!t.is_atom())
        return std::nullopt;
    return parse_op_type(t.name());
}

bool op_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("op", 3);
    const Term &pri = a.arg(0), &type = a.arg(1), &names = a.arg(2);
    if (pri.is_var() || type.is_var() || names.is_var())
        return raise(t, err::instantiation(ctx));
    if (!pri.is_integer())
        return raise(t, err::type("integer", pri, ctx));
    if (pri.int_value() < 0 || pri.int_value() > 1200)
        return raise(t, err::domain("operator_priority", pri, ctx));
    if (!type.is_atom())
        return raise(t, err::type("atom", type, ctx));
    auto ot = op_type_of(type);
    if (!ot)
        return raise(t, err::domain("operator_specifier", type, ctx));
    std::vector<Term> list;
    if (names.is_atom() && !names.is_nil()) {
        list.push_back(names);
    } else if (auto items = list_items(names)) {
        list = *items;
    } else {
        return raise(t, err::type("list", names, ctx));
    }
    for (const Term& n : list) {
        if (n.is_var())
            return raise(t, err::instantiation(ctx));
        if (!n.is_atom())
            return raise(t, err::type("atom", n, ctx));
        if (n.name() == "," || (n.name() == "|" && (pri.int_value() < 1001 && pri.int_value() != 0)))
            return raise(t, err::permission("modify", "operator", n, ctx));
        if (n.name() == "[]" || n.name() == "{}")
            return raise(t, err::permission("create", "operator", n, ctx));
        auto& ops = t.session().operators();
        if (op_class(*ot) == OpClass::infix && ops.postfix(n.name()))
            return raise(t, err::permission("create", "operator", n, ctx));
        if (op_class(*ot) == OpClass::postfix && ops.infix(n.name()))
            return raise(t, err::permission("create", "operator", n, ctx));
    }
    for (const Term& n : list)
        t.session().operators().add(n.name(), static_cast<int>(pri.int_value()), *ot);
    t.success(p);
    return false;
}

bool current_op_goal(Thread& t, const PointPtr& p, const Term& a)
{
    std::vector<PointPtr> states;
    std::vector<Term> pattern{a.arg(0), a.arg(1), a.arg(2)};
    for (const auto& e : t.session().operators().entries()) {
        std::vector<Term> values{Term::integer(e.def.priority), Term::atom(op_type_name(e.def.type)), Term::atom(e.name)};
        if (auto mgu = unify_sequences(pattern, values, t.occurs_check()))
            states.push_back(t.make_child(p, p->goal->next, *mgu));
    }
    t.prepend(std::move(states));
    return false;
}

bool current_flag_goal(Thread& t, const PointPtr& p, const Term& a)
{
    const Term& name = a.arg(0);
    Term ctx = make_indicator("current_prolog_flag", 2);
    if (!name.is_var() && !name.is_atom())
        return raise(t, err::type("atom", name, ctx));
    std::vector<PointPtr> states;
    for (auto& [n, v] : t.session().flags()) {
        std::vector<Term> pattern{name, a.arg(1)};
        std::vector<Term> values{Term::atom(n), v};
        if (auto mgu = unify_sequences(pattern, values, t.occurs_check()))
            states.push_back(t.make_child(p, p->goal->next, *mgu));
    }
    if (!name.is_var() && states.empty() && !t.session().get_flag(name.name()))
        return raise(t, err::domain("prolog_flag", name, ctx));
    t.prepend(std::move(states));
    return false;
}

// Async helper: completion resumes the thread after succeeding or raising.
void finish_async(Thread& t, const PointPtr& p, const std::optional<Term>& error)
{
    if (error)
        t.throw_error(*error);
    else
        t.success(p);
    t.resume();
}

bool consult_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = make_indicator("consult", 1);
    std::vector<Term> files;
    if (auto items = list_items(a.arg(0)); items && !a.arg(0).is_atom())
        files = *items;
    else
        files.push_back(a.arg(0));
    for (const Term& f : files) {
        if (f.is_var())
            return raise(t, err::instantiation(ctx));
        if (!f.is_atom())
            return raise(t, err::type("atom", f, ctx));
    }
    auto self = t.shared_from_this();
    auto remaining = std::make_shared<std::vector<Term>>(files.rbegin(), files.rend());
    auto next = std::make_shared<std::function<void()>>();
    *next = [self, p, remaining, next, ctx]() {
        if (remaining->empty()) {
            finish_async(*self, p, std::nullopt);
            *next = nullptr;
            return;
        }
        Term f = remaining->back();
        remaining->pop_back();
        std::string path = f.name();
        Session& s = self->session();
        if (!s.file_system().exists(path) && s.file_system().exists(path + ".pl"))
            path += ".pl";
        if (!s.file_system().exists(path)) {
            finish_async(*self, p, err::existence("source_sink", f, ctx));
            *next = nullptr;
            return;
        }
        s.consult(Source::path(path), [self, p, next](const std::optional<Term>& error) {
            if (error) {
                finish_async(*self, p, error);
                *next = nullptr;
                return;
            }
            (*next)();
        });
    };
    (*next)();
    return true;
}

bool use_module_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = err::indicator(a);
    const Term& spec = a.arg(0);
    if (spec.is_var())
        return raise(t, err::instantiation(ctx));
    Module* into = const_cast<Module*>(p->goal->module ? p->goal->module : &t.session().user());
    if (spec.has_functor(Symbol("library"), 1)) {
        const Term& name = spec.arg(0);
        if (name.is_var())
            return raise(t, err::instantiation(ctx));
        if (!name.is_atom())
            return raise(t, err::type("atom", name, ctx));
        Module* lib = t.session().load_library(name.name());
        if (!lib)
            return raise(t, err::existence("source_sink", spec, ctx));
        into->import(lib);
        t.success(p);
        return false;
    }
    if (!spec.is_atom())
        return raise(t, err::type("atom", spec, ctx));
    std::string path = spec.name();
    Session& s = t.session();
    if (!s.file_system().exists(path) && s.file_system().exists(path + ".pl"))
        path += ".pl";
    if (!s.file_system().exists(path))
        return raise(t, err::existence("source_sink", spec, ctx));
    auto self = t.shared_from_this();
    s.consult(Source::path(path), [self, p](const std::optional<Term>& error) { finish_async(*self, p, error); }, into);
    return true;
}

bool phrase_goal(Thread& t, const PointPtr& p, const Term& a)
{
    Term ctx = err::indicator(a);
    const Term& body = a.arg(0);
    if (body.is_var())
        return raise(t, err::instantiation(ctx));
    if (!body.is_callable())
        return raise(t, err::type("callable", body, ctx));
    Term rest = a.arity() == 3 ? a.arg(2) : Term::atom(sym::nil());
    Term goal;
    try {
        goal = translate_dcg_body(body, a.arg(1), rest, t.fresh());
    } catch (const std::invalid_argument&) {
        return raise(t, err::type("callable", body, ctx));
    }
    t.replace_in(p, Term::compound("call", {goal}), p->goal->module, t.height());
    return false;
}

} // namespace

void install_system_builtins(Module& m)
{
    m.define_native("=", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        t.unify_and_continue(p, a.arg(0), a.arg(1));
        return false;
    });
    m.define_native("\\=", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        if (!unify(a.arg(0), a.arg(1), t.occurs_check()))
            t.success(p);
        return false;
    });
    m.define_native("unify_with_occurs_check", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        if (auto mgu = unify(a.arg(0), a.arg(1), true))
            t.success(p, *mgu);
        return false;
    });
    type_test(m, "var", [](const Term& x) { return x.is_var(); });
    type_test(m, "nonvar", [](const Term& x) { return !x.is_var(); });
    type_test(m, "atom", [](const Term& x) { return x.is_atom(); });
    type_test(m, "number", [](const Term& x) { return x.is_number(); });
    type_test(m, "integer", [](const Term& x) { return x.is_integer(); });
    type_test(m, "float", [](const Term& x) { return x.is_float(); });
    type_test(m, "compound", [](const Term& x) { return x.is_compound(); });
    type_test(m, "atomic", [](const Term& x) { return x.is_atomic(); });
    type_test(m, "callable", [](const Term& x) { return x.is_callable(); });
    type_test(m, "is_list", is_proper_list);
    type_test(m, "ground", [](const Term& x) { return x.is_ground(); });
    type_test(m, "is_host", [](const Term& x) { return x.is_host(); });
    order_test(m, "==", [](int c) { return c == 0; });
    order_test(m, "\\==", [](int c) { return c != 0; });
    order_test(m, "@<", [](int c) { return c < 0; });
    order_test(m, "@>", [](int c) { return c > 0; });
    order_test(m, "@=<", [](int c) { return c <= 0; });
    order_test(m, "@>=", [](int c) { return c >= 0; });
    m.define_native("=@=", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        if (is_variant(a.arg(0), a.arg(1)))
            t.success(p);
        return false;
    });
    m.define_native("\\=@=", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        if (!is_variant(a.arg(0), a.arg(1)))
            t.success(p);
        return false;
    });
    m.define_native("compare", 3, [](Thread& t, const PointPtr& p, const Term& a) {
        Term ctx = make_indicator("compare", 3);
        const Term& order = a.arg(0);
        if (!order.is_var()) {
            if (!order.is_atom())
                return raise(t, err::type("atom", order, ctx));
            const std::string& n = order.name();
            if (n != "<" && n != ">" && n != "=")
                return raise(t, err::domain("order", order, ctx));
        }
        int c = compare_terms(a.arg(1), a.arg(2));
        t.unify_and_continue(p, order, Term::atom(c < 0 ? "<" : c > 0 ? ">" : "="));
        return false;
    });
    m.define_native("set_prolog_flag", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        Term ctx = make_indicator("set_prolog_flag", 2);
        if (a.arg(0).is_var())
            return raise(t, err::instantiation(ctx));
        if (!a.arg(0).is_atom())
            return raise(t, err::type("atom", a.arg(0), ctx));
        if (auto e = t.session().set_flag(a.arg(0).name(), a.arg(1)))
            return raise(t, *e);
        t.success(p);
        return false;
    });
    m.define_native("current_prolog_flag", 2, current_flag_goal);
    m.define_native("op", 3, op_goal);
    m.define_native("current_op", 3, current_op_goal);

    m.define_native("write", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        return write_with(t, p, a.arg(0), {false, false, true, 0});
    });
    m.define_native("print", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        return write_with(t, p, a.arg(0), {true, false, true, 0});
    });
    m.define_native("writeln", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        t.session().write_output(render_term(a.arg(0), {false, false, true, 0}, t.session().operators()) + "\n");
        t.success(p);
        return false;
    });
    m.define_native("writeq", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        return write_with(t, p, a.arg(0), {true, false, true, 0});
    });
    m.define_native("write_canonical", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        return write_with(t, p, a.arg(0), {true, true, false, 0});
    });
    m.define_native("write_term", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        Term ctx = make_indicator("write_term", 2);
        auto opts = list_items(a.arg(1));
        if (!opts)
            return raise(t, err::type("list", a.arg(1), ctx));
        WriteOptions o{false, false, false, 0};
        for (const Term& opt : *opts) {
            if (opt.is_var())
                return raise(t, err::instantiation(ctx));
            if (!opt.is_compound() || opt.arity() != 1)
                return raise(t, err::domain("write_option", opt, ctx));
            const std::string& k = opt.name();
            const Term& v = opt.arg(0);
            bool on = v.is_atom(Symbol("true"));
            if (k == "quoted")
                o.quoted = on;
            else if (k == "ignore_ops")
                o.ignore_ops = on;
            else if (k == "numbervars")
                o.numbervars = on;
            else if (k == "max_depth" && v.is_integer())
                o.max_depth = static_cast<std::size_t>(std::max<std::int64_t>(0, v.int_value()));
            else
                return raise(t, err::domain("write_option", opt, ctx));
        }
        return write_with(t, p, a.arg(0), o);
    });
    m.define_native("nl", 0, [](Thread& t, const PointPtr& p, const Term&) {
        t.session().write_output("\n");
        t.success(p);
        return false;
    });
    m.define_native("tab", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        try {
            Term n = evaluate(t.session(), a.arg(0), make_indicator("tab", 1));
            if (!n.is_integer())
                return raise(t, err::type("integer", n, make_indicator("tab", 1)));
            t.session().write_output(std::string(static_cast<std::size_t>(std::max<std::int64_t>(0, n.int_value())), ' '));
            t.success(p);
        } catch (const PrologError& e) {
            t.throw_error(e.ball);
        }
        return false;
    });
    m.define_native("put_char", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        Term ctx = make_indicator("put_char", 1);
        if (a.arg(0).is_var())
            return raise(t, err::instantiation(ctx));
        if (!a.arg(0).is_atom())
            return raise(t, err::type("character", a.arg(0), ctx));
        t.session().write_output(a.arg(0).name());
        t.success(p);
        return false;
    });
    m.define_native("consult", 1, consult_goal);
    m.define_native("use_module", 1, use_module_goal);
    m.define_native("use_module", 2, use_module_goal);
    m.define_native("ensure_loaded", 1, use_module_goal);
    m.define_native("phrase", 2, phrase_goal);
    m.define_native("phrase", 3, phrase_goal);
}

void install_system(Session& s)
{
    Module& m = s.system();
    install_control(m);
    install_system_builtins(m);
    install_system_terms(m);
    install_arith(m);
    install_database(m);
    m.export_all(true);
    s.load_clauses(m, system_prolog_source());
}

} // namespace plweb
