#include "plweb/engine.hpp"

#include "../library/library.hpp"

#include <algorithm>
#include <climits>
#include <iostream>

namespace plweb {

IndexKey IndexKey::of(const Term& t)
{
    IndexKey k;
    switch (t.kind()) {
    case Term::Kind::Variable:
        break;
    case Term::Kind::Number:
        if (t.is_float()) {
            k.kind = Kind::number_float;
            k.fval = t.float_value();
        } else {
            k.kind = Kind::number_int;
            k.ival = t.int_value();
        }
        break;
    case Term::Kind::Compound:
        k.kind = Kind::atomic_name;
        k.name = t.functor();
        k.arity = t.arity();
        break;
    case Term::Kind::Host:
        k.kind = Kind::host;
        k.host = t.host_ref()->identity();
        break;
    }
    return k;
}

bool IndexKey::operator==(const IndexKey& o) const
{
    if (kind != o.kind)
        return false;
    switch (kind) {
    case Kind::none:
        return true;
    case Kind::atomic_name:
        return name == o.name && arity == o.arity;
    case Kind::number_int:
        return ival == o.ival;
    case Kind::number_float:
        return fval == o.fval;
    case Kind::host:
        return host == o.host;
    }
    return false;
}

std::size_t IndexKeyHash::operator()(const IndexKey& k) const
{
    switch (k.kind) {
    case IndexKey::Kind::atomic_name:
        return k.name.hash() * 31 + k.arity;
    case IndexKey::Kind::number_int:
        return std::hash<std::int64_t>{}(k.ival);
    case IndexKey::Kind::number_float:
        return std::hash<double>{}(k.fval);
    case IndexKey::Kind::host:
        return std::hash<const void*>{}(k.host);
    default:
        return 0;
    }
}

void Predicate::add(std::shared_ptr<const StoredClause> c, bool at_end)
{
    if (at_end)
        clauses_.push_back(std::move(c));
    else
        clauses_.insert(clauses_.begin(), std::move(c));
    index_dirty_ = true;
}

bool Predicate::erase(std::uint64_t id)
{
    auto it = std::find_if(clauses_.begin(), clauses_.end(), [id](const auto& c) { return c->id == id; });
    if (it == clauses_.end())
        return false;
    clauses_.erase(it);
    index_dirty_ = true;
    return true;
}

void Predicate::clear()
{
    clauses_.clear();
    index_dirty_ = true;
}

void Predicate::rebuild_index() const
{
    buckets_.clear();
    variable_heads_.clear();
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
        const Term& head = clauses_[i]->clause.head;
        if (head.arity() == 0 || head.arg(0).is_var())
            variable_heads_.push_back(i);
        else
            buckets_[IndexKey::of(head.arg(0))].push_back(i);
    }
    index_dirty_ = false;
}

std::vector<std::shared_ptr<const StoredClause>> Predicate::candidates(const Term* first_arg) const
{
    if (!first_arg || first_arg->is_var() || clauses_.size() < 4)
        return clauses_;
    if (index_dirty_)
        rebuild_index();
    std::vector<std::shared_ptr<const StoredClause>> out;
    auto it = buckets_.find(IndexKey::of(*first_arg));
    static const std::vector<std::size_t> none;
    const auto& bucket = it == buckets_.end() ? none : it->second;
    std::size_t i = 0, j = 0;
    while (i < bucket.size() || j < variable_heads_.size()) {
        if (j == variable_heads_.size() || (i < bucket.size() && bucket[i] < variable_heads_[j]))
            out.push_back(clauses_[bucket[i++]]);
        else
            out.push_back(clauses_[variable_heads_[j++]]);
    }
    return out;
}

Predicate* Module::find(const PredicateIndicator& pi)
{
    auto it = predicates_.find(pi);
    return it == predicates_.end() ? nullptr : &it->second;
}

const Predicate* Module::find(const PredicateIndicator& pi) const
{
    auto it = predicates_.find(pi);
    return it == predicates_.end() ? nullptr : &it->second;
}

void Module::define_native(std::string_view name, std::size_t arity, NativeProcedure p)
{
    predicates_[{Symbol(name), arity}].native = std::move(p);
}

bool Module::is_visible(const PredicateIndicator& pi) const
{
    return export_all_ || std::find(exports_.begin(), exports_.end(), pi) != exports_.end();
}

void Module::import(const Module* m)
{
    if (m != this && std::find(imports_.begin(), imports_.end(), m) == imports_.end())
        imports_.push_back(m);
}

Session::Session(SessionOptions options)
    : executor_(options.executor ? options.executor : std::make_shared<Executor>()),
      file_system_(options.file_system ? options.file_system : std::make_shared<VirtualFileSystem>()),
      max_inferences_(options.max_inferences)
{
    if (options.seed)
        rng_.seed(*options.seed);
    else
        rng_.seed(std::random_device{}());
}

Session::~Session() = default;

std::shared_ptr<Session> Session::create(SessionOptions options)
{
    std::shared_ptr<Session> s(new Session(std::move(options)));
    s->init();
    return s;
}

void Session::init()
{
    system_ = &module("system");
    system_->set_library(true);
    user_ = &module("user");
    install_system(*this);
    register_package("lists", install_lists);
    register_package("random", install_random);
    register_package("os", install_os);
    register_package("js", install_js);
    register_package("dom", install_dom);
    default_thread_ = std::make_shared<Thread>(shared_from_this());
}

std::optional<Term> Session::get_flag(std::string_view name) const
{
    if (name == "occurs_check")
        return Term::atom(occurs_check_ ? "true" : "false");
    if (name == "double_quotes")
        return Term::atom(double_quotes_ == DoubleQuotes::codes   ? "codes"
                          : double_quotes_ == DoubleQuotes::chars ? "chars"
                                                                  : "atom");
    if (name == "unknown")
        return Term::atom(unknown_);
    if (name == "bounded")
        return Term::atom("true");
    if (name == "max_integer")
        return Term::integer(INT64_MAX);
    if (name == "min_integer")
        return Term::integer(INT64_MIN);
    if (name == "integer_rounding_function")
        return Term::atom("toward_zero");
    if (name == "max_inferences")
        return Term::integer(static_cast<std::int64_t>(max_inferences_));
    return std::nullopt;
}

std::optional<Term> Session::set_flag(std::string_view name, const Term& value)
{
    Term context = make_indicator("set_prolog_flag", 2);
    if (value.is_var())
        return err::instantiation(context);
    auto bad_value = [&] {
        return err::domain("flag_value", Term::compound("+", {Term::atom(name), value}), context);
    };
    if (name == "occurs_check") {
        if (value.is_atom(Symbol("true")))
            occurs_check_ = true;
        else if (value.is_atom(Symbol("false")))
            occurs_check_ = false;
        else
            return bad_value();
        return std::nullopt;
    }
    if (name == "double_quotes") {
        if (!value.is_atom())
            return bad_value();
        if (value.name() == "codes")
            double_quotes_ = DoubleQuotes::codes;
        else if (value.name() == "chars")
            double_quotes_ = DoubleQuotes::chars;
        else if (value.name() == "atom")
            double_quotes_ = DoubleQuotes::atom;
        else
            return bad_value();
        return std::nullopt;
    }
    if (name == "unknown") {
        if (!value.is_atom() || (value.name() != "error" && value.name() != "fail" && value.name() != "warning"))
            return bad_value();
        unknown_ = value.name();
        return std::nullopt;
    }
    if (name == "max_inferences") {
        if (!value.is_integer() || value.int_value() <= 0)
            return bad_value();
        max_inferences_ = static_cast<std::uint64_t>(value.int_value());
        return std::nullopt;
    }
    if (get_flag(name))
        return err::permission("modify", "flag", Term::atom(name), context);
    return err::domain("prolog_flag", Term::atom(name), context);
}

std::vector<std::pair<std::string, Term>> Session::flags() const
{
    std::vector<std::pair<std::string, Term>> out;
    for (const char* n : {"bounded", "double_quotes", "integer_rounding_function", "max_inferences", "max_integer",
                          "min_integer", "occurs_check", "unknown"})
        out.emplace_back(n, *get_flag(n));
    return out;
}

ReadOptions Session::read_options() const
{
    ReadOptions o;
    o.double_quotes = double_quotes_;
    return o;
}

Module* Session::find_module(std::string_view name)
{
    auto it = modules_.find(std::string(name));
    return it == modules_.end() ? nullptr : it->second.get();
}

Module& Session::module(std::string_view name)
{
    auto& slot = modules_[std::string(name)];
    if (!slot)
        slot = std::make_unique<Module>(std::string(name));
    return *slot;
}

std::pair<Module*, Predicate*> Session::resolve(const PredicateIndicator& pi, const Module* context)
{
    if (!context)
        context = user_;
    auto* own = const_cast<Module*>(context);
    if (Predicate* p = own->find(pi))
        return {own, p};
    for (const Module* m : context->imports()) {
        if (!m->is_visible(pi))
            continue;
        auto* mm = const_cast<Module*>(m);
        if (Predicate* p = mm->find(pi))
            return {mm, p};
    }
    if (Predicate* p = system_->find(pi))
        return {system_, p};
    // Library clause bodies calling back into user code (meta-calls).
    if (context != user_)
        return resolve(pi, user_);
    return {nullptr, nullptr};
}

void Session::register_package(std::string name, PackageEntry entry)
{
    packages_[std::move(name)] = std::move(entry);
}

Module* Session::load_library(std::string_view name)
{
    if (Module* m = find_module(name); m && m->is_library())
        return m;
    auto it = packages_.find(std::string(name));
    if (it != packages_.end()) {
        it->second(*this);
        Module* m = find_module(name);
        if (m)
            m->set_library(true);
        return m;
    }
    for (const auto& dir : library_path_) {
        std::string path = dir + "/" + std::string(name) + ".pl";
        auto text = file_system_->read(path);
        if (!text)
            continue;
        Module& m = module(name);
        m.set_library(true);
        m.export_all(true);
        load_clauses(m, *text);
        return &m;
    }
    return nullptr;
}

namespace {

void store_clause(Session& s, Module& m, Term head, Term body, bool at_end)
{
    auto c = std::make_shared<StoredClause>();
    c->clause = Clause{std::move(head), std::move(body)};
    c->id = s.next_clause_id();
    m.define(PredicateIndicator::of(c->clause.head)).add(std::move(c), at_end);
}

} // namespace

void Session::load_clauses(Module& m, std::string_view text)
{
    for (auto& r : read_all(text, operators_, read_options())) {
        Term t = r.term;
        if (t.has_functor(sym::clause_neck(), 1)) {
            const Term& d = t.arg(0);
            if (d.has_functor(Symbol("module"), 2)) {
                if (auto exports = list_items(d.arg(1)))
                    for (const Term& e : *exports)
                        if (e.has_functor(Symbol("/"), 2) && e.arg(0).is_atom() && e.arg(1).is_integer())
                            m.export_predicate({e.arg(0).functor(), static_cast<std::size_t>(e.arg(1).int_value())});
            } else if (d.has_functor(Symbol("dynamic"), 1) && d.arg(0).has_functor(Symbol("/"), 2)) {
                const Term& pi = d.arg(0);
                m.define({pi.arg(0).functor(), static_cast<std::size_t>(pi.arg(1).int_value())}).dynamic = true;
            }
            continue;
        }
        if (t.has_functor(Symbol("-->"), 2))
            t = translate_dcg_rule(t);
        Term head = t, body = Term::atom(sym::true_());
        if (t.has_functor(sym::clause_neck(), 2)) {
            head = t.arg(0);
            body = normalize_body(t.arg(1)).value_or(t.arg(1));
        }
        store_clause(*this, m, head, body, true);
    }
}

std::optional<Term> Session::check_modifiable(const Module& m, const PredicateIndicator& pi, const Term& context)
{
    auto denied = [&] { return err::permission("modify", "static_procedure", pi.to_term(), context); };
    if (m.is_library())
        return denied();
    if (&m != system_ && system_->find(pi))
        return denied();
    if (const Predicate* p = m.find(pi); p && p->is_native())
        return denied();
    return std::nullopt;
}

std::optional<Term> Session::add_clause(Module& m, const Term& clause, bool at_end, const Term& ctx)
{
    Term context = ctx.empty() ? make_indicator("assertz", 1) : ctx;
    Term head = clause, body = Term::atom(sym::true_());
    if (clause.has_functor(sym::clause_neck(), 2)) {
        head = clause.arg(0);
        body = clause.arg(1);
    }
    if (head.is_var())
        return err::instantiation(context);
    if (!head.is_callable())
        return err::type("callable", head, context);
    if (body.is_var())
        body = Term::compound("call", {body});
    auto normal = normalize_body(body);
    if (!normal)
        return err::type("callable", body, context);
    PredicateIndicator pi = PredicateIndicator::of(head);
    if (auto e = check_modifiable(m, pi, context))
        return e;
    store_clause(*this, m, head, *normal, at_end);
    return std::nullopt;
}

std::shared_ptr<Thread> Session::fork()
{
    return std::make_shared<Thread>(shared_from_this());
}

void Session::query(std::string_view goal, DoneHandler done)
{
    default_thread_->query(goal, std::move(done));
}

void Session::answer(AnswerHandler handler)
{
    default_thread_->answer(std::move(handler));
}

void Session::write_output(std::string_view text)
{
    if (output_) {
        output_(text);
    } else {
        std::cout << text;
        std::cout.flush();
    }
}

void Session::warn(std::string message)
{
    warnings_.push_back(std::move(message));
}

} // namespace plweb
