#include "plweb/engine.hpp"
#include "plweb/unify.hpp"

#include "../library/library.hpp"

namespace plweb {

namespace {

// Runs a goal to its first answer without the executor. Used for read-time
// expansion hooks, which must not suspend.
std::optional<Substitution> solve_once(Session& s, const Term& goal, std::vector<std::pair<std::string, VarId>> vars)
{
    auto t = s.fork();
    t->query_term(goal, std::move(vars));
    while (!t->points().empty()) {
        const auto& top = t->points().back();
        if (top->is_answer())
            return top->substitution();
        if (top->is_error())
            return std::nullopt;
        if (t->inferences() > s.max_inferences())
            return std::nullopt;
        if (t->step())
            return std::nullopt;
    }
    return std::nullopt;
}

bool defines(Session& s, std::string_view name, std::size_t arity)
{
    const Predicate* p = s.user().find({Symbol(name), arity});
    return p && !p->clauses().empty();
}

// Rewrites body leaves through goal_expansion/2 once each.
Term expand_goals(Session& s, const Term& body)
{
    static const Symbol comma = sym::comma(), semi(";"), arrow("->"), neg("\\+");
    if (body.is_var())
        return body;
    if (body.arity() == 2 && (body.functor() == comma || body.functor() == semi || body.functor() == arrow))
        return Term::compound(body.functor(), {expand_goals(s, body.arg(0)), expand_goals(s, body.arg(1))});
    if (body.arity() == 1 && body.functor() == neg)
        return Term::compound(neg, {expand_goals(s, body.arg(0))});
    VarId out{Symbol("$Expanded"), 0};
    Term goal = Term::compound("goal_expansion", {body, Term::var(out)});
    if (auto answer = solve_once(s, goal, {{"$Expanded", out}}))
        if (const Term* v = answer->find(out); v && !v->is_var())
            return *v;
    return body;
}

class ConsultJob : public std::enable_shared_from_this<ConsultJob> {
public:
    ConsultJob(std::shared_ptr<Session> s, Module* into, DoneHandler done)
        : session_(std::move(s)), module_(into), importer_(into), done_(std::move(done))
    {
    }

    void start(std::string text)
    {
        text_ = std::move(text);
        reader_ = std::make_unique<TermReader>(text_, session_->operators(), session_->read_options());
        next();
    }

    void finish(std::optional<Term> error)
    {
        if (finished_)
            return;
        finished_ = true;
        auto done = std::move(done_);
        auto keep = session_;
        session_->executor().post([done, error, keep] {
            if (done)
                done(error);
        });
    }

private:
    void next()
    {
        Session& s = *session_;
        while (!finished_) {
            std::optional<ReadResult> r;
            try {
                reader_->set_options(s.read_options());
                r = reader_->next();
            } catch (const SyntaxError& e) {
                finish(syntax_error_ball(e));
                return;
            }
            if (!r) {
                run_initialization();
                return;
            }
            const Term& t = r->term;
            if (t.has_functor(sym::clause_neck(), 1) || t.has_functor(Symbol("?-"), 1)) {
                if (directive(t.arg(0), std::move(r->variable_names)))
                    return;
                continue;
            }
            if (!store(t))
                return;
        }
    }

    // Returns true when the directive continues asynchronously.
    bool directive(const Term& goal, std::vector<std::pair<std::string, VarId>> vars)
    {
        Session& s = *session_;
        if (goal.has_functor(Symbol("module"), 2) && goal.arg(0).is_atom()) {
            module_ = &s.module(goal.arg(0).name());
            if (auto exports = list_items(goal.arg(1))) {
                for (const Term& e : *exports) {
                    if ((e.has_functor(Symbol("/"), 2) || e.has_functor(Symbol("//"), 2)) && e.arg(0).is_atom() &&
                        e.arg(1).is_integer()) {
                        std::size_t arity = static_cast<std::size_t>(e.arg(1).int_value());
                        if (e.functor() == Symbol("//"))
                            arity += 2;
                        module_->export_predicate({e.arg(0).functor(), arity});
                    }
                }
            }
            (importer_ ? importer_ : &s.user())->import(module_);
            return false;
        }
        if (goal.has_functor(Symbol("initialization"), 1)) {
            initialization_.push_back(goal.arg(0));
            return false;
        }
        run_goal(goal, std::move(vars), [self = shared_from_this()] { self->next(); });
        return true;
    }

    void run_goal(const Term& goal, std::vector<std::pair<std::string, VarId>> vars, std::function<void()> then)
    {
        auto thread = session_->fork();
        thread->query_term(goal, std::move(vars), module_);
        auto self = shared_from_this();
        thread->answer([self, thread, goal, then](const Answer& a) {
            switch (a.kind) {
            case Answer::Kind::success:
                then();
                break;
            case Answer::Kind::failure:
                self->session_->warn("directive failed: " + goal.indicator());
                then();
                break;
            case Answer::Kind::error:
                self->finish(a.ball);
                break;
            case Answer::Kind::limit:
                self->finish(Term::compound(sym::error(), {Term::compound("resource_error", {Term::atom("inferences")}),
                                                            goal.is_callable() ? err::indicator(goal) : goal}));
                break;
            }
        });
    }

    bool store(Term t)
    {
        Session& s = *session_;
        Term ctx = make_indicator("consult", 1);
        if (t.has_functor(Symbol("-->"), 2)) {
            try {
                t = translate_dcg_rule(t);
            } catch (const std::invalid_argument&) {
                finish(err::type("callable", t, ctx));
                return false;
            }
        }
        std::vector<Term> clauses{t};
        if (defines(s, "term_expansion", 2)) {
            VarId out{Symbol("$Expanded"), 0};
            Term goal = Term::compound("term_expansion", {t, Term::var(out)});
            if (auto answer = solve_once(s, goal, {{"$Expanded", out}})) {
                if (const Term* v = answer->find(out); v && !v->is_var()) {
                    if (auto items = list_items(*v))
                        clauses = *items;
                    else
                        clauses = {*v};
                }
            }
        }
        bool goal_hook = defines(s, "goal_expansion", 2);
        for (Term c : clauses) {
            if (goal_hook && c.has_functor(sym::clause_neck(), 2))
                c = Term::compound(sym::clause_neck(), {c.arg(0), expand_goals(s, c.arg(1))});
            if (auto e = s.add_clause(*module_, c, true, ctx)) {
                finish(*e);
                return false;
            }
        }
        return true;
    }

    void run_initialization()
    {
        if (initialization_.empty()) {
            finish(std::nullopt);
            return;
        }
        Term goal = initialization_.front();
        initialization_.erase(initialization_.begin());
        run_goal(goal, {}, [self = shared_from_this()] { self->run_initialization(); });
    }

    std::shared_ptr<Session> session_;
    Module* module_;
    Module* importer_;
    DoneHandler done_;
    std::string text_;
    std::unique_ptr<TermReader> reader_;
    std::vector<Term> initialization_;
    bool finished_ = false;
};

bool looks_like_path(const std::string& v)
{
    return !v.empty() && v.find('\n') == std::string::npos && v.find(":-") == std::string::npos &&
           v.find(". ") == std::string::npos;
}

} // namespace

void Session::consult(Source source, DoneHandler done, Module* into)
{
    auto job = std::make_shared<ConsultJob>(shared_from_this(), into ? into : user_, std::move(done));
    Term ctx = make_indicator("consult", 1);
    if (source.kind == Source::Kind::automatic) {
        const std::string& v = source.value;
        if (looks_like_path(v) && file_system_->exists(v) && !file_system_->is_directory(v))
            source.kind = Source::Kind::path;
        else if (v.rfind("http://", 0) == 0 || v.rfind("https://", 0) == 0)
            source.kind = Source::Kind::url;
        else if (element_text && looks_like_path(v) && element_text(v))
            source.kind = Source::Kind::element;
        else
            source.kind = Source::Kind::text;
    }
    switch (source.kind) {
    case Source::Kind::text:
        job->start(std::move(source.value));
        return;
    case Source::Kind::path: {
        auto text = file_system_->read(source.value);
        if (!text) {
            job->finish(err::existence("source_sink", Term::atom(source.value), ctx));
            return;
        }
        job->start(std::move(*text));
        return;
    }
    case Source::Kind::element: {
        auto text = element_text ? element_text(source.value) : std::nullopt;
        if (!text) {
            job->finish(err::existence("source_sink", Term::atom(source.value), ctx));
            return;
        }
        job->start(std::move(*text));
        return;
    }
    case Source::Kind::url: {
        if (!url_fetcher) {
            job->finish(err::existence("source_sink", Term::atom(source.value), ctx));
            return;
        }
        std::string url = source.value;
        url_fetcher(url, [job, url, ctx](std::optional<std::string> text) {
            if (!text)
                job->finish(err::existence("source_sink", Term::atom(url), ctx));
            else
                job->start(std::move(*text));
        });
        return;
    }
    case Source::Kind::automatic:
        break;
    }
}

} // namespace plweb
