#include "plweb/engine.hpp"
#include "plweb/unify.hpp"

#include <algorithm>
#include <unordered_set>

namespace plweb {

GoalNode::~GoalNode()
{
    // Unlink long conjunction chains iteratively.
    GoalList n = std::move(next);
    while (n && n.use_count() == 1) {
        GoalList after = std::move(n->next);
        n = std::move(after);
    }
}

GoalList push_goal(Term t, std::size_t barrier, const Module* m, GoalList rest)
{
    return std::make_shared<const GoalNode>(std::move(t), barrier, m, std::move(rest));
}

GoalList apply_goal(const GoalList& goal, const Substitution& s, const BindingChain& before)
{
    if (s.empty() || !goal)
        return goal;
    // Stop at the first suffix that holds no variable the substitution binds;
    // pending continuations of deep recursions are left alone.
    std::vector<const GoalNode*> nodes;
    for (const GoalNode* p = goal.get(); p; p = p->next.get()) {
        if (p != goal.get() && p->newest_serial < s.oldest_serial() && !(s.binds_named() && p->has_named_var))
            break;
        nodes.push_back(p);
    }
    std::vector<Term> applied(nodes.size());
    std::vector<bool> defer(nodes.size(), false);
    std::ptrdiff_t last_changed = -1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i]->deferred)
            continue;
        if (i == 0) {
            applied[i] = s.apply(nodes[i]->term);
            if (!applied[i].same_node(nodes[i]->term))
                last_changed = 0;
        } else if (s.touches(nodes[i]->term)) {
            defer[i] = true;
            last_changed = static_cast<std::ptrdiff_t>(i);
        }
    }
    if (last_changed < 0)
        return goal;
    GoalList tail = nodes[static_cast<std::size_t>(last_changed)]->next;
    for (std::ptrdiff_t i = last_changed; i >= 0; --i) {
        auto k = static_cast<std::size_t>(i);
        if (defer[k])
            tail = std::make_shared<const GoalNode>(*nodes[k], before, std::move(tail));
        else if (nodes[k]->deferred)
            tail = std::make_shared<const GoalNode>(*nodes[k], nodes[k]->env, std::move(tail));
        else
            tail = push_goal(applied[k].empty() ? nodes[k]->term : std::move(applied[k]), nodes[k]->cut_barrier,
                             nodes[k]->module, std::move(tail));
    }
    return tail;
}

std::vector<Term> goal_terms(const GoalList& goal, const BindingChain& bindings)
{
    std::vector<Term> out;
    for (const GoalNode* p = goal.get(); p; p = p->next.get()) {
        const Term& t = p->term;
        if (t.is_callable() && !t.name().empty() && t.name()[0] == '$')
            continue;
        out.push_back(p->deferred ? bindings.resolve_since(t, p->env) : t);
    }
    return out;
}

Thread::Thread(std::shared_ptr<Session> session) : session_(session.get()), session_weak_(session)
{
    current_limit_ = session_->max_inferences();
}

void Thread::query(std::string_view goal_text, DoneHandler done)
{
    auto self = shared_from_this();
    auto keep = session_ptr();
    if (busy()) {
        session_->executor().post([done, self, keep] {
            done(err::permission("query", "thread", Term::atom("busy"), Term::atom("query/1")));
        });
        return;
    }
    std::optional<Term> error;
    try {
        ReadResult r = parse_term(goal_text, session_->operators(), session_->read_options());
        query_term(r.term, std::move(r.variable_names));
    } catch (const SyntaxError& e) {
        error = syntax_error_ball(e);
    }
    session_->executor().post([done, error, self, keep] { done(error); });
}

void Thread::query_term(const Term& goal, std::vector<std::pair<std::string, VarId>> variable_names,
                        const Module* context)
{
    points_.clear();
    findall_.clear();
    locals_.clear();
    suspended_ = false;
    current_.reset();
    current_limit_ = session_->max_inferences();
    query_vars_ = std::move(variable_names);
    query_goal_ = goal;
    std::vector<VarId> vars;
    for (const auto& [name, id] : query_vars_)
        vars.push_back(id);
    auto root = std::make_shared<ChoicePoint>();
    root->goal = push_goal(normalize_body(goal).value_or(goal), 0, context ? context : &session_->user(), nullptr);
    root->bindings = BindingChain::root(Substitution::identity(vars));
    root->serial = ++point_serial_;
    push(std::move(root));
}

void Thread::answer(AnswerHandler handler)
{
    calls_.push_back(std::move(handler));
    if (calls_.size() == 1 && !suspended_)
        again();
}

void Thread::deliver(AnswerHandler handler, Answer answer)
{
    auto self = shared_from_this();
    auto keep = session_ptr();
    session_->executor().post([self, keep, handler = std::move(handler), answer = std::move(answer)] { handler(answer); });
}

void Thread::again()
{
    while (!calls_.empty()) {
        while (current_limit_ > 0 && !points_.empty() && !points_.back()->is_answer() &&
               !points_.back()->is_error()) {
            if (step())
                return;
        }
        AnswerHandler handler = std::move(calls_.front());
        calls_.pop_front();
        Answer a;
        if (points_.empty()) {
            a.kind = Answer::Kind::failure;
        } else if (points_.back()->is_error()) {
            a.kind = Answer::Kind::error;
            a.ball = *points_.back()->error;
            points_.pop_back();
        } else if (points_.back()->is_answer()) {
            a.kind = Answer::Kind::success;
            a.bindings = points_.back()->substitution();
            points_.pop_back();
        } else {
            a.kind = Answer::Kind::limit;
        }
        current_limit_ = session_->max_inferences();
        deliver(std::move(handler), std::move(a));
    }
}

void Thread::resume()
{
    suspended_ = false;
    again();
}

bool Thread::step()
{
    if (points_.empty())
        return false;
    PointPtr point = std::move(points_.back());
    points_.pop_back();
    // Backtracking into a catch marker or past an answer simply fails.
    if (!point->goal || point->catch_frame || point->error)
        return false;
    current_ = point;
    ++inferences_;
    if (current_limit_ > 0)
        --current_limit_;
    const GoalNode& g = *point->goal;
    const Term& atom = g.term;
    if (atom.is_var()) {
        throw_error(err::instantiation(Term::atom("call/1")));
        return false;
    }
    if (!atom.is_callable()) {
        throw_error(err::type("callable", atom, Term::atom("call/1")));
        return false;
    }
    auto [module, pred] = session_->resolve(PredicateIndicator::of(atom), g.module);
    if (!pred) {
        unknown_procedure(atom);
        return false;
    }
    if (pred->is_native()) {
        if (pred->native(*this, point, atom)) {
            suspended_ = true;
            return true;
        }
        return false;
    }
    resolve_clauses(point, atom, *pred, module);
    return false;
}

void Thread::resolve_clauses(const PointPtr& point, const Term& atom, Predicate& pred, const Module* def_module)
{
    const Term* first = atom.arity() > 0 ? &atom.arg(0) : nullptr;
    auto candidates = pred.candidates(first);
    std::vector<PointPtr> states;
    std::size_t barrier = points_.size();
    bool oc = occurs_check();
    for (const auto& stored : candidates) {
        Renamer renamer(fresh_);
        Term head = renamer.rename(stored->clause.head);
        auto mgu = unify(atom, head, oc);
        if (!mgu)
            continue;
        GoalList rest = point->goal->next;
        GoalList goal = stored->clause.is_fact()
                            ? rest
                            : push_goal(renamer.rename(stored->clause.body), barrier, def_module, rest);
        states.push_back(make_child(point, std::move(goal), *mgu));
    }
    prepend(std::move(states));
}

void Thread::unknown_procedure(const Term& atom)
{
    PredicateIndicator pi = PredicateIndicator::of(atom);
    auto unknown = session_->get_flag("unknown");
    std::string mode = unknown && unknown->is_atom() ? unknown->name() : "error";
    if (mode == "fail")
        return;
    if (mode == "warning") {
        session_->warn("unknown procedure " + pi.str());
        return;
    }
    throw_error(err::existence("procedure", pi.to_term(), pi.to_term()));
}

PointPtr Thread::make_child(const PointPtr& parent, GoalList goal, const Substitution& mgu) const
{
    auto child = std::make_shared<ChoicePoint>();
    if (parent)
        child->bindings = parent->bindings.extend(mgu);
    child->goal = apply_goal(goal, mgu, parent ? parent->bindings : BindingChain());
    if (const GoalNode* head = child->goal.get(); head && head->deferred)
        child->goal = push_goal(child->bindings.resolve_since(head->term, head->env), head->cut_barrier, head->module,
                                head->next);
    child->parent = parent;
    return child;
}

void Thread::push(PointPtr p)
{
    if (p->serial == 0)
        const_cast<ChoicePoint&>(*p).serial = ++point_serial_;
    points_.push_back(std::move(p));
    if (observer_ && observer_->pushed)
        observer_->pushed(points_.back());
}

void Thread::prepend(std::vector<PointPtr> states)
{
    // Serials and observer notifications follow clause order even though
    // the stack receives the states last-first.
    for (const auto& s : states)
        if (s->serial == 0)
            const_cast<ChoicePoint&>(*s).serial = ++point_serial_;
    for (auto it = states.rbegin(); it != states.rend(); ++it)
        points_.push_back(*it);
    if (observer_ && observer_->pushed)
        for (const auto& s : states)
            observer_->pushed(s);
}

void Thread::success(const PointPtr& point, const Substitution& mgu)
{
    push(make_child(point, point->goal->next, mgu));
}

void Thread::replace(const PointPtr& point, const Term& replacement, std::optional<std::size_t> barrier)
{
    const GoalNode& g = *point->goal;
    GoalList goal = push_goal(replacement, barrier.value_or(g.cut_barrier), g.module, g.next);
    push(make_child(point, std::move(goal), {}));
}

void Thread::replace_in(const PointPtr& point, const Term& goal, const Module* module, std::size_t barrier)
{
    push(make_child(point, push_goal(goal, barrier, module, point->goal->next), {}));
}

bool Thread::unify_and_continue(const PointPtr& point, const Term& a, const Term& b)
{
    auto mgu = unify(a, b, occurs_check());
    if (!mgu)
        return false;
    success(point, *mgu);
    return true;
}

void Thread::cut(std::size_t height)
{
    while (points_.size() > height) {
        PointPtr p = std::move(points_.back());
        points_.pop_back();
        if (observer_ && observer_->pruned)
            observer_->pruned(p);
    }
}

void Thread::remove_point(std::uint64_t serial)
{
    for (auto it = points_.begin(); it != points_.end(); ++it) {
        if ((*it)->serial == serial) {
            PointPtr p = *it;
            points_.erase(it);
            if (observer_ && observer_->pruned)
                observer_->pruned(p);
            return;
        }
    }
}

void Thread::throw_error(const Term& raw_ball)
{
    Term ball = copy_term(raw_ball, fresh_);
    std::unordered_set<std::uint64_t> active;
    if (current_) {
        for (const GoalNode* g = current_->goal.get(); g; g = g->next.get())
            if (g->term.has_functor(Symbol("$catch_exit"), 1) && g->term.arg(0).is_integer())
                active.insert(static_cast<std::uint64_t>(g->term.arg(0).int_value()));
    }
    while (!points_.empty()) {
        PointPtr p = std::move(points_.back());
        points_.pop_back();
        const auto& frame = p->catch_frame;
        if (frame && active.count(frame->id)) {
            if (auto mgu = unify(frame->catcher, ball, occurs_check())) {
                GoalList goal = push_goal(Term::compound("call", {frame->recovery}), points_.size(), frame->module,
                                          frame->continuation);
                push(make_child(p, std::move(goal), *mgu));
                return;
            }
        }
        if (observer_ && observer_->pruned)
            observer_->pruned(p);
    }
    auto state = std::make_shared<ChoicePoint>();
    state->error = ball;
    state->parent = current_;
    if (current_)
        state->bindings = current_->bindings;
    push(std::move(state));
}

} // namespace plweb
