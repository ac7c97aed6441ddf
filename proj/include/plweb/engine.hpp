#pragma once

#include "plweb/executor.hpp"
#include "plweb/filesystem.hpp"
#include "plweb/reader.hpp"
#include "plweb/substitution.hpp"
#include "plweb/term.hpp"

#include <algorithm>
#include <any>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <typeindex>
#include <unordered_map>
#include <vector>

namespace plweb {

class Module;
class Session;
class Thread;

// One conjunct of a goal. Conjunctions are singly linked and shared between
// choice points. `cut_barrier` is the stack height a `!` in this conjunct
// cuts back to; `module` is the context used to resolve it.
struct GoalNode;
using GoalList = std::shared_ptr<const GoalNode>;

struct GoalNode {
    Term term;
    std::size_t cut_barrier = 0;
    const Module* module = nullptr;
    mutable GoalList next;
    // A deferred conjunct still needs the unifiers added after `env`; it is
    // brought up to date when it becomes the selected goal. This keeps long
    // pending continuations from being rebuilt at every step.
    bool deferred = false;
    BindingChain env;
    // Variable bounds over the conjuncts from here on that are kept current.
    std::uint64_t newest_serial = 0;
    bool has_named_var = false;

    GoalNode(Term t, std::size_t barrier, const Module* m, GoalList rest)
        : term(std::move(t)), cut_barrier(barrier), module(m), next(std::move(rest))
    {
        if (!term.is_ground()) {
            newest_serial = term.newest_serial();
            has_named_var = term.has_named_var();
        }
        add_rest_bounds();
    }
    GoalNode(const GoalNode& stale, BindingChain since, GoalList rest)
        : term(stale.term), cut_barrier(stale.cut_barrier), module(stale.module), next(std::move(rest)),
          deferred(true), env(std::move(since))
    {
        add_rest_bounds();
    }
    ~GoalNode();

private:
    void add_rest_bounds()
    {
        if (next) {
            newest_serial = std::max(newest_serial, next->newest_serial);
            has_named_var = has_named_var || next->has_named_var;
        }
    }
};

GoalList push_goal(Term t, std::size_t barrier, const Module* m, GoalList rest);
// Applies a unifier to the conjuncts it can reach. `before` is the chain the
// goal was valid under; conjuncts past the first are deferred rather than
// rewritten.
GoalList apply_goal(const GoalList& goal, const Substitution& s, const BindingChain& before);
// Conjuncts as terms under `bindings`, skipping internal control markers.
std::vector<Term> goal_terms(const GoalList& goal, const BindingChain& bindings);

// Marks the recovery scope of a catch/3 call.
struct CatchFrame {
    std::uint64_t id = 0;
    Term catcher;
    Term recovery;
    GoalList continuation;
    std::size_t cut_barrier = 0;
    const Module* module = nullptr;
};

struct ChoicePoint;
using PointPtr = std::shared_ptr<const ChoicePoint>;

// A resolution state: goal, substitution over the query variables, and the
// point it was derived from. The parent link does not keep the parent alive,
// so abandoned states are freed as the search moves on. A null goal marks an
// answer.
struct ChoicePoint {
    GoalList goal;
    BindingChain bindings;
    std::weak_ptr<const ChoicePoint> parent;
    std::optional<Term> error;                   // error state when set
    std::shared_ptr<const CatchFrame> catch_frame; // catch/3 marker when set
    std::uint64_t serial = 0;                    // creation order within a thread

    bool is_answer() const { return !goal && !error && !catch_frame; }
    bool is_error() const { return error.has_value(); }
    Substitution substitution() const { return bindings.resolve(); }
};

struct Answer {
    enum class Kind { success, failure, error, limit };
    Kind kind = Kind::failure;
    Substitution bindings; // success: query variables in first-appearance order
    Term ball;             // error

    bool is_success() const { return kind == Kind::success; }
};

using AnswerHandler = std::function<void(const Answer&)>;
// Completion of consult/query: nullopt on success, else the error ball.
using DoneHandler = std::function<void(const std::optional<Term>&)>;

// Native predicate body. Returns true when it has taken over control
// asynchronously and will call Thread::resume() itself.
using NativeProcedure = std::function<bool(Thread&, const PointPtr& point, const Term& atom)>;

struct StoredClause {
    Clause clause;
    std::uint64_t id = 0;
};

// First-argument index key of a clause head or call.
struct IndexKey {
    enum class Kind : std::uint8_t { none, atomic_name, number_int, number_float, host } kind = Kind::none;
    Symbol name;
    std::size_t arity = 0;
    std::int64_t ival = 0;
    double fval = 0;
    const void* host = nullptr;

    static IndexKey of(const Term& first_arg);
    bool operator==(const IndexKey& o) const;
};

struct IndexKeyHash {
    std::size_t operator()(const IndexKey& k) const;
};

class Predicate {
public:
    NativeProcedure native;
    bool dynamic = false;

    bool is_native() const { return static_cast<bool>(native); }
    const std::vector<std::shared_ptr<const StoredClause>>& clauses() const { return clauses_; }
    void add(std::shared_ptr<const StoredClause> c, bool at_end);
    bool erase(std::uint64_t id);
    void clear();
    // Clauses whose head may match a call with the given first argument, in
    // source order. Clauses bucketed by principal functor; variable heads
    // belong to every bucket.
    std::vector<std::shared_ptr<const StoredClause>> candidates(const Term* first_arg) const;

private:
    void rebuild_index() const;

    std::vector<std::shared_ptr<const StoredClause>> clauses_;
    mutable bool index_dirty_ = true;
    mutable std::unordered_map<IndexKey, std::vector<std::size_t>, IndexKeyHash> buckets_;
    mutable std::vector<std::size_t> variable_heads_;
};

class Module {
public:
    explicit Module(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    Predicate* find(const PredicateIndicator& pi);
    const Predicate* find(const PredicateIndicator& pi) const;
    Predicate& define(const PredicateIndicator& pi) { return predicates_[pi]; }
    void define_native(std::string_view name, std::size_t arity, NativeProcedure p);
    bool remove(const PredicateIndicator& pi) { return predicates_.erase(pi) > 0; }

    // Visible (exported) predicate indicators.
    void export_predicate(const PredicateIndicator& pi) { exports_.push_back(pi); }
    void export_all(bool on) { export_all_ = on; }
    bool is_visible(const PredicateIndicator& pi) const;
    const std::vector<PredicateIndicator>& exports() const { return exports_; }

    void import(const Module* m);
    const std::vector<const Module*>& imports() const { return imports_; }

    // Library modules are shipped with the engine; their predicates cannot
    // be modified by consult or assert.
    bool is_library() const { return library_; }
    void set_library(bool v) { library_ = v; }

    const std::unordered_map<PredicateIndicator, Predicate, PredicateIndicatorHash>& predicates() const
    {
        return predicates_;
    }

private:
    std::string name_;
    std::unordered_map<PredicateIndicator, Predicate, PredicateIndicatorHash> predicates_;
    std::vector<PredicateIndicator> exports_;
    std::vector<const Module*> imports_;
    bool export_all_ = false;
    bool library_ = false;
};

// Registers one or more modules into a session.
using PackageEntry = std::function<void(Session&)>;

struct SessionOptions {
    std::uint64_t max_inferences = 100000;
    std::optional<std::uint64_t> seed;
    std::shared_ptr<Executor> executor;   // shared event loop; created when null
    std::shared_ptr<FileSystem> file_system; // virtual when null
};

// Where a program comes from.
struct Source {
    enum class Kind { automatic, text, path, url, element };
    Kind kind = Kind::automatic;
    std::string value;

    static Source text(std::string s) { return {Kind::text, std::move(s)}; }
    static Source path(std::string s) { return {Kind::path, std::move(s)}; }
    static Source url(std::string s) { return {Kind::url, std::move(s)}; }
    static Source element(std::string s) { return {Kind::element, std::move(s)}; }
};

class Session : public std::enable_shared_from_this<Session> {
public:
    static std::shared_ptr<Session> create(SessionOptions options = {});
    ~Session();

    Executor& executor() { return *executor_; }
    const std::shared_ptr<Executor>& executor_ptr() const { return executor_; }
    OperatorTable& operators() { return operators_; }
    const OperatorTable& operators() const { return operators_; }

    // Prolog flags (occurs_check, double_quotes, unknown, bounded, ...).
    std::optional<Term> get_flag(std::string_view name) const;
    // Returns an error ball when the flag or value is not acceptable.
    std::optional<Term> set_flag(std::string_view name, const Term& value);
    std::vector<std::pair<std::string, Term>> flags() const;
    bool occurs_check() const { return occurs_check_; }
    DoubleQuotes double_quotes() const { return double_quotes_; }
    ReadOptions read_options() const;

    std::uint64_t max_inferences() const { return max_inferences_; }
    void set_max_inferences(std::uint64_t n) { max_inferences_ = n; }

    Module& user() { return *user_; }
    Module& system() { return *system_; }
    Module* find_module(std::string_view name);
    Module& module(std::string_view name); // created on demand
    // Resolves a goal's predicate in the calling module: own predicates,
    // visible predicates of imports, system, then user.
    std::pair<Module*, Predicate*> resolve(const PredicateIndicator& pi, const Module* context);

    // Built-in library registry for use_module(library(Name)).
    void register_package(std::string name, PackageEntry entry);
    // Loads a registered library once and returns its module.
    Module* load_library(std::string_view name);
    std::vector<std::string>& library_path() { return library_path_; }

    // Adds clauses parsed from text to a module synchronously; directives are
    // not allowed here (library bootstrapping).
    void load_clauses(Module& m, std::string_view text);
    // Stores one clause term (H :- B or H); returns an error ball on failure.
    std::optional<Term> add_clause(Module& m, const Term& clause, bool at_end = true, const Term& context = Term());
    // permission_error when user code may not change pi in m.
    std::optional<Term> check_modifiable(const Module& m, const PredicateIndicator& pi, const Term& context);

    std::shared_ptr<Thread> thread() { return default_thread_; }
    std::shared_ptr<Thread> fork();

    // Asynchronous program loading; completion is always posted.
    void consult(Source source, DoneHandler done, Module* into = nullptr);
    void consult(std::string_view text, DoneHandler done) { consult(Source{Source::Kind::automatic, std::string(text)}, std::move(done)); }

    // Convenience forwarding to the default thread.
    void query(std::string_view goal, DoneHandler done);
    void answer(AnswerHandler handler);

    FileSystem& file_system() { return *file_system_; }
    void set_file_system(std::shared_ptr<FileSystem> fs) { file_system_ = std::move(fs); }

    // Output of write/1 and friends.
    void write_output(std::string_view text);
    void set_output(std::function<void(std::string_view)> sink) { output_ = std::move(sink); }

    void warn(std::string message);
    const std::vector<std::string>& warnings() const { return warnings_; }

    std::mt19937_64& rng() { return rng_; }
    void seed(std::uint64_t s) { rng_.seed(s); }

    std::uint64_t next_clause_id() { return ++clause_ids_; }

    bool halted() const { return halted_; }
    int exit_code() const { return exit_code_; }
    void halt(int code)
    {
        halted_ = true;
        exit_code_ = code;
    }

    // Integers that overflowed 64 bits and were promoted to floats.
    std::uint64_t overflow_promotions() const { return overflow_promotions_; }
    void note_overflow() { ++overflow_promotions_; }

    // Script lookup for Source::element and URL fetching; set by embedders.
    std::function<std::optional<std::string>(const std::string& id)> element_text;
    std::function<void(const std::string& url, std::function<void(std::optional<std::string>)>)> url_fetcher;

    // Per-session state of optional packages (host bridge, document, ...).
    template <typename T>
    T* extension()
    {
        auto it = extensions_.find(typeid(T));
        return it == extensions_.end() ? nullptr : std::any_cast<std::shared_ptr<T>>(it->second).get();
    }
    template <typename T>
    void set_extension(std::shared_ptr<T> value)
    {
        extensions_[typeid(T)] = std::move(value);
    }

private:
    explicit Session(SessionOptions options);
    void init();

    std::shared_ptr<Executor> executor_;
    std::shared_ptr<FileSystem> file_system_;
    OperatorTable operators_;
    std::unordered_map<std::string, std::unique_ptr<Module>> modules_;
    Module* user_ = nullptr;
    Module* system_ = nullptr;
    std::unordered_map<std::string, PackageEntry> packages_;
    std::vector<std::string> library_path_;
    std::shared_ptr<Thread> default_thread_;
    std::uint64_t max_inferences_;
    bool occurs_check_ = false;
    DoubleQuotes double_quotes_ = DoubleQuotes::codes;
    std::string unknown_ = "error";
    std::function<void(std::string_view)> output_;
    std::vector<std::string> warnings_;
    std::mt19937_64 rng_;
    std::uint64_t clause_ids_ = 0;
    bool halted_ = false;
    int exit_code_ = 0;
    std::uint64_t overflow_promotions_ = 0;
    std::unordered_map<std::type_index, std::any> extensions_;

    friend class Thread;
};

// Observes stack changes; used by the derivation-tree recorder.
struct ThreadObserver {
    std::function<void(const PointPtr&)> pushed;
    std::function<void(const PointPtr&)> pruned; // removed by cut or catch
};

class Thread : public std::enable_shared_from_this<Thread> {
public:
    explicit Thread(std::shared_ptr<Session> session);

    Session& session() { return *session_; }
    std::shared_ptr<Session> session_ptr() { return session_weak_.lock(); }

    // Parses the goal and resets the stack to a single root point.
    void query(std::string_view goal_text, DoneHandler done);
    // Same with an already-built goal; variable_names selects the reported
    // query variables.
    void query_term(const Term& goal, std::vector<std::pair<std::string, VarId>> variable_names,
                    const Module* context = nullptr);

    // Requests the next answer. The handler runs from the executor.
    void answer(AnswerHandler handler);

    // One resolution step on the top point. Returns true when a native
    // suspended the derivation.
    bool step();
    // Drives resolution while answer handlers are pending.
    void again();
    // Called by asynchronous natives when they are done.
    void resume();

    // --- helpers for native predicates ---
    // Pushes states so that states[0] is tried first.
    void prepend(std::vector<PointPtr> states);
    void push(PointPtr p);
    // Continues with the rest of point's goal after the selected atom.
    void success(const PointPtr& point, const Substitution& mgu = {});
    // Continues with `replacement` in place of the selected atom.
    void replace(const PointPtr& point, const Term& replacement, std::optional<std::size_t> barrier = std::nullopt);
    // Unifies a and b and continues on success; returns whether it unified.
    bool unify_and_continue(const PointPtr& point, const Term& a, const Term& b);
    PointPtr make_child(const PointPtr& parent, GoalList goal, const Substitution& mgu) const;
    // Pushes `goal` before the rest of point's goal, resolved in `module`.
    void replace_in(const PointPtr& point, const Term& goal, const Module* module, std::size_t barrier);
    // Raises a Prolog exception at the current point, unwinding to the
    // innermost active catch/3 whose catcher unifies.
    void throw_error(const Term& ball);
    // Cuts the stack back to `height`.
    void cut(std::size_t height);
    // Drops the point with the given serial if it is still on the stack.
    void remove_point(std::uint64_t serial);

    FreshVars& fresh() { return fresh_; }
    bool occurs_check() const { return session_->occurs_check(); }
    const std::vector<PointPtr>& points() const { return points_; }
    std::size_t height() const { return points_.size(); }
    const PointPtr& current_point() const { return current_; }
    bool suspended() const { return suspended_; }
    bool busy() const { return !calls_.empty() || suspended_; }

    std::uint64_t inferences() const { return inferences_; }
    std::uint64_t current_limit() const { return current_limit_; }
    const std::vector<std::pair<std::string, VarId>>& query_variables() const { return query_vars_; }
    const Term& query_goal() const { return query_goal_; }

    std::uint64_t next_catch_id() { return ++catch_ids_; }
    std::vector<Term>& findall_bucket(std::uint64_t id) { return findall_[id]; }
    void drop_findall_bucket(std::uint64_t id) { findall_.erase(id); }
    std::uint64_t next_findall_id() { return ++findall_ids_; }

    void set_observer(std::optional<ThreadObserver> o) { observer_ = std::move(o); }

    // Arbitrary per-thread values for packages (e.g. the active DOM event).
    std::unordered_map<std::string, Term>& locals() { return locals_; }

private:
    void resolve_clauses(const PointPtr& point, const Term& atom, Predicate& pred, const Module* def_module);
    void unknown_procedure(const Term& atom);
    void deliver(AnswerHandler handler, Answer answer);

    Session* session_;
    std::weak_ptr<Session> session_weak_;
    std::vector<PointPtr> points_;
    std::deque<AnswerHandler> calls_;
    FreshVars fresh_;
    std::uint64_t inferences_ = 0;
    std::uint64_t current_limit_ = 0;
    bool suspended_ = false;
    PointPtr current_;
    std::vector<std::pair<std::string, VarId>> query_vars_;
    Term query_goal_;
    std::uint64_t catch_ids_ = 0;
    std::uint64_t findall_ids_ = 0;
    std::uint64_t point_serial_ = 0;
    std::unordered_map<std::uint64_t, std::vector<Term>> findall_;
    std::optional<ThreadObserver> observer_;
    std::unordered_map<std::string, Term> locals_;
};

// Builds error(Formal, Context) balls.
namespace err {
Term instantiation(const Term& context);
Term type(std::string_view type, const Term& culprit, const Term& context);
Term domain(std::string_view domain, const Term& culprit, const Term& context);
Term existence(std::string_view kind, const Term& culprit, const Term& context);
Term permission(std::string_view action, std::string_view type, const Term& culprit, const Term& context);
Term representation(std::string_view what, const Term& context);
Term evaluation(std::string_view what, const Term& context);
Term syntax(std::string_view detail, const Term& context);
Term system(std::string_view description, const Term& context);
Term indicator(const Term& atom); // name/arity of a callable
} // namespace err

Term syntax_error_ball(const SyntaxError& e);

// Clause-body normal form: variables in goal position become call(X).
// nullopt when some conjunct is not callable.
std::optional<Term> normalize_body(const Term& body);

} // namespace plweb
