#include "library.hpp"

#include "plweb/unify.hpp"
#include "plweb/writer.hpp"

#include <chrono>
#include <map>

namespace plweb {

namespace {

struct Stream {
    std::string path;
    std::string mode; // read | write | append
    std::string buffer;
    std::unique_ptr<TermReader> reader;
    std::string text; // contents the reader points into
};

struct OsState {
    std::map<std::int64_t, std::unique_ptr<Stream>> streams;
    std::int64_t next_id = 0;
};

OsState& state(Session& s)
{
    if (auto* st = s.extension<OsState>())
        return *st;
    s.set_extension(std::make_shared<OsState>());
    return *s.extension<OsState>();
}

bool sleep_goal(Thread& t, const PointPtr& p, const Term& atom)
{
    const Term& time = atom.arg(0);
    Term ctx = err::indicator(atom);
    if (time.is_var())
        return raise(t, err::instantiation(ctx));
    if (!time.is_integer())
        return raise(t, err::type("integer", time, ctx));
    auto self = t.shared_from_this();
    auto keep = t.session_ptr();
    t.session().executor().post_after(std::chrono::milliseconds(std::max<std::int64_t>(0, time.int_value())),
                                      [self, keep, p] {
                                          self->success(p);
                                          self->resume();
                                      });
    return true;
}

std::optional<std::string> path_arg(Thread& t, const Term& f, const Term& ctx)
{
    if (f.is_var()) {
        t.throw_error(err::instantiation(ctx));
        return std::nullopt;
    }
    if (!f.is_atom()) {
        t.throw_error(err::type("atom", f, ctx));
        return std::nullopt;
    }
    return f.name();
}

Stream* stream_arg(Thread& t, const Term& s, const Term& ctx)
{
    if (s.is_var()) {
        t.throw_error(err::instantiation(ctx));
        return nullptr;
    }
    if (!s.has_functor(Symbol("$stream"), 1) || !s.arg(0).is_integer()) {
        t.throw_error(err::domain("stream_or_alias", s, ctx));
        return nullptr;
    }
    auto& st = state(t.session());
    auto it = st.streams.find(s.arg(0).int_value());
    if (it == st.streams.end()) {
        t.throw_error(err::existence("stream", s, ctx));
        return nullptr;
    }
    return it->second.get();
}

bool open_goal(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    auto path = path_arg(t, atom.arg(0), ctx);
    if (!path)
        return false;
    const Term& mode = atom.arg(1);
    if (mode.is_var())
        return raise(t, err::instantiation(ctx));
    if (!mode.is_atom())
        return raise(t, err::type("atom", mode, ctx));
    if (mode.name() != "read" && mode.name() != "write" && mode.name() != "append")
        return raise(t, err::domain("io_mode", mode, ctx));
    if (!atom.arg(2).is_var())
        return raise(t, err::type("variable", atom.arg(2), ctx));
    Session& s = t.session();
    auto stream = std::make_unique<Stream>();
    stream->path = *path;
    stream->mode = mode.name();
    if (stream->mode == "read") {
        auto text = s.file_system().read(*path);
        if (!text)
            return raise(t, err::existence("source_sink", atom.arg(0), ctx));
        stream->text = *text;
        stream->reader = std::make_unique<TermReader>(stream->text, s.operators(), s.read_options());
    } else if (stream->mode == "write") {
        if (!s.file_system().write(*path, "", false))
            return raise(t, err::permission("open", "source_sink", atom.arg(0), ctx));
    }
    auto& st = state(s);
    std::int64_t id = ++st.next_id;
    st.streams[id] = std::move(stream);
    t.unify_and_continue(p, atom.arg(2), Term::compound("$stream", {Term::integer(id)}));
    return false;
}

bool close_goal(Thread& t, const PointPtr& p, const Term& atom)
{
    Term ctx = err::indicator(atom);
    Stream* s = stream_arg(t, atom.arg(0), ctx);
    if (!s)
        return false;
    if (s->mode != "read" && !s->buffer.empty())
        t.session().file_system().write(s->path, s->buffer, true);
    state(t.session()).streams.erase(atom.arg(0).arg(0).int_value());
    t.success(p);
    return false;
}

bool read_term_goal(Thread& t, const PointPtr& p, const Term& atom, const Term& stream_term, const Term& target,
                    const Term& options)
{
    Term ctx = err::indicator(atom);
    std::optional<ReadResult> r;
    if (stream_term.is_atom(Symbol("user_input"))) {
        r = std::nullopt;
    } else {
        Stream* s = stream_arg(t, stream_term, ctx);
        if (!s)
            return false;
        if (!s->reader)
            return raise(t, err::permission("input", "stream", stream_term, ctx));
        try {
            r = s->reader->next();
        } catch (const SyntaxError& e) {
            return raise(t, syntax_error_ball(e));
        }
    }
    if (!r) {
        t.unify_and_continue(p, target, Term::atom("end_of_file"));
        return false;
    }
    rename_read(*r, t.fresh());
    std::vector<Term> pat{target}, val{r->term};
    if (auto opts = list_items(options)) {
        for (const Term& o : *opts) {
            if (o.has_functor(Symbol("variable_names"), 1)) {
                std::vector<Term> pairs;
                for (const auto& [name, id] : r->variable_names)
                    pairs.push_back(Term::compound("=", {Term::atom(name), Term::var(id)}));
                pat.push_back(o.arg(0));
                val.push_back(Term::list(pairs));
            } else if (o.has_functor(Symbol("variables"), 1)) {
                std::vector<Term> vars;
                for (const auto& v : term_variables(r->term))
                    vars.push_back(Term::var(v));
                pat.push_back(o.arg(0));
                val.push_back(Term::list(vars));
            }
        }
    }
    if (auto mgu = unify_sequences(pat, val, t.occurs_check()))
        t.success(p, *mgu);
    return false;
}

bool write_to(Thread& t, const PointPtr& p, const Term& atom, const Term& stream_term, const std::string& text)
{
    Term ctx = err::indicator(atom);
    if (stream_term.is_atom(Symbol("user_output")) || stream_term.is_atom(Symbol("user_error"))) {
        t.session().write_output(text);
        t.success(p);
        return false;
    }
    Stream* s = stream_arg(t, stream_term, ctx);
    if (!s)
        return false;
    if (s->mode == "read")
        return raise(t, err::permission("output", "stream", stream_term, ctx));
    s->buffer += text;
    t.success(p);
    return false;
}

std::string render(Thread& t, const Term& term, bool quoted)
{
    return render_term(term, {quoted, false, true, 0}, t.session().operators());
}

} // namespace

void install_os(Session& s)
{
    Module& m = s.module("os");
    m.export_all(true);
    m.define_native("sleep", 1, sleep_goal);
    m.define_native("open", 3, open_goal);
    m.define_native("open", 4, open_goal);
    m.define_native("close", 1, close_goal);
    m.define_native("close", 2, close_goal);
    m.define_native("read_term", 3, [](Thread& t, const PointPtr& p, const Term& a) {
        return read_term_goal(t, p, a, a.arg(0), a.arg(1), a.arg(2));
    });
    m.define_native("read_term", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        return read_term_goal(t, p, a, Term::atom("user_input"), a.arg(0), a.arg(1));
    });
    m.define_native("read", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        return read_term_goal(t, p, a, a.arg(0), a.arg(1), Term::atom(sym::nil()));
    });
    m.define_native("read", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        return read_term_goal(t, p, a, Term::atom("user_input"), a.arg(0), Term::atom(sym::nil()));
    });
    m.define_native("write", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        return write_to(t, p, a, a.arg(0), render(t, a.arg(1), false));
    });
    m.define_native("writeq", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        return write_to(t, p, a, a.arg(0), render(t, a.arg(1), true));
    });
    m.define_native("nl", 1, [](Thread& t, const PointPtr& p, const Term& a) { return write_to(t, p, a, a.arg(0), "\n"); });
    m.define_native("exists_file", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        auto path = path_arg(t, a.arg(0), err::indicator(a));
        if (path && t.session().file_system().exists(*path) && !t.session().file_system().is_directory(*path))
            t.success(p);
        return false;
    });
    m.define_native("exists_directory", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        auto path = path_arg(t, a.arg(0), err::indicator(a));
        if (path && t.session().file_system().is_directory(*path))
            t.success(p);
        return false;
    });
    m.define_native("delete_file", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        Term ctx = err::indicator(a);
        auto path = path_arg(t, a.arg(0), ctx);
        if (!path)
            return false;
        if (!t.session().file_system().remove(*path))
            return raise(t, err::existence("file", a.arg(0), ctx));
        t.success(p);
        return false;
    });
    m.define_native("make_directory", 1, [](Thread& t, const PointPtr& p, const Term& a) {
        Term ctx = err::indicator(a);
        auto path = path_arg(t, a.arg(0), ctx);
        if (!path)
            return false;
        if (!t.session().file_system().make_directory(*path))
            return raise(t, err::permission("create", "directory", a.arg(0), ctx));
        t.success(p);
        return false;
    });
    m.define_native("directory_files", 2, [](Thread& t, const PointPtr& p, const Term& a) {
        Term ctx = err::indicator(a);
        auto path = path_arg(t, a.arg(0), ctx);
        if (!path)
            return false;
        auto entries = t.session().file_system().list(*path);
        if (!entries)
            return raise(t, err::existence("directory", a.arg(0), ctx));
        std::vector<Term> items;
        for (const auto& e : *entries)
            items.push_back(Term::atom(e));
        t.unify_and_continue(p, a.arg(1), Term::list(items));
        return false;
    });
}

} // namespace plweb
