#pragma once

#include "plweb/engine.hpp"
#include "plweb/tooling.hpp"

#include <optional>
#include <string>
#include <vector>

namespace plweb::testing {

// Synchronous driver over a session: every call runs the executor until the
// asynchronous completion has been delivered.
struct Harness {
    std::shared_ptr<Session> session;
    std::string output;

    explicit Harness(SessionOptions options = {}) : session(Session::create(std::move(options)))
    {
        session->set_output([this](std::string_view s) { output += s; });
    }

    // nullopt on success, else the rendered error ball.
    std::optional<std::string> consult(const std::string& text)
    {
        bool done = false;
        std::optional<Term> error;
        session->consult(Source::text(text), [&](const std::optional<Term>& e) {
            error = e;
            done = true;
        });
        session->executor().run_until([&] { return done; });
        if (!done)
            return std::string("consult did not complete");
        if (error)
            return render_term(*error, {true, false, true, 0}, session->operators());
        return std::nullopt;
    }

    std::optional<std::string> query(const std::string& goal, Thread* thread = nullptr)
    {
        Thread& t = thread ? *thread : *session->thread();
        bool done = false;
        std::optional<Term> error;
        t.query(goal, [&](const std::optional<Term>& e) {
            error = e;
            done = true;
        });
        session->executor().run_until([&] { return done; });
        if (error)
            return render_term(*error, {true, false, true, 0}, session->operators());
        return std::nullopt;
    }

    Answer next(Thread* thread = nullptr)
    {
        Thread& t = thread ? *thread : *session->thread();
        std::optional<Answer> got;
        t.answer([&](const Answer& a) { got = a; });
        session->executor().run_until([&] { return got.has_value(); });
        return got.value_or(Answer{});
    }

    std::string next_text(Thread* thread = nullptr) { return format_answer(*session, next(thread)); }

    // Answers as formatted text, up to `max`, stopping after the first
    // non-success (which is included).
    std::vector<std::string> run(const std::string& goal, std::size_t max = 100)
    {
        std::vector<std::string> out;
        if (auto e = query(goal)) {
            out.push_back("query error: " + *e);
            return out;
        }
        for (std::size_t i = 0; i < max; ++i) {
            Answer a = next();
            out.push_back(format_answer(*session, a));
            if (!a.is_success())
                break;
        }
        return out;
    }

    std::string format_quoted(const std::string& goal)
    {
        if (auto e = query(goal))
            return "query error: " + *e;
        return format_answer(*session, next(), {true, false, true, 0});
    }

    // First answer only.
    std::string once(const std::string& goal)
    {
        auto r = run(goal, 1);
        return r.empty() ? "" : r.front();
    }
};

} // namespace plweb::testing
