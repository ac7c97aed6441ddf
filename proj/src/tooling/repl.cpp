#include "plweb/tooling.hpp"

#include <istream>
#include <ostream>

namespace plweb {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

// A line made only of ';' (and blanks) asks for more answers.
bool is_more_request(const std::string& line)
{
    std::string t = trim(line);
    return !t.empty() && t.find_first_not_of("; \t") == std::string::npos;
}

std::size_t count_requests(const std::string& line)
{
    std::size_t n = 0;
    for (char c : line)
        n += c == ';';
    return n;
}

std::string describe_query_error(Session& s, const Term& ball)
{
    if (ball.has_functor(Symbol("error"), 2) && ball.arg(0).has_functor(Symbol("syntax_error"), 1))
        return "syntax error: " + render_term(ball.arg(0).arg(0), {}, s.operators()) + " at " +
               render_term(ball.arg(1), {}, s.operators());
    return "uncaught exception: " + render_term(ball, {true, false, true, 0}, s.operators()) + ".";
}

} // namespace

int run_repl(Session& session, std::istream& in, std::ostream& out, const ReplOptions& options)
{
    session.set_output([&out](std::string_view text) { out << text << std::flush; });
    auto thread = session.thread();
    std::string pending; // a goal line read while waiting for ';'

    for (;;) {
        std::string text = std::move(pending);
        pending.clear();
        if (text.empty())
            out << options.prompt << std::flush;
        std::string line;
        while (trim(text).empty() || trim(text).back() != '.') {
            if (!std::getline(in, line)) {
                if (in.bad())
                    return 74;
                out << "\n";
                return 0;
            }
            text += line + "\n";
        }

        std::optional<Term> error;
        bool ready = false;
        thread->query(text, [&](const std::optional<Term>& e) {
            error = e;
            ready = true;
        });
        session.executor().run_until([&] { return ready; });
        if (error) {
            out << describe_query_error(session, *error) << "\n";
            continue;
        }

        std::size_t requested = 1;
        while (requested > 0) {
            --requested;
            std::optional<Answer> got;
            thread->answer([&got](const Answer& a) { got = a; });
            session.executor().run_until([&] { return got.has_value(); });
            if (!got)
                return 70;
            if (session.halted())
                return session.exit_code();
            out << format_answer(session, *got, options.write) << "\n" << std::flush;
            bool more_possible = got->kind == Answer::Kind::success || got->kind == Answer::Kind::limit;
            if (!more_possible)
                break;
            if (requested > 0)
                continue;
            if (!std::getline(in, line)) {
                if (in.bad())
                    return 74;
                return 0;
            }
            if (is_more_request(line)) {
                requested = count_requests(line);
            } else if (!trim(line).empty() && trim(line) != ".") {
                // Not an answer to the prompt: the next goal.
                pending = line + "\n";
            }
        }
    }
}

} // namespace plweb
