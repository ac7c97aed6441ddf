#include "plweb/deferred.hpp"

namespace plweb {

namespace {

Answer error_answer(const Term& ball)
{
    Answer a;
    a.kind = Answer::Kind::error;
    a.ball = ball;
    return a;
}

} // namespace

Deferred<bool> consult_deferred(Session& s, Source source)
{
    Deferred<bool> d(s.executor_ptr());
    s.consult(std::move(source), [d](const std::optional<Term>& error) {
        if (error)
            d.reject(error_answer(*error));
        else
            d.resolve(true);
    });
    return d;
}

Deferred<bool> query_deferred(Thread& t, std::string_view goal)
{
    Deferred<bool> d(t.session().executor_ptr());
    t.query(goal, [d](const std::optional<Term>& error) {
        if (error)
            d.reject(error_answer(*error));
        else
            d.resolve(true);
    });
    return d;
}

Deferred<Answer> answer_deferred(Thread& t)
{
    Deferred<Answer> d(t.session().executor_ptr());
    t.answer([d](const Answer& a) {
        if (a.kind == Answer::Kind::error || a.kind == Answer::Kind::limit)
            d.reject(a);
        else
            d.resolve(a);
    });
    return d;
}

Deferred<std::optional<Answer>> AnswerStream::next()
{
    Deferred<std::optional<Answer>> d(thread_->session().executor_ptr());
    if (done_) {
        d.resolve(std::nullopt);
        return d;
    }
    thread_->answer([this, d](const Answer& a) {
        switch (a.kind) {
        case Answer::Kind::success:
            d.resolve(a);
            break;
        case Answer::Kind::failure:
            done_ = true;
            d.resolve(std::nullopt);
            break;
        default:
            done_ = true;
            d.reject(a);
            break;
        }
    });
    return d;
}

std::vector<Answer> AnswerStream::collect(std::size_t max)
{
    std::vector<Answer> out;
    while (out.size() < max) {
        auto a = next().get();
        if (!a)
            break;
        out.push_back(std::move(*a));
    }
    return out;
}

AnswerStream answer_stream(std::shared_ptr<Thread> thread)
{
    return AnswerStream(std::move(thread));
}

} // namespace plweb
