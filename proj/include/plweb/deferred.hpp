#pragma once

#include "plweb/engine.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace plweb {

// Thrown by Deferred::get() when the completion was a rejection.
struct Rejected : std::runtime_error {
    explicit Rejected(Answer a) : std::runtime_error("rejected"), answer(std::move(a)) {}
    Answer answer; // error or limit payload
};

// One-shot completion bound to an executor. Callbacks registered with then()
// run from the executor, never inside the call that settles the value.
template <typename T>
class Deferred {
public:
    using OnValue = std::function<void(const T&)>;
    using OnError = std::function<void(const Answer&)>;

    explicit Deferred(std::shared_ptr<Executor> executor) : state_(std::make_shared<State>())
    {
        state_->executor = std::move(executor);
    }

    void resolve(T value) const
    {
        if (state_->settled())
            return;
        state_->value = std::move(value);
        state_->flush();
    }
    void reject(Answer a) const
    {
        if (state_->settled())
            return;
        state_->error = std::move(a);
        state_->flush();
    }

    const Deferred& then(OnValue ok, OnError fail = nullptr) const
    {
        state_->listeners.push_back({std::move(ok), std::move(fail)});
        if (state_->settled())
            state_->flush();
        return *this;
    }

    bool settled() const { return state_->settled(); }

    // Drives the executor until settled. Throws Rejected on rejection and
    // std::logic_error if the executor runs dry first.
    T get() const
    {
        state_->executor->run_until([s = state_] { return s->settled(); });
        if (state_->error)
            throw Rejected(*state_->error);
        if (!state_->value)
            throw std::logic_error("deferred never settled");
        return *state_->value;
    }

private:
    struct Listener {
        OnValue ok;
        OnError fail;
    };
    struct State : std::enable_shared_from_this<State> {
        std::shared_ptr<Executor> executor;
        std::optional<T> value;
        std::optional<Answer> error;
        std::vector<Listener> listeners;

        bool settled() const { return value.has_value() || error.has_value(); }
        void flush()
        {
            auto pending = std::move(listeners);
            listeners.clear();
            auto self = this->shared_from_this();
            for (auto& l : pending) {
                executor->post([self, l] {
                    if (self->value && l.ok)
                        l.ok(*self->value);
                    else if (self->error && l.fail)
                        l.fail(*self->error);
                });
            }
        }
    };
    std::shared_ptr<State> state_;
};

Deferred<bool> consult_deferred(Session& s, Source source);
Deferred<bool> query_deferred(Thread& t, std::string_view goal);
// Resolves with success or failure answers; rejects on error or limit.
Deferred<Answer> answer_deferred(Thread& t);

// Successive success answers of the current query. next() resolves with
// nullopt once the answers are exhausted.
class AnswerStream {
public:
    explicit AnswerStream(std::shared_ptr<Thread> thread) : thread_(std::move(thread)) {}

    Deferred<std::optional<Answer>> next();
    // Blocking convenience: drives the executor and returns every answer.
    std::vector<Answer> collect(std::size_t max = SIZE_MAX);

private:
    std::shared_ptr<Thread> thread_;
    bool done_ = false;
};

AnswerStream answer_stream(std::shared_ptr<Thread> thread);

} // namespace plweb
