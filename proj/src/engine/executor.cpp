#include "plweb/executor.hpp"

#include <thread>

namespace plweb {

void Executor::post(Task task)
{
    ready_.push_back(std::move(task));
}

void Executor::post_after(std::chrono::milliseconds delay, Task task)
{
    if (delay.count() <= 0) {
        // Still goes through the timer queue so zero-delay timers keep their
        // relative order with other timers.
        delay = std::chrono::milliseconds(0);
    }
    timers_.emplace(std::make_pair(Clock::now() + delay, sequence_++), std::move(task));
}

void Executor::promote_due_timers()
{
    auto now = Clock::now();
    while (!timers_.empty() && timers_.begin()->first.first <= now) {
        ready_.push_back(std::move(timers_.begin()->second));
        timers_.erase(timers_.begin());
    }
}

bool Executor::run_one()
{
    promote_due_timers();
    if (ready_.empty()) {
        if (timers_.empty())
            return false;
        std::this_thread::sleep_until(timers_.begin()->first.first);
        promote_due_timers();
        if (ready_.empty())
            return true;
    }
    Task task = std::move(ready_.front());
    ready_.pop_front();
    ++tasks_run_;
    task();
    return true;
}

void Executor::run()
{
    while (run_one()) {
    }
}

} // namespace plweb
