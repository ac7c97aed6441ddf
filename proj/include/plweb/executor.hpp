#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <utility>

namespace plweb {

// Single-threaded host task queue with timers. Stands in for the browser
// event loop: every asynchronous completion of the engine is posted here and
// runs only after the current call stack has unwound.
class Executor {
public:
    using Task = std::function<void()>;
    using Clock = std::chrono::steady_clock;

    void post(Task task);
    void post_after(std::chrono::milliseconds delay, Task task);

    // Runs one ready task, sleeping until the next timer when nothing is
    // ready. Returns false when there is no work at all.
    bool run_one();
    // Runs until no tasks or timers remain.
    void run();
    // Runs until done() holds or no work remains; returns done().
    template <typename Pred>
    bool run_until(Pred done)
    {
        while (!done())
            if (!run_one())
                break;
        return done();
    }

    bool idle() const { return ready_.empty() && timers_.empty(); }
    std::uint64_t tasks_run() const { return tasks_run_; }

private:
    void promote_due_timers();

    std::deque<Task> ready_;
    // (due time, sequence) keeps timers with equal deadlines in FIFO order.
    std::map<std::pair<Clock::time_point, std::uint64_t>, Task> timers_;
    std::uint64_t sequence_ = 0;
    std::uint64_t tasks_run_ = 0;
};

} // namespace plweb
