#include "parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace jcrnet {

namespace {

int resolve_worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("JCRNET_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1 && cap < 1024) n = std::min(n, static_cast<int>(cap));
    }
    return n;
}

// Lazily started pool of worker_count()-1 helpers; the calling thread also
// works, so a pool of size 1 degenerates to inline execution.
class Pool {
public:
    static Pool& instance() {
        static Pool pool(resolve_worker_count());
        return pool;
    }

    void run(std::size_t tiles, const std::function<void(std::size_t)>& fn) {
        std::unique_lock<std::mutex> guard(job_mutex_);
        {
            std::lock_guard<std::mutex> lk(m_);
            fn_ = &fn;
            next_.store(0, std::memory_order_relaxed);
            end_ = tiles;
            pending_ = static_cast<int>(helpers_.size());
            ++generation_;
        }
        cv_.notify_all();
        work();
        std::unique_lock<std::mutex> lk(m_);
        done_cv_.wait(lk, [&] { return pending_ == 0; });
        fn_ = nullptr;
    }

    int size() const { return static_cast<int>(helpers_.size()) + 1; }

private:
    explicit Pool(int workers) {
        for (int i = 1; i < workers; ++i) {
            helpers_.emplace_back([this] { helper_loop(); });
        }
    }

    ~Pool() {
        {
            std::lock_guard<std::mutex> lk(m_);
            stop_ = true;
            ++generation_;
        }
        cv_.notify_all();
        for (auto& t : helpers_) t.join();
    }

    void helper_loop() {
        std::uint64_t seen = 0;
        for (;;) {
            {
                std::unique_lock<std::mutex> lk(m_);
                cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
            }
            work();
            {
                std::lock_guard<std::mutex> lk(m_);
                if (--pending_ == 0) done_cv_.notify_one();
            }
        }
    }

    void work() {
        const std::function<void(std::size_t)>* fn = fn_;
        if (!fn) return;
        for (;;) {
            std::size_t t = next_.fetch_add(1, std::memory_order_relaxed);
            if (t >= end_) break;
            (*fn)(t);
        }
    }

    std::vector<std::thread> helpers_;
    std::mutex m_;
    std::mutex job_mutex_;
    std::condition_variable cv_;
    std::condition_variable done_cv_;
    const std::function<void(std::size_t)>* fn_ = nullptr;
    std::atomic<std::size_t> next_{0};
    std::size_t end_ = 0;
    std::uint64_t generation_ = 0;
    int pending_ = 0;
    bool stop_ = false;
};

}  // namespace

int worker_count() { return Pool::instance().size(); }

void parallel_tiles(std::size_t tiles, const std::function<void(std::size_t)>& fn) {
    if (tiles == 0) return;
    if (tiles == 1 || worker_count() == 1) {
        for (std::size_t t = 0; t < tiles; ++t) fn(t);
        return;
    }
    Pool::instance().run(tiles, fn);
}

}  // namespace jcrnet
