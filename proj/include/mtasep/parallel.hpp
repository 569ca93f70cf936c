#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mtasep {

// Worker count from MTASEP_THREADS, else 1.
inline unsigned default_threads() {
    if (const char* env = std::getenv("MTASEP_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

// Evaluates f(r) for r in [0, reps) into slot r. The output depends only on
// f, never on the thread count or schedule.
template <class T, class F>
std::vector<T> run_replicas(std::size_t reps, unsigned threads, F&& f) {
    std::vector<T> out(reps);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(reps, 1))));
    if (threads == 1) {
        for (std::size_t r = 0; r < reps; ++r) out[r] = f(r);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= reps) return;
            try {
                out[r] = f(r);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                next = reps;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace mtasep
