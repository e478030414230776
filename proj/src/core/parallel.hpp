#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace lavlab::detail {

// Runs job(i) for i in [0, count) on up to `threads` workers. Each index
// writes only its own slot, so results do not depend on scheduling; the
// exception of the lowest failing index is rethrown.
template <class Job>
void parallel_for(std::size_t count, unsigned threads, Job job) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::vector<std::exception_ptr> failures(count);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    failures[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
}

}  // namespace lavlab::detail
