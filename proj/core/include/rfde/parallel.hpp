#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace rfde {

// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
// processed exactly once; the caller's body must write only to index-owned
// slots so the result is independent of scheduling. First exception rethrown.
inline void parallel_for(int count, int workers, const std::function<void(int)>& body) {
    if (count <= 0) return;
    if (workers < 1) workers = 1;
    if (workers == 1 || count == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    const int n_threads = std::min(workers, count);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_threads);
    for (int w = 0; w < n_threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < count; i += n_threads) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace rfde
