#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace coru {

/// Worker cap: the THREADS environment variable when set, otherwise the
/// hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Runs fn(0..count-1), fanning out across workers. Each index must write
/// only its own output slot; results are then independent of scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = worker_count();
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    for (unsigned w = 0; w < used; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += used) fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace coru
