#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace qcx {

// Worker count: explicit set_thread_count wins, then QCX_THREADS, then hardware.
inline std::atomic<int>& thread_count_slot() {
    static std::atomic<int> n{0};
    return n;
}

inline void set_thread_count(int n) { thread_count_slot().store(n > 0 ? n : 0); }

inline int effective_thread_count() {
    int n = thread_count_slot().load();
    if (n > 0) return n;
    if (const char* env = std::getenv("QCX_THREADS")) {
        int e = std::atoi(env);
        if (e > 0) return e;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Each index is processed independently; output ordering is the caller's,
// so results do not depend on the worker count.
inline void parallel_for(size_t count, const std::function<void(size_t)>& fn) {
    int workers = effective_thread_count();
    if (workers <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto body = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int spawn = static_cast<int>(std::min<size_t>(static_cast<size_t>(workers), count));
    pool.reserve(static_cast<size_t>(spawn));
    for (int t = 0; t < spawn - 1; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

}  // namespace qcx
