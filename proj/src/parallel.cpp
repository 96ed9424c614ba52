#include "hlsys/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace hlsys {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned jobs) { g_max_threads.store(jobs); }

unsigned max_threads() {
    unsigned cap = g_max_threads.load();
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return cap == 0 ? hw : std::min(cap, hw);
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body) {
    if (count == 0) return;
    const std::size_t workers = std::min<std::size_t>(max_threads(), count);
    if (workers <= 1) {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace hlsys
