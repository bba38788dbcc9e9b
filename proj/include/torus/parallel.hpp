// parallel.hpp
// Minimal fork-join helper.  Chunks [0,n) over a fixed number of workers and
// joins before returning; reductions are left to the caller so that the
// combination order stays deterministic.

#ifndef TORUS_PARALLEL_HPP
#define TORUS_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace torus {

inline unsigned worker_count() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1u : hc;
}

// fn(begin, end, chunk_index) is invoked on disjoint ranges covering [0, n).
inline void parallel_chunks(std::size_t n,
                            const std::function<void(std::size_t, std::size_t, unsigned)>& fn,
                            unsigned workers = 0) {
    if (workers == 0) workers = worker_count();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (n == 0) return;
    if (workers <= 1) {
        fn(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t b = static_cast<std::size_t>(w) * chunk;
        std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([=, &fn] { fn(b, e, w); });
    }
    for (auto& t : pool) t.join();
}

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         unsigned workers = 0) {
    parallel_chunks(n, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t i = b; i < e; ++i) body(i);
    }, workers);
}

}  // namespace torus

#endif  // TORUS_PARALLEL_HPP
