#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "betaflow/rng.hpp"

namespace betaflow::parallel {

/// Fills out[i] = gen(substream(base, i)) for i in [0, n). Because every
/// sample owns its substream and its output slot, the result is identical
/// for any worker count.
inline std::vector<double> collect_samples(
    std::size_t n, const rng::StreamKey& base,
    const std::function<double(rng::StreamKey&)>& gen,
    std::size_t workers = 1) {
    std::vector<double> out(n);
    if (workers <= 1 || n < 2 * workers) {
        for (std::size_t i = 0; i < n; ++i) {
            rng::StreamKey key = rng::substream(base, i);
            out[i] = gen(key);
        }
        return out;
    }

    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) {
                    rng::StreamKey key = rng::substream(base, i);
                    out[i] = gen(key);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

}  // namespace betaflow::parallel
