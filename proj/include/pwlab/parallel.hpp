#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace pwlab {

/// Splits [0, n) into `threads` contiguous chunks and runs
/// fn(begin, end, chunk) on each. Chunk c always covers the same range for a
/// given (n, threads), so callers can merge per-chunk results in order.
template <class Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn)
{
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) {
        fn(std::size_t{0}, n, std::size_t{0});
        return;
    }
    const std::size_t chunks = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t begin = n * c / chunks;
        std::size_t end = n * (c + 1) / chunks;
        pool.emplace_back([&, begin, end, c] {
            try {
                fn(begin, end, c);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

inline std::size_t chunk_count(std::size_t n, unsigned threads)
{
    threads = std::max(1u, threads);
    return (threads == 1 || n < 2) ? 1 : std::min<std::size_t>(threads, n);
}

}  // namespace pwlab
