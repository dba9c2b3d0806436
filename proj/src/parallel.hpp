#ifndef SCATTERLAB_SRC_PARALLEL_HPP
#define SCATTERLAB_SRC_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace scatterlab::detail {

/// Splits [lo, hi) into one contiguous chunk per worker and merges the chunk
/// states in worker order, so any associative merge yields results that do
/// not depend on the worker count or scheduling.
template <class State, class ChunkFn, class MergeFn>
State parallel_chunks(std::uint64_t lo, std::uint64_t hi, int workers, ChunkFn chunk,
                      MergeFn merge) {
    if (workers < 1) workers = 1;
    const std::uint64_t len = hi > lo ? hi - lo : 0;
    if (len == 0) return State{};
    const unsigned W =
        static_cast<unsigned>(std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), len));
    if (W == 1) return chunk(lo, hi);
    std::vector<State> parts(W);
    std::vector<std::thread> threads;
    threads.reserve(W);
    for (unsigned w = 0; w < W; ++w) {
        std::uint64_t a = lo + len * w / W;
        std::uint64_t b = lo + len * (w + 1) / W;
        threads.emplace_back([&parts, &chunk, w, a, b] { parts[w] = chunk(a, b); });
    }
    for (auto& t : threads) t.join();
    State out = std::move(parts[0]);
    for (unsigned w = 1; w < W; ++w) merge(out, std::move(parts[w]));
    return out;
}

}  // namespace scatterlab::detail

#endif
