#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace telecom {

// Deterministic fan-out of replicate work. Replicates are processed in
// fixed-size blocks; per-block accumulators are merged in block order, so the
// result is bit-identical for any thread count.

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Block must be default-constructible and provide merge(const Block&).
// per_item is invoked as per_item(index, block).
template <class Block, class Fn>
Block run_blocks(std::uint64_t n, int threads, Fn&& per_item,
                 std::uint64_t block_size = 4096) {
    if (block_size == 0) block_size = 1;
    const std::uint64_t n_blocks = (n + block_size - 1) / block_size;
    threads = resolve_threads(threads);

    std::vector<Block> blocks(n_blocks);
    auto work_block = [&](std::uint64_t b) {
        const std::uint64_t lo = b * block_size;
        const std::uint64_t hi = std::min(n, lo + block_size);
        Block& acc = blocks[b];
        for (std::uint64_t i = lo; i < hi; ++i) per_item(i, acc);
    };

    if (threads <= 1 || n_blocks <= 1) {
        for (std::uint64_t b = 0; b < n_blocks; ++b) work_block(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::uint64_t b = next.fetch_add(1);
                if (b >= n_blocks) return;
                work_block(b);
            }
        };
        std::vector<std::thread> pool;
        const int n_threads = static_cast<int>(
            std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), n_blocks));
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    Block total;
    for (const Block& b : blocks) total.merge(b);
    return total;
}

// Fills a value per replicate; deterministic trivially (indexed writes).
template <class Fn>
std::vector<double> collect_values(std::uint64_t n, int threads, Fn&& value_of) {
    std::vector<double> out(n);
    struct Nothing {
        void merge(const Nothing&) {}
    };
    run_blocks<Nothing>(n, threads, [&](std::uint64_t i, Nothing&) { out[i] = value_of(i); });
    return out;
}

}  // namespace telecom
