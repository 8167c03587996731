#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "demifield/estimate.hpp"

namespace demifield {

// Worker count resolution: an explicit request wins, then DEMIFIELD_WORKERS,
// then hardware concurrency. Always at least 1.
inline int resolve_workers(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("DEMIFIELD_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Run body(rep) for every rep in [0, replicates). Work is handed out in fixed
// kChunkSize blocks through an atomic ticket; each block is scanned in index
// order and every rep writes only its own slots, so the produced data is
// identical for any worker count. The first exception thrown by a body is
// rethrown on the caller's thread.
inline void for_each_replicate(std::uint64_t replicates, int workers,
                               const std::function<void(std::uint64_t)>& body) {
    if (replicates == 0) return;
    std::uint64_t chunks = (replicates + kChunkSize - 1) / kChunkSize;
    workers = resolve_workers(workers);
    if (static_cast<std::uint64_t>(workers) > chunks)
        workers = static_cast<int>(chunks);

    std::atomic<std::uint64_t> ticket{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::mutex error_lock;

    auto drain = [&] {
        for (;;) {
            std::uint64_t t = ticket.fetch_add(1);
            if (t >= chunks || failed.load()) return;
            std::uint64_t lo = t * kChunkSize;
            std::uint64_t hi = std::min(replicates, lo + kChunkSize);
            try {
                for (std::uint64_t rep = lo; rep < hi; ++rep) body(rep);
            } catch (...) {
                std::lock_guard<std::mutex> g(error_lock);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    if (workers <= 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
}

// Column-wise statistics over the replicate stream, accumulated per (chunk,
// column) cell. A chunk is processed by exactly one worker and scanned in
// replicate order, and column_stats merges the chunk partials in index order,
// so the arithmetic matches a sequential chunked pass bit for bit.
class ChunkTable {
  public:
    ChunkTable(std::uint64_t replicates, std::size_t columns)
        : columns_(columns),
          chunks_((replicates + kChunkSize - 1) / kChunkSize),
          cells_(columns * ((replicates + kChunkSize - 1) / kChunkSize)) {}

    void add(std::uint64_t rep, std::size_t col, double value) {
        cells_[(rep / kChunkSize) * columns_ + col].add(value);
    }

    RunningStats column_stats(std::size_t col) const {
        RunningStats total;
        for (std::uint64_t t = 0; t < chunks_; ++t)
            total.merge(cells_[t * columns_ + col]);
        return total;
    }

    Estimate column_estimate(std::size_t col) const {
        return column_stats(col).estimate();
    }

  private:
    std::size_t columns_;
    std::uint64_t chunks_;
    std::vector<RunningStats> cells_;
};

}  // namespace demifield
