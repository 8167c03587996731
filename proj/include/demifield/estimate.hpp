#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace demifield {

struct Estimate {
    double mean = 0.0;
    double se = 0.0;  // sample sd / sqrt(count); 0 when count < 2
    std::uint64_t count = 0;
};

// Numerically stable single-pass mean/variance accumulator (Welford update,
// Chan merge). Partial accumulators merged in replicate-index order reproduce
// the sequential result of the same chunking exactly.
struct RunningStats {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    void merge(const RunningStats& o);
    double variance() const;  // sample variance, 0 when n < 2
    Estimate estimate() const;
};

// Bivariate companion: means, second moments and the cross co-moment,
// mergeable the same way. covariance() uses the n-1 denominator.
struct RunningCov {
    std::uint64_t n = 0;
    double mean_x = 0.0, mean_y = 0.0;
    double m2_x = 0.0, m2_y = 0.0, cxy = 0.0;

    void add(double x, double y);
    void merge(const RunningCov& o);
    double covariance() const;
};

// Replicate streams are consumed in fixed-size chunks merged in index order,
// single- and multi-threaded alike, so the arithmetic never depends on the
// worker count.
inline constexpr std::size_t kChunkSize = 2048;

// Mean and standard error of a value series, accumulated chunk-by-chunk in
// index order (the canonical estimation path for all reports).
Estimate estimate_series(const std::vector<double>& values);

// Same, but over chunked partials (exposed for the merge-equivalence tests).
RunningStats chunked_stats(const std::vector<double>& values);

// Tail-concentration diagnostic for expectations of unbounded integrands:
// the smallest number of replicates whose |values| add up to `mass` (default
// 90%) of the total absolute mass. A small count means the estimate hangs on
// a handful of draws and its SE is untrustworthy. An all-zero series is fully
// diffuse by convention (returns values.size()).
std::size_t effective_count(const std::vector<double>& values, double mass = 0.9);

// Reports degrade to INCONCLUSIVE when a heavy-tailed side concentrates on
// fewer than this many replicates.
inline constexpr std::size_t kMinEffective = 30;

}  // namespace demifield
