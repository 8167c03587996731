#include "demifield/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace demifield {

void RunningStats::add(double x) {
    ++n;
    double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
}

void RunningStats::merge(const RunningStats& o) {
    if (o.n == 0) return;
    if (n == 0) {
        *this = o;
        return;
    }
    double d = o.mean - mean;
    std::uint64_t total = n + o.n;
    double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    double nt = static_cast<double>(total);
    mean += d * nb / nt;
    m2 += o.m2 + d * d * na * nb / nt;
    n = total;
}

double RunningStats::variance() const {
    return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
}

Estimate RunningStats::estimate() const {
    Estimate e;
    e.count = n;
    e.mean = mean;
    e.se = n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
    return e;
}

void RunningCov::add(double x, double y) {
    ++n;
    double nd = static_cast<double>(n);
    double dx = x - mean_x;
    double dy = y - mean_y;
    mean_x += dx / nd;
    mean_y += dy / nd;
    m2_x += dx * (x - mean_x);
    m2_y += dy * (y - mean_y);
    cxy += dx * (y - mean_y);  // dx uses the pre-update mean_x: exact co-moment
}

void RunningCov::merge(const RunningCov& o) {
    if (o.n == 0) return;
    if (n == 0) {
        *this = o;
        return;
    }
    double dx = o.mean_x - mean_x;
    double dy = o.mean_y - mean_y;
    double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    double nt = na + nb;
    mean_x += dx * nb / nt;
    mean_y += dy * nb / nt;
    m2_x += o.m2_x + dx * dx * na * nb / nt;
    m2_y += o.m2_y + dy * dy * na * nb / nt;
    cxy += o.cxy + dx * dy * na * nb / nt;
    n += o.n;
}

double RunningCov::covariance() const {
    return n > 1 ? cxy / static_cast<double>(n - 1) : 0.0;
}

RunningStats chunked_stats(const std::vector<double>& values) {
    RunningStats total;
    for (std::size_t begin = 0; begin < values.size(); begin += kChunkSize) {
        std::size_t end = std::min(begin + kChunkSize, values.size());
        RunningStats chunk;
        for (std::size_t i = begin; i < end; ++i) chunk.add(values[i]);
        total.merge(chunk);
    }
    return total;
}

Estimate estimate_series(const std::vector<double>& values) {
    return chunked_stats(values).estimate();
}

std::size_t effective_count(const std::vector<double>& values, double mass) {
    if (mass <= 0.0 || mass > 1.0)
        throw std::invalid_argument("mass fraction must be in (0,1]");
    std::vector<double> abs(values.size());
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        abs[i] = std::fabs(values[i]);
        total += abs[i];
    }
    if (total == 0.0) return values.size();
    std::sort(abs.begin(), abs.end(), std::greater<double>());
    double need = mass * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < abs.size(); ++i) {
        acc += abs[i];
        if (acc >= need) return i + 1;
    }
    return abs.size();
}

}  // namespace demifield
