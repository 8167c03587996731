#include "demifield/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace demifield {

void RankQuery::validate() const {
    if (j < 1) throw std::invalid_argument("rank order index j must be >= 1");
}

const char* upcross_mode_name(UpcrossMode mode) {
    return mode == UpcrossMode::corner_line ? "corner_line" : "all_lines_sum";
}

double box_max(const FieldSample& field) {
    if (field.values.empty()) throw std::invalid_argument("empty field");
    return *std::max_element(field.values.begin(), field.values.end());
}

double box_min(const FieldSample& field) {
    if (field.values.empty()) throw std::invalid_argument("empty field");
    return *std::min_element(field.values.begin(), field.values.end());
}

double weighted_max(const FieldSample& field, const WeightArray& c, const ConvexFn& g) {
    if (!(c.box == field.box))
        throw std::invalid_argument("weights must live on the field's box");
    g.validate();
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t off = 0; off < field.values.size(); ++off)
        best = std::max(best, c.at_linear(off) * g(field.values[off]));
    return best;
}

double rank_order(const FieldSample& field, const RankQuery& q) {
    q.validate();
    if (field.values.empty()) throw std::invalid_argument("empty field");
    if (q.j > field.values.size()) return box_min(field);
    std::vector<double> sorted(field.values);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    return sorted[q.j - 1];
}

namespace {

struct LineScan {
    std::uint64_t count = 0;
    std::vector<std::pair<int, int>> pairs;
};

// Two-state scan: seek a value <= a, then a later value >= b (both
// thresholds non-strict); each such pair is one complete upcrossing.
void scan_line(const std::vector<double>& v, std::uint64_t start, std::uint64_t stride,
               int extent, double a, double b, LineScan& out) {
    bool seeking_down = true;
    int down_at = 0;
    for (int t = 1; t <= extent; ++t) {
        double x = v[start + static_cast<std::uint64_t>(t - 1) * stride];
        if (seeking_down) {
            if (x <= a) {
                down_at = t;
                seeking_down = false;
            }
        } else if (x >= b) {
            out.pairs.emplace_back(down_at, t);
            ++out.count;
            seeking_down = true;
        }
    }
}

LineScan scan_direction(const FieldSample& field, int s, double a, double b,
                        UpcrossMode mode) {
    if (a >= b) throw std::invalid_argument("upcrossing band needs a < b");
    int k = field.box.dims();
    if (s < 1 || s > k) throw std::invalid_argument("direction out of range");
    auto strides = field.box.strides();
    std::uint64_t stride = strides[static_cast<std::size_t>(s - 1)];
    int extent = field.box.upper[static_cast<std::size_t>(s - 1)];

    LineScan scan;
    if (mode == UpcrossMode::corner_line) {
        MultiIndex start = slice_replace(field.box.upper, s, 1);
        scan_line(field.values, field.box.linear(start), stride, extent, a, b, scan);
        return scan;
    }
    // every line parallel to direction s starts at a cell with s-coordinate 1
    auto cells = box_iter(field.box);
    for (std::uint64_t off = 0; off < cells.size(); ++off) {
        if (cells[off][static_cast<std::size_t>(s - 1)] != 1) continue;
        scan_line(field.values, off, stride, extent, a, b, scan);
    }
    return scan;
}

}  // namespace

std::uint64_t upcross_direction(const FieldSample& field, int s, double a, double b,
                                UpcrossMode mode) {
    return scan_direction(field, s, a, b, mode).count;
}

UpcrossReport upcross_total(const FieldSample& field, double a, double b,
                            UpcrossMode mode) {
    UpcrossReport report;
    report.mode = mode;
    for (int s = 1; s <= field.box.dims(); ++s) {
        LineScan scan = scan_direction(field, s, a, b, mode);
        report.per_direction.push_back(scan.count);
        report.crossings.push_back(std::move(scan.pairs));
    }
    std::uint64_t total = 0;
    for (std::uint64_t u : report.per_direction)
        if (u > 0 && (total == 0 || u < total)) total = u;
    report.total = total;
    return report;
}

int max_right_derivative_check(const std::vector<double>& points, double t) {
    constexpr double h = 1e-7;
    double mx = -std::numeric_limits<double>::infinity();
    for (double p : points) mx = std::max(mx, p);
    double g_at = std::max(mx, t);
    double g_right = std::max(mx, t + h);
    return static_cast<int>(std::lround((g_right - g_at) / h));
}

}  // namespace demifield
