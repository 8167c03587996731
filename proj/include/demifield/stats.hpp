#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "demifield/fields.hpp"
#include "demifield/funcs.hpp"

namespace demifield {

struct RankQuery {
    std::uint64_t j = 1;

    void validate() const;  // j >= 1
};

// Directional upcrossings are counted either along the corner line (all other
// coordinates pinned at the box's upper corner) or summed over every line
// parallel to the direction.
enum class UpcrossMode { corner_line, all_lines_sum };

const char* upcross_mode_name(UpcrossMode mode);

struct UpcrossReport {
    std::vector<std::uint64_t> per_direction;  // U_s for s = 1..k
    std::uint64_t total = 0;                   // min of the positive U_s, else 0
    UpcrossMode mode = UpcrossMode::corner_line;
    // completed crossings per direction as 1-based (down, up) positions along
    // each scanned line, in scan order
    std::vector<std::vector<std::pair<int, int>>> crossings;
};

// Extremes over the box (boundary zeros are not part of the box).
double box_max(const FieldSample& field);
double box_min(const FieldSample& field);

// max over the box of c_i * g(S_i). The weights must live on the same box.
double weighted_max(const FieldSample& field, const WeightArray& c, const ConvexFn& g);

// j-th largest value counting multiplicity; the box minimum once j exceeds
// the cell count.
double rank_order(const FieldSample& field, const RankQuery& q);

// Complete upcrossings of [a, b] in direction s (1-based): repeatedly seek a
// value <= a, then a later value >= b. Requires a < b.
std::uint64_t upcross_direction(const FieldSample& field, int s, double a, double b,
                                UpcrossMode mode);

// All directional counts plus the min-of-positives total.
UpcrossReport upcross_total(const FieldSample& field, double a, double b,
                            UpcrossMode mode);

// Numeric right difference quotient of x -> max(points..., x) at t, step
// 1e-7, rounded to the nearest integer: 0 when max(points) > t, 1 when
// max(points) < t.
int max_right_derivative_check(const std::vector<double>& points, double t);

}  // namespace demifield
