#pragma once

#include <cstdint>
#include <vector>

namespace demifield {

// A point of the k-dimensional positive integer lattice. Coordinates are
// 1-based; the value 0 is representable (it addresses the zero boundary of a
// partial-sum field) but is never produced by enumeration.
using MultiIndex = std::vector<int>;

// Box of lattice cells with lower corner (1,...,1) and upper corner `upper`.
struct LatticeBox {
    MultiIndex upper;

    LatticeBox() = default;
    explicit LatticeBox(MultiIndex n);

    int dims() const { return static_cast<int>(upper.size()); }
    std::uint64_t volume() const;
    bool contains(const MultiIndex& i) const;

    // Row-major flat layout, last coordinate fastest. This is also the
    // enumeration (lexicographic) order of box_iter.
    std::vector<std::uint64_t> strides() const;
    std::uint64_t linear(const MultiIndex& i) const;
    MultiIndex from_linear(std::uint64_t offset) const;

    bool operator==(const LatticeBox& o) const { return upper == o.upper; }
};

// The corner line of a box along one direction: all coordinates pinned at the
// upper corner except the s-th, which runs 1..n_s.
struct DirectionSlice {
    int direction = 1;  // 1-based
    std::vector<MultiIndex> points;
};

// Componentwise partial order i <= j. Throws on dimension mismatch.
bool leq(const MultiIndex& i, const MultiIndex& j);

// Copy of `base` with the s-th coordinate (s is 1-based) replaced by `value`.
// value may be 0 (boundary address); it must not be negative.
MultiIndex slice_replace(const MultiIndex& base, int s, int value);

// All cells of the box in lexicographic order: first (1,...,1), last = upper.
std::vector<MultiIndex> box_iter(const LatticeBox& box);

// Corner line along direction s (1-based).
DirectionSlice direction_line(const LatticeBox& box, int s);

}  // namespace demifield
