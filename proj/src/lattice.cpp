#include "demifield/lattice.hpp"

#include <stdexcept>
#include <string>

namespace demifield {

namespace {

void require_same_dims(const MultiIndex& i, const MultiIndex& j) {
    if (i.size() != j.size())
        throw std::invalid_argument("index dimension mismatch: " +
                                    std::to_string(i.size()) + " vs " +
                                    std::to_string(j.size()));
}

}  // namespace

LatticeBox::LatticeBox(MultiIndex n) : upper(std::move(n)) {
    if (upper.empty())
        throw std::invalid_argument("box must have at least one dimension");
    for (int c : upper)
        if (c < 1)
            throw std::invalid_argument("box upper corner coordinates must be >= 1");
}

std::uint64_t LatticeBox::volume() const {
    std::uint64_t v = 1;
    for (int c : upper) v *= static_cast<std::uint64_t>(c);
    return v;
}

bool LatticeBox::contains(const MultiIndex& i) const {
    require_same_dims(i, upper);
    for (std::size_t d = 0; d < upper.size(); ++d)
        if (i[d] < 1 || i[d] > upper[d]) return false;
    return true;
}

std::vector<std::uint64_t> LatticeBox::strides() const {
    std::vector<std::uint64_t> s(upper.size(), 1);
    for (int d = static_cast<int>(upper.size()) - 2; d >= 0; --d)
        s[d] = s[d + 1] * static_cast<std::uint64_t>(upper[d + 1]);
    return s;
}

std::uint64_t LatticeBox::linear(const MultiIndex& i) const {
    if (!contains(i))
        throw std::out_of_range("index outside box");
    std::uint64_t off = 0, stride = 1;
    for (int d = static_cast<int>(upper.size()) - 1; d >= 0; --d) {
        off += static_cast<std::uint64_t>(i[d] - 1) * stride;
        stride *= static_cast<std::uint64_t>(upper[d]);
    }
    return off;
}

MultiIndex LatticeBox::from_linear(std::uint64_t offset) const {
    if (offset >= volume())
        throw std::out_of_range("flat offset outside box");
    MultiIndex i(upper.size());
    for (int d = static_cast<int>(upper.size()) - 1; d >= 0; --d) {
        std::uint64_t n = static_cast<std::uint64_t>(upper[d]);
        i[d] = static_cast<int>(offset % n) + 1;
        offset /= n;
    }
    return i;
}

bool leq(const MultiIndex& i, const MultiIndex& j) {
    require_same_dims(i, j);
    for (std::size_t d = 0; d < i.size(); ++d)
        if (i[d] > j[d]) return false;
    return true;
}

MultiIndex slice_replace(const MultiIndex& base, int s, int value) {
    if (s < 1 || s > static_cast<int>(base.size()))
        throw std::invalid_argument("direction out of range");
    if (value < 0)
        throw std::invalid_argument("coordinate must be >= 0");
    MultiIndex out = base;
    out[static_cast<std::size_t>(s - 1)] = value;
    return out;
}

std::vector<MultiIndex> box_iter(const LatticeBox& box) {
    std::vector<MultiIndex> out;
    out.reserve(box.volume());
    MultiIndex cur(box.upper.size(), 1);
    for (;;) {
        out.push_back(cur);
        // odometer increment, last coordinate fastest
        int d = static_cast<int>(cur.size()) - 1;
        while (d >= 0) {
            if (cur[d] < box.upper[d]) {
                ++cur[d];
                break;
            }
            cur[d] = 1;
            --d;
        }
        if (d < 0) break;
    }
    return out;
}

DirectionSlice direction_line(const LatticeBox& box, int s) {
    if (s < 1 || s > box.dims())
        throw std::invalid_argument("direction out of range");
    DirectionSlice line;
    line.direction = s;
    int n_s = box.upper[static_cast<std::size_t>(s - 1)];
    line.points.reserve(static_cast<std::size_t>(n_s));
    for (int i = 1; i <= n_s; ++i)
        line.points.push_back(slice_replace(box.upper, s, i));
    return line;
}

}  // namespace demifield
