#include <squarec/error.hpp>
#include <squarec/grid.hpp>

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

namespace squarec {

namespace {

bool touches_border(const Dims& d, std::span<const std::uint8_t> mask) {
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        const Coord c = d.coord(i);
        if (c.x == 0 || c.x == d.nx - 1 || c.y == 0 || c.y == d.ny - 1) return true;
        if (d.nz > 1 && (c.z == 0 || c.z == d.nz - 1)) return true;
    }
    return false;
}

template <int Reach>
bool connected_impl(const BinaryShape& s) {
    const Dims& d = s.dims();
    const auto mask = s.mask();
    std::vector<std::uint8_t> seen(mask.size(), 0);
    std::vector<std::size_t> stack;
    std::size_t start = 0;
    while (!mask[start]) ++start;
    stack.push_back(start);
    seen[start] = 1;
    std::size_t visited = 0;
    const int zr = s.ndim() == 3 ? 1 : 0;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        ++visited;
        const Coord c = d.coord(i);
        for (int dz = -zr; dz <= zr; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int manhattan = std::abs(dx) + std::abs(dy) + std::abs(dz);
                    if (manhattan == 0 || manhattan > Reach) continue;
                    const Coord n{c.x + dx, c.y + dy, c.z + dz};
                    if (!d.contains(n)) continue;
                    const std::size_t j = d.index(n);
                    if (mask[j] && !seen[j]) {
                        seen[j] = 1;
                        stack.push_back(j);
                    }
                }
    }
    return visited == s.count();
}

}  // namespace

BinaryShape::BinaryShape(int ndim, Dims dims, std::vector<std::uint8_t> mask, Coord origin)
    : ndim_(ndim), dims_(dims), mask_(std::move(mask)), origin_(origin) {
    if (ndim_ != 2 && ndim_ != 3) throw DataError("dimensionality must be 2 or 3");
    if (dims_.nx < 1 || dims_.ny < 1 || dims_.nz < 1) throw DataError("non-positive extent");
    if (ndim_ == 2 && dims_.nz != 1) throw DataError("2-D shape with nz != 1");
    if (mask_.size() != dims_.cells()) throw DataError("mask length does not match dims");
    for (auto& v : mask_) v = v ? 1 : 0;
    count_ = static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
    if (count_ == 0) throw DataError("empty mask");
    if (touches_border(dims_, mask_)) throw DataError("mask touches the array border");
}

BinaryShape BinaryShape::with_margin(int ndim, Dims dims, std::vector<std::uint8_t> mask) {
    if (mask.size() != dims.cells()) throw DataError("mask length does not match dims");
    if (!touches_border(dims, mask)) return BinaryShape(ndim, dims, std::move(mask));
    const int pz = ndim == 3 ? 1 : 0;
    Dims padded{dims.nx + 2, dims.ny + 2, dims.nz + 2 * pz};
    std::vector<std::uint8_t> out(padded.cells(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        const Coord c = dims.coord(i);
        out[padded.index(c.x + 1, c.y + 1, c.z + pz)] = 1;
    }
    return BinaryShape(ndim, padded, std::move(out), Coord{-1, -1, -pz});
}

BinaryShape BinaryShape::from_cells(int ndim, std::span<const Coord> cells) {
    if (cells.empty()) throw DataError("empty mask");
    constexpr int big = std::numeric_limits<int>::max();
    Coord lo{big, big, big};
    Coord hi{-big, -big, -big};
    for (const Coord& c : cells) {
        lo = {std::min(lo.x, c.x), std::min(lo.y, c.y), std::min(lo.z, c.z)};
        hi = {std::max(hi.x, c.x), std::max(hi.y, c.y), std::max(hi.z, c.z)};
    }
    const int pz = ndim == 3 ? 1 : 0;
    if (ndim == 2 && (lo.z != 0 || hi.z != 0)) throw DataError("2-D cell with z != 0");
    const Coord origin{lo.x - 1, lo.y - 1, lo.z - pz};
    Dims d{hi.x - lo.x + 3, hi.y - lo.y + 3, hi.z - lo.z + 1 + 2 * pz};
    std::vector<std::uint8_t> mask(d.cells(), 0);
    for (const Coord& c : cells) mask[d.index(c - origin)] = 1;
    return BinaryShape(ndim, d, std::move(mask), origin);
}

bool BinaryShape::at_world(Coord w) const {
    const Coord a = w - origin_;
    return dims_.contains(a) && mask_[dims_.index(a)] != 0;
}

Box BinaryShape::bounds() const {
    constexpr int big = std::numeric_limits<int>::max();
    Box b{{big, big, big}, {-big, -big, -big}};
    for (std::size_t i = 0; i < mask_.size(); ++i) {
        if (!mask_[i]) continue;
        const Coord c = dims_.coord(i);
        b.lo = {std::min(b.lo.x, c.x), std::min(b.lo.y, c.y), std::min(b.lo.z, c.z)};
        b.hi = {std::max(b.hi.x, c.x + 1), std::max(b.hi.y, c.y + 1), std::max(b.hi.z, c.z + 1)};
    }
    return b;
}

std::vector<Coord> BinaryShape::world_cells() const {
    std::vector<Coord> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < mask_.size(); ++i)
        if (mask_[i]) out.push_back(dims_.coord(i) + origin_);
    return out;
}

BinaryShape BinaryShape::normalized() const {
    const auto cells = world_cells();
    return from_cells(ndim_, cells);
}

bool is_face_connected(const BinaryShape& shape) { return connected_impl<1>(shape); }
bool is_fully_connected(const BinaryShape& shape) { return connected_impl<3>(shape); }

}  // namespace squarec
