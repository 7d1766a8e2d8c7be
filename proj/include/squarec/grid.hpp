#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace squarec {

/// Integer cell coordinate. 2-D shapes keep z == 0.
struct Coord {
    int x = 0;
    int y = 0;
    int z = 0;

    friend auto operator<=>(const Coord&, const Coord&) = default;
    friend Coord operator+(Coord a, Coord b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Coord operator-(Coord a, Coord b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
};

/// Array extent, x fastest. 2-D grids have nz == 1.
struct Dims {
    int nx = 1;
    int ny = 1;
    int nz = 1;

    std::size_t cells() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nz);
    }
    std::size_t index(int x, int y, int z = 0) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(nx) *
                   (static_cast<std::size_t>(y) + static_cast<std::size_t>(ny) * z);
    }
    std::size_t index(Coord c) const { return index(c.x, c.y, c.z); }
    Coord coord(std::size_t i) const {
        const auto plane = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
        const auto z = i / plane;
        const auto rem = i % plane;
        return {static_cast<int>(rem % nx), static_cast<int>(rem / nx), static_cast<int>(z)};
    }
    bool contains(Coord c) const {
        return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < nx && c.y < ny && c.z < nz;
    }

    friend bool operator==(const Dims&, const Dims&) = default;
};

/// Closed-open axis-aligned box [lo, hi).
struct Box {
    Coord lo;
    Coord hi;

    bool empty() const { return hi.x <= lo.x || hi.y <= lo.y || hi.z <= lo.z; }
    bool contains(Coord c) const {
        return c.x >= lo.x && c.y >= lo.y && c.z >= lo.z && c.x < hi.x && c.y < hi.y &&
               c.z < hi.z;
    }
    friend bool operator==(const Box&, const Box&) = default;
};

/// A binary shape S on a 2-D or 3-D grid.
///
/// Every occupied cell lies strictly inside the array, so each shape cell has its
/// full 3x3 (3x3x3) neighbourhood inside the array. `origin()` is the world
/// coordinate of array cell (0,0,0); generators use it to keep successive shapes of a
/// family aligned even when the array is re-grown.
class BinaryShape {
public:
    /// Throws DataError on an empty mask or one that touches the array border.
    BinaryShape(int ndim, Dims dims, std::vector<std::uint8_t> mask, Coord origin = {});

    /// Pads the mask by one empty cell on every side if it touches the border.
    static BinaryShape with_margin(int ndim, Dims dims, std::vector<std::uint8_t> mask);

    /// Tight bounding box plus a one-cell margin around the given world cells.
    static BinaryShape from_cells(int ndim, std::span<const Coord> cells);

    int ndim() const { return ndim_; }
    const Dims& dims() const { return dims_; }
    Coord origin() const { return origin_; }
    std::span<const std::uint8_t> mask() const { return mask_; }

    bool occupied(std::size_t i) const { return mask_[i] != 0; }
    bool at(int x, int y, int z = 0) const { return mask_[dims_.index(x, y, z)] != 0; }
    /// Occupancy at a world coordinate; false outside the array.
    bool at_world(Coord w) const;

    std::size_t count() const { return count_; }
    /// Bounding box of occupied cells in array coordinates.
    Box bounds() const;
    /// Occupied cells in world coordinates, in index order.
    std::vector<Coord> world_cells() const;

    /// Same occupied set re-stored with exactly a one-cell margin.
    BinaryShape normalized() const;

    /// Mask and dims equal (origin ignored).
    bool same_mask(const BinaryShape& other) const {
        return dims_ == other.dims_ && mask_ == other.mask_;
    }

private:
    int ndim_;
    Dims dims_;
    std::vector<std::uint8_t> mask_;
    Coord origin_;
    std::size_t count_ = 0;
};

/// 4-connected in 2-D, 6-connected in 3-D.
bool is_face_connected(const BinaryShape& shape);
/// 8-connected in 2-D, 26-connected in 3-D.
bool is_fully_connected(const BinaryShape& shape);

}  // namespace squarec
