#pragma once

#include <squarec/grid.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace squarec {

/// Side of a shape's bounding box. 2-D shapes accept only the x and y sides.
enum class Side { neg_x, pos_x, neg_y, pos_y, neg_z, pos_z };

/// Where an appendage sits along the contact side.
struct Placement {
    enum class Kind { center, corner, offset };
    Kind kind = Kind::center;
    int offset = 0;  ///< pixels from the start of the contact span, Kind::offset only

    static Placement center() { return {Kind::center, 0}; }
    static Placement corner() { return {Kind::corner, 0}; }
    static Placement at(int px) { return {Kind::offset, px}; }
};

enum class DiskCenter {
    cell,    ///< centred on a lattice point; odd diameter
    corner,  ///< centred on a pixel corner; even diameter
};

BinaryShape make_square(int side);
BinaryShape make_rect(int w, int h);
/// Closed Euclidean ball: all lattice points within `radius` of the centre.
BinaryShape make_disk(int radius, DiskCenter center = DiskCenter::cell);
BinaryShape make_cube(int side);
BinaryShape make_box(int w, int h, int d);

/// Union of `base` and a contact_width x height rectangle flush against `side`.
///
/// The contact span is the extent of the base cells lying on the extreme line of that
/// side, so "center" means centred on that face of the base, not on its bounding box.
/// Throws std::invalid_argument on bad sizes and DataError when the appendage would
/// not touch the base.
BinaryShape append_rect(const BinaryShape& base, Side side, int contact_width, int height,
                        Placement placement = Placement::center());

/// Union of a 3-D base and a cube of the given side centred on one face.
BinaryShape append_cube(const BinaryShape& base, Side face, int side);

/// Union of `base` and its translate by `delta`; DataError if the two copies neither
/// overlap nor touch (8-/26-adjacency).
BinaryShape translate_union(const BinaryShape& base, Coord delta);

/// Free space of an axis-aligned floor plan.
///
/// Plan text, one directive per line, `#` starts a comment:
///
///     room     x y w h      free rectangle
///     aperture x y w h      free gap cut through a wall; must touch a room
///     obstacle x y w h      blocked rectangle inside the free space
///
/// Everything not covered by a room or aperture is wall/frame (exterior). Rooms must
/// be pairwise disjoint; apertures must not overlap rooms.
BinaryShape make_frame_plan(std::string_view plan_text);

/// Plan text for the built-in plans P0..P3 (128-pixel rooms, 4-pixel walls).
std::string builtin_plan(int index);

/// Appendage family: a square of side `base` and successive centred appendages of
/// the given widths on the +y, +x, -y, -x sides in turn. Appendages are square
/// (height == width). Returns base plus one shape per width.
std::vector<BinaryShape> appendage_family(int base, const std::vector<int>& widths);

struct NamedShape {
    std::string id;
    BinaryShape shape;
};

/// Cube of side `base` with `side`-voxel cubes centred on 0..6 faces: S0, S1, S2a, S2b,
/// S3a, S3b, S4a, S4b, S5, S6. "a" variants favour opposite faces, "b" adjacent ones.
std::vector<NamedShape> cube_family(int base, int side);

}  // namespace squarec
