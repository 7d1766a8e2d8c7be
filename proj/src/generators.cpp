#include <squarec/error.hpp>
#include <squarec/generators.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace squarec {

namespace {

int& axis_ref(Coord& c, int axis) { return axis == 0 ? c.x : (axis == 1 ? c.y : c.z); }
int axis_of(const Coord& c, int axis) { return axis == 0 ? c.x : (axis == 1 ? c.y : c.z); }

struct SideAxis {
    int axis;
    int dir;
};

SideAxis decompose(Side s) {
    switch (s) {
        case Side::neg_x: return {0, -1};
        case Side::pos_x: return {0, +1};
        case Side::neg_y: return {1, -1};
        case Side::pos_y: return {1, +1};
        case Side::neg_z: return {2, -1};
        case Side::pos_z: return {2, +1};
    }
    throw std::invalid_argument("unknown side");
}

BinaryShape filled_box(int ndim, int w, int h, int d) {
    const int pz = ndim == 3 ? 1 : 0;
    Dims dims{w + 2, h + 2, d + 2 * pz};
    std::vector<std::uint8_t> mask(dims.cells(), 0);
    for (int z = 0; z < d; ++z)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) mask[dims.index(x + 1, y + 1, z + pz)] = 1;
    return BinaryShape(ndim, dims, std::move(mask), Coord{-1, -1, -pz});
}

// Adds a box flush against one side of `base`. `tangent_sizes` are the appendage
// sizes along the tangential axes in increasing axis order.
BinaryShape append_box(const BinaryShape& base, Side side, std::array<int, 2> tangent_sizes,
                       int height, Placement placement) {
    const auto [axis, dir] = decompose(side);
    if (axis >= base.ndim()) throw std::invalid_argument("side not available in this dimension");
    if (height < 1) throw std::invalid_argument("appendage height must be >= 1");

    std::array<int, 2> tangents{};
    int nt = 0;
    for (int a = 0; a < base.ndim(); ++a)
        if (a != axis) tangents[nt++] = a;
    for (int k = 0; k < nt; ++k)
        if (tangent_sizes[k] < 1) throw std::invalid_argument("appendage width must be >= 1");

    const auto cells = base.world_cells();
    int extreme = dir > 0 ? std::numeric_limits<int>::min() : std::numeric_limits<int>::max();
    for (const Coord& c : cells)
        extreme = dir > 0 ? std::max(extreme, axis_of(c, axis)) : std::min(extreme, axis_of(c, axis));

    // Span of the face cells along each tangential axis.
    std::array<int, 2> lo{std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
    std::array<int, 2> hi{std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};
    for (const Coord& c : cells) {
        if (axis_of(c, axis) != extreme) continue;
        for (int k = 0; k < nt; ++k) {
            lo[k] = std::min(lo[k], axis_of(c, tangents[k]));
            hi[k] = std::max(hi[k], axis_of(c, tangents[k]));
        }
    }

    std::array<int, 2> start{};
    for (int k = 0; k < nt; ++k) {
        const int span = hi[k] - lo[k] + 1;
        if (tangent_sizes[k] > span)
            throw std::invalid_argument("appendage wider than the contact side");
        switch (placement.kind) {
            case Placement::Kind::center: start[k] = lo[k] + (span - tangent_sizes[k]) / 2; break;
            case Placement::Kind::corner: start[k] = lo[k]; break;
            case Placement::Kind::offset: start[k] = lo[k] + placement.offset; break;
        }
        if (start[k] < lo[k] || start[k] + tangent_sizes[k] > hi[k] + 1)
            throw DataError("appendage offset out of range");
    }

    std::vector<Coord> added;
    bool touching = false;
    const int first = extreme + dir;
    const int tz = nt == 2 ? tangent_sizes[1] : 1;
    for (int h = 0; h < height; ++h)
        for (int j = 0; j < tz; ++j)
            for (int i = 0; i < tangent_sizes[0]; ++i) {
                Coord c{};
                axis_ref(c, axis) = first + dir * h;
                axis_ref(c, tangents[0]) = start[0] + i;
                if (nt == 2) axis_ref(c, tangents[1]) = start[1] + j;
                if (h == 0) {
                    Coord inner = c;
                    axis_ref(inner, axis) = extreme;
                    touching = touching || base.at_world(inner);
                }
                added.push_back(c);
            }
    if (!touching) throw DataError("appendage does not touch the base");

    std::vector<Coord> all = cells;
    all.insert(all.end(), added.begin(), added.end());
    return BinaryShape::from_cells(base.ndim(), all);
}

int parse_int(const std::string& tok, int line_no) {
    int v = 0;
    const auto* b = tok.data();
    const auto res = std::from_chars(b, b + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != b + tok.size())
        throw ParseError("plan line " + std::to_string(line_no) + ": bad integer '" + tok + "'");
    return v;
}

bool boxes_overlap(const Box& a, const Box& b) {
    return a.lo.x < b.hi.x && b.lo.x < a.hi.x && a.lo.y < b.hi.y && b.lo.y < a.hi.y;
}

bool boxes_touch(const Box& a, const Box& b) {
    // Share an edge segment (4-adjacency between some pair of cells).
    const bool x_adjacent = (a.hi.x == b.lo.x || b.hi.x == a.lo.x) && a.lo.y < b.hi.y && b.lo.y < a.hi.y;
    const bool y_adjacent = (a.hi.y == b.lo.y || b.hi.y == a.lo.y) && a.lo.x < b.hi.x && b.lo.x < a.hi.x;
    return x_adjacent || y_adjacent;
}

}  // namespace

BinaryShape make_square(int side) {
    if (side < 1) throw std::invalid_argument("square side must be >= 1");
    return filled_box(2, side, side, 1);
}

BinaryShape make_rect(int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("rectangle sides must be >= 1");
    return filled_box(2, w, h, 1);
}

BinaryShape make_cube(int side) {
    if (side < 1) throw std::invalid_argument("cube side must be >= 1");
    return filled_box(3, side, side, side);
}

BinaryShape make_box(int w, int h, int d) {
    if (w < 1 || h < 1 || d < 1) throw std::invalid_argument("box sides must be >= 1");
    return filled_box(3, w, h, d);
}

BinaryShape make_disk(int radius, DiskCenter center) {
    std::vector<Coord> cells;
    if (center == DiskCenter::cell) {
        if (radius < 0) throw std::invalid_argument("disk radius must be >= 0");
        const long r2 = static_cast<long>(radius) * radius;
        for (int y = -radius; y <= radius; ++y)
            for (int x = -radius; x <= radius; ++x)
                if (static_cast<long>(x) * x + static_cast<long>(y) * y <= r2) cells.push_back({x, y, 0});
    } else {
        if (radius < 1) throw std::invalid_argument("corner-centred disk radius must be >= 1");
        // Centre at (-1/2, -1/2): (2x+1)^2 + (2y+1)^2 <= (2r)^2.
        const long r2 = 4L * radius * radius;
        for (int y = -radius; y < radius; ++y)
            for (int x = -radius; x < radius; ++x) {
                const long ax = 2L * x + 1;
                const long ay = 2L * y + 1;
                if (ax * ax + ay * ay <= r2) cells.push_back({x, y, 0});
            }
    }
    return BinaryShape::from_cells(2, cells);
}

BinaryShape append_rect(const BinaryShape& base, Side side, int contact_width, int height,
                        Placement placement) {
    if (base.ndim() != 2) throw std::invalid_argument("append_rect needs a 2-D base");
    return append_box(base, side, {contact_width, 1}, height, placement);
}

BinaryShape append_cube(const BinaryShape& base, Side face, int side) {
    if (base.ndim() != 3) throw std::invalid_argument("append_cube needs a 3-D base");
    if (side < 1) throw std::invalid_argument("appended cube side must be >= 1");
    return append_box(base, face, {side, side}, side, Placement::center());
}

BinaryShape translate_union(const BinaryShape& base, Coord delta) {
    if (base.ndim() == 2 && delta.z != 0) throw std::invalid_argument("2-D shape moved along z");
    const auto cells = base.world_cells();
    const int zr = base.ndim() == 3 ? 1 : 0;
    bool linked = false;
    for (const Coord& c : cells) {
        const Coord moved = c + delta;
        for (int dz = -zr; dz <= zr && !linked; ++dz)
            for (int dy = -1; dy <= 1 && !linked; ++dy)
                for (int dx = -1; dx <= 1 && !linked; ++dx)
                    linked = base.at_world(moved + Coord{dx, dy, dz});
        if (linked) break;
    }
    if (!linked) throw DataError("translated copy is disconnected from the base");
    std::vector<Coord> all = cells;
    all.reserve(2 * cells.size());
    for (const Coord& c : cells)
        if (!base.at_world(c + delta)) all.push_back(c + delta);
    return BinaryShape::from_cells(base.ndim(), all);
}

BinaryShape make_frame_plan(std::string_view plan_text) {
    std::vector<Box> rooms, apertures, obstacles;
    std::istringstream in{std::string(plan_text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok.size() != 5)
            throw ParseError("plan line " + std::to_string(line_no) + ": expected '<kind> x y w h'");
        const int x = parse_int(tok[1], line_no);
        const int y = parse_int(tok[2], line_no);
        const int w = parse_int(tok[3], line_no);
        const int h = parse_int(tok[4], line_no);
        if (w < 1 || h < 1)
            throw DataError("plan line " + std::to_string(line_no) + ": non-positive size");
        const Box b{{x, y, 0}, {x + w, y + h, 1}};
        if (tok[0] == "room") rooms.push_back(b);
        else if (tok[0] == "aperture") apertures.push_back(b);
        else if (tok[0] == "obstacle") obstacles.push_back(b);
        else throw ParseError("plan line " + std::to_string(line_no) + ": unknown directive '" + tok[0] + "'");
    }
    if (rooms.empty()) throw DataError("plan has no rooms");
    for (std::size_t i = 0; i < rooms.size(); ++i)
        for (std::size_t j = i + 1; j < rooms.size(); ++j)
            if (boxes_overlap(rooms[i], rooms[j])) throw DataError("plan rooms overlap");
    for (const Box& a : apertures) {
        bool touches = false;
        for (const Box& r : rooms) {
            if (boxes_overlap(a, r)) throw DataError("plan aperture overlaps a room");
            touches = touches || boxes_touch(a, r);
        }
        if (!touches) throw DataError("plan aperture does not touch any room");
    }

    auto free_at = [&](Coord c) {
        for (const Box& r : rooms)
            if (r.contains(c)) return true;
        for (const Box& a : apertures)
            if (a.contains(c)) return true;
        return false;
    };
    for (const Box& o : obstacles)
        for (int y = o.lo.y; y < o.hi.y; ++y)
            for (int x = o.lo.x; x < o.hi.x; ++x)
                if (!free_at({x, y, 0})) throw DataError("plan obstacle lies outside the free space");

    std::vector<Coord> cells;
    auto add_box = [&](const Box& b) {
        for (int y = b.lo.y; y < b.hi.y; ++y)
            for (int x = b.lo.x; x < b.hi.x; ++x) {
                const Coord c{x, y, 0};
                bool blocked = false;
                for (const Box& o : obstacles) blocked = blocked || o.contains(c);
                if (!blocked) cells.push_back(c);
            }
    };
    for (const Box& r : rooms) add_box(r);
    for (const Box& a : apertures) {
        // Apertures may overlap each other; keep the first copy of each cell.
        for (int y = a.lo.y; y < a.hi.y; ++y)
            for (int x = a.lo.x; x < a.hi.x; ++x) {
                const Coord c{x, y, 0};
                bool blocked = false;
                for (const Box& o : obstacles) blocked = blocked || o.contains(c);
                if (blocked) continue;
                bool dup = false;
                for (const Box& prev : apertures) {
                    if (&prev == &a) break;
                    dup = dup || prev.contains(c);
                }
                if (!dup) cells.push_back(c);
            }
    }
    if (cells.empty()) throw DataError("empty mask");
    return BinaryShape::from_cells(2, cells);
}

std::vector<BinaryShape> appendage_family(int base, const std::vector<int>& widths) {
    static constexpr Side order[] = {Side::pos_y, Side::pos_x, Side::neg_y, Side::neg_x};
    if (widths.size() > 4) throw std::invalid_argument("at most four appendages (one per side)");
    std::vector<BinaryShape> family;
    family.push_back(make_square(base));
    for (std::size_t i = 0; i < widths.size(); ++i)
        family.push_back(append_rect(family.back(), order[i], widths[i], widths[i]));
    return family;
}

std::string builtin_plan(int index) {
    if (index < 0 || index > 3) throw std::invalid_argument("built-in plans are P0..P3");
    // 2x2 rooms of 128 px behind 4 px walls. Doors form a tree: one in the upper
    // vertical wall, one in each horizontal wall.
    const int door = index == 3 ? 80 : 32;
    const int o = (128 - door) / 2;
    std::ostringstream out;
    out << "# P" << index << "\n";
    out << "room 0 0 128 128\nroom 132 0 128 128\nroom 0 132 128 128\nroom 132 132 128 128\n";
    if (index >= 1) {
        out << "aperture 128 " << o << " 4 " << door << "\n";
        out << "aperture " << o << " 128 " << door << " 4\n";
        out << "aperture " << 132 + o << " 128 " << door << " 4\n";
    }
    // Upper right room, facing the vertical door.
    if (index >= 2) out << "obstacle 176 48 4 32\n";
    return out.str();
}

std::vector<NamedShape> cube_family(int base, int side) {
    using enum Side;
    static const std::vector<std::pair<const char*, std::vector<Side>>> sets = {
        {"S0", {}},
        {"S1", {pos_z}},
        {"S2a", {pos_z, neg_z}},
        {"S2b", {pos_z, pos_x}},
        {"S3a", {pos_z, neg_z, pos_x}},
        {"S3b", {pos_z, pos_x, pos_y}},
        {"S4a", {pos_z, neg_z, pos_x, neg_x}},
        {"S4b", {pos_z, pos_x, pos_y, neg_z}},
        {"S5", {pos_z, neg_z, pos_x, neg_x, pos_y}},
        {"S6", {pos_z, neg_z, pos_x, neg_x, pos_y, neg_y}},
    };
    const BinaryShape cube = make_cube(base);
    std::vector<NamedShape> out;
    for (const auto& [id, faces] : sets) {
        BinaryShape s = cube;
        for (Side f : faces) s = append_cube(s, f, side);
        out.push_back({id, std::move(s)});
    }
    return out;
}

}  // namespace squarec
