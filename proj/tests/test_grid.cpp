#include "oracles.hpp"

#include <squarec/error.hpp>
#include <squarec/generators.hpp>
#include <squarec/shape_io.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace squarec;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("squarec_grid_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("shape construction keeps a margin") {
    CHECK_THROWS_AS(BinaryShape(2, {2, 2, 1}, {1, 0, 0, 0}), DataError);
    CHECK_THROWS_AS(BinaryShape(2, {3, 3, 1}, std::vector<std::uint8_t>(9, 0)), DataError);
    const auto s = BinaryShape::with_margin(2, {2, 1, 1}, {1, 1});
    CHECK(s.dims() == Dims{4, 3, 1});
    CHECK(s.count() == 2);
    CHECK(s.at_world({0, 0, 0}));
    CHECK(s.at_world({1, 0, 0}));
    CHECK_FALSE(s.at_world({2, 0, 0}));
    CHECK_FALSE(s.at_world({-100, 0, 0}));
}

TEST_CASE("square and rectangle sizes") {
    const auto sq = make_square(128);
    CHECK(sq.count() == 128u * 128u);
    CHECK(sq.dims() == Dims{130, 130, 1});
    CHECK(make_rect(128, 64).count() == 128u * 64u);
    CHECK(make_cube(64).count() == 262144u);
    CHECK_THROWS_AS(make_square(0), std::invalid_argument);
    CHECK_THROWS_AS(make_rect(3, 0), std::invalid_argument);
}

TEST_CASE("disks are closed Euclidean balls") {
    const auto d = make_disk(2);
    CHECK(d.count() == 13);
    const auto k = make_disk(2, DiskCenter::corner);
    CHECK(k.count() == 12);
    CHECK(make_disk(0).count() == 1);
    for (int r : {3, 10, 32}) {
        const auto s = make_disk(r);
        std::size_t n = 0;
        for (int y = -r; y <= r; ++y)
            for (int x = -r; x <= r; ++x) n += x * x + y * y <= r * r;
        CHECK(s.count() == n);
        CHECK(is_face_connected(s));
    }
}

TEST_CASE("append_rect places a flush centred appendage") {
    const auto base = make_square(128);
    const auto s = append_rect(base, Side::pos_y, 32, 32);
    CHECK(s.count() == 128u * 128u + 32u * 32u);
    CHECK(s.at_world({48, 128, 0}));
    CHECK(s.at_world({79, 159, 0}));
    CHECK_FALSE(s.at_world({47, 128, 0}));
    CHECK_FALSE(s.at_world({80, 128, 0}));
    CHECK(is_face_connected(s));

    const auto corner = append_rect(base, Side::pos_x, 64, 64, Placement::corner());
    CHECK(corner.at_world({128, 0, 0}));
    CHECK_FALSE(corner.at_world({128, 64, 0}));

    CHECK_THROWS_AS(append_rect(base, Side::pos_x, 0, 5), std::invalid_argument);
    CHECK_THROWS(append_rect(base, Side::pos_x, 200, 5));
}

TEST_CASE("appendage family matches the four-shape construction") {
    const auto fam = appendage_family(128, {96, 64, 32});
    REQUIRE(fam.size() == 4);
    std::size_t area = 128 * 128;
    CHECK(fam[0].count() == area);
    for (int i = 1; i <= 3; ++i) {
        const int w = (4 - i) * 32;
        area += static_cast<std::size_t>(w * w);
        CHECK(fam[static_cast<std::size_t>(i)].count() == area);
        CHECK(is_face_connected(fam[static_cast<std::size_t>(i)]));
    }
    // Each shape contains the previous one at the same world position.
    for (std::size_t i = 1; i < fam.size(); ++i)
        for (const Coord& c : fam[i - 1].world_cells()) REQUIRE(fam[i].at_world(c));
}

TEST_CASE("cube appendages") {
    const auto s = append_cube(make_cube(64), Side::pos_z, 16);
    CHECK(s.count() == 262144u + 4096u);
    CHECK(is_face_connected(s));
    CHECK_THROWS_AS(append_cube(make_cube(64), Side::pos_z, 0), std::invalid_argument);
    CHECK_THROWS(append_cube(make_cube(8), Side::pos_z, 16));

    const auto fam = cube_family(16, 4);
    REQUIRE(fam.size() == 10);
    const char* ids[] = {"S0", "S1", "S2a", "S2b", "S3a", "S3b", "S4a", "S4b", "S5", "S6"};
    const int counts[] = {0, 1, 2, 2, 3, 3, 4, 4, 5, 6};
    for (std::size_t i = 0; i < fam.size(); ++i) {
        CHECK(fam[i].id == ids[i]);
        CHECK(fam[i].shape.count() == 4096u + 64u * static_cast<std::size_t>(counts[i]));
    }
}

TEST_CASE("translate_union") {
    const auto sq = make_square(64);
    CHECK(translate_union(sq, {0, 0, 0}).same_mask(sq));
    const auto diag = translate_union(sq, {32, 32, 0});
    CHECK(diag.count() == 2u * 4096u - 32u * 32u);
    CHECK(translate_union(sq, {64, 64, 0}).count() == 2u * 4096u);  // corner contact
    CHECK_THROWS_AS(translate_union(sq, {200, 200, 0}), DataError);
    CHECK_THROWS_AS(translate_union(sq, {65, 65, 0}), DataError);
}

TEST_CASE("floor plans") {
    const auto p0 = make_frame_plan(builtin_plan(0));
    CHECK(p0.count() == 4u * 128u * 128u);
    CHECK_FALSE(is_fully_connected(p0));
    const auto p1 = make_frame_plan(builtin_plan(1));
    CHECK(p1.count() == 4u * 128u * 128u + 3u * 32u * 4u);
    CHECK(is_face_connected(p1));
    const auto p2 = make_frame_plan(builtin_plan(2));
    CHECK(p2.count() == p1.count() - 128u);
    const auto p3 = make_frame_plan(builtin_plan(3));
    CHECK(p3.count() == 4u * 128u * 128u + 3u * 80u * 4u - 128u);
    CHECK_THROWS_AS(builtin_plan(4), std::invalid_argument);

    for (int i = 0; i < 4; ++i) {
        const fs::path file = fs::path(SQUAREC_SOURCE_DIR) / "data" / "plans" / ("p" + std::to_string(i) + ".plan");
        CHECK(make_frame_plan(slurp(file)).same_mask(make_frame_plan(builtin_plan(i))));
    }

    CHECK_THROWS_AS(make_frame_plan("room 0 0 4 4\nroom 2 2 4 4\n"), DataError);
    CHECK_THROWS_AS(make_frame_plan("room 0 0 4 4\naperture 10 10 2 2\n"), DataError);
    CHECK_THROWS_AS(make_frame_plan("room 0 0 4 4\nobstacle 3 3 4 4\n"), DataError);
    CHECK_THROWS_AS(make_frame_plan("room 0 0 4\n"), ParseError);
    CHECK_THROWS_AS(make_frame_plan("window 0 0 4 4\n"), ParseError);
    CHECK_THROWS_AS(make_frame_plan("room 0 0 x 4\n"), ParseError);
    CHECK_THROWS_AS(make_frame_plan("# nothing\n"), DataError);
    CHECK_THROWS_AS(make_frame_plan("room 0 0 0 4\n"), DataError);
}

TEST_CASE("generators are deterministic") {
    CHECK(make_disk(17).same_mask(make_disk(17)));
    CHECK(appendage_family(64, {48, 32})[2].same_mask(appendage_family(64, {48, 32})[2]));
    CHECK(make_frame_plan(builtin_plan(3)).same_mask(make_frame_plan(builtin_plan(3))));
}

TEST_CASE("connectivity helpers") {
    // Two cells touching at a corner: 8-connected, not 4-connected.
    const auto diag = BinaryShape::with_margin(2, {2, 2, 1}, {1, 0, 0, 1});
    CHECK_FALSE(is_face_connected(diag));
    CHECK(is_fully_connected(diag));
    std::mt19937_64 rng(3);
    for (int k = 0; k < 20; ++k) CHECK(is_face_connected(oracle::random_blob(rng, 12, 12, 40)));
}

TEST_CASE("PBM and VOX3 round trips") {
    const auto dir = temp_dir("io");
    std::mt19937_64 rng(11);
    for (int k = 0; k < 10; ++k) {
        const auto s = oracle::random_blob(rng, 5 + k, 7, 20);
        for (auto fmt : {ShapeFormat::pbm_ascii, ShapeFormat::pbm_binary}) {
            const fs::path p = dir / "s.pbm";
            save_shape(s, p, fmt);
            CHECK(load_shape(p).normalized().same_mask(s.normalized()));
        }
    }
    const auto cube = append_cube(make_cube(6), Side::neg_x, 2);
    save_shape(cube, dir / "c.vox", ShapeFormat::vox3);
    const auto back = load_shape(dir / "c.vox");
    CHECK(back.ndim() == 3);
    CHECK(back.same_mask(cube.normalized()));
    CHECK(slurp(dir / "c.vox").starts_with("VOX3 10 8 8\n"));
}

TEST_CASE("file errors") {
    const auto dir = temp_dir("err");
    CHECK_THROWS_AS(load_shape(dir / "missing.pbm"), IoError);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(dir / name, std::ios::binary) << text;
        return dir / name;
    };
    CHECK_THROWS_AS(load_shape(write("a.pbm", "P7 1 1\n")), ParseError);
    CHECK_THROWS_AS(load_shape(write("b.pbm", "P1\n2 2\n1 0\n")), ParseError);
    CHECK_THROWS_AS(load_shape(write("c.pbm", "P1\n2 2\n0 0 0 0\n")), DataError);
    CHECK_THROWS_AS(load_shape(write("d.vox", "VOX3 2 2 2\n\x01")), ParseError);
    // A P1 mask that touches the border gets a margin.
    const auto s = load_shape(write("e.pbm", "P1\n# c\n2 1\n1 1\n"));
    CHECK(s.count() == 2);
    CHECK(s.dims() == Dims{4, 3, 1});
}
