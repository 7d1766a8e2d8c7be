#include "oracles.hpp"

#include <squarec/error.hpp>
#include <squarec/generators.hpp>
#include <squarec/transform.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace squarec;
namespace fs = std::filesystem;

TEST_CASE("distance transform matches the erosion count and brute force") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 30; ++k) {
        const auto s = k % 3 == 0 ? oracle::random_rects(rng, 20, 16, 4) : oracle::random_blob(rng, 14, 14, 30 + 4 * k);
        const auto dt = chebyshev_dt(s);
        const auto ref = chebyshev_dt_reference(s);
        const auto ero = oracle::erosion_dt(s);
        const auto brute = oracle::brute_dt(s);
        REQUIRE(dt.values == ref.values);
        REQUIRE(dt.values == ero);
        REQUIRE(dt.values == brute);
    }
    for (int k = 0; k < 6; ++k) {
        const auto s = oracle::random_blob(rng, 8, 8, 120, 3, 8);
        REQUIRE(chebyshev_dt(s).values == oracle::erosion_dt(s));
        REQUIRE(chebyshev_dt_reference(s).values == oracle::brute_dt(s));
    }
}

TEST_CASE("distance transform of simple shapes") {
    CHECK(scale_of(make_square(128)).rho_max == 64);
    CHECK(scale_of(make_square(127)).rho_max == 64);
    CHECK(scale_of(make_rect(128, 64)).rho_max == 32);
    CHECK(scale_of(make_cube(64)).rho_max == 32);
    CHECK(scale_of(make_disk(0)).rho_max == 1);
    const auto dt = chebyshev_dt(make_square(4));
    CHECK(dt.at(1, 1) == 1);
    CHECK(dt.at(2, 2) == 2);
    CHECK(dt.at(0, 0) == 0);
}

TEST_CASE("level sets partition the support") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 10; ++k) {
        const auto s = oracle::random_blob(rng, 24, 24, 200);
        const auto sc = scale_of(s);
        const auto sets = level_sets(sc);
        REQUIRE(static_cast<int>(sets.size()) == sc.rho_max);
        std::vector<int> hits(s.dims().cells(), 0);
        for (std::size_t j = 0; j < sets.size(); ++j) {
            CHECK(sets[j].level == static_cast<int>(j) + 1);
            CHECK(sets[j].t_value == doctest::Approx(sets[j].level / static_cast<double>(sc.rho_max)));
            CHECK_FALSE(sets[j].cells.empty());
            CHECK(std::is_sorted(sets[j].cells.begin(), sets[j].cells.end()));
            for (auto i : sets[j].cells) {
                ++hits[i];
                CHECK(sc.level(i) == sets[j].level);
            }
        }
        for (std::size_t i = 0; i < hits.size(); ++i) CHECK(hits[i] == (s.occupied(i) ? 1 : 0));
        double mx = 0.0;
        for (double v : sc.t.values) mx = std::max(mx, v);
        CHECK(mx == 1.0);
    }
}

TEST_CASE("nearest level") {
    CHECK(nearest_level_index(64, 1.0) == 64);
    CHECK(nearest_level_index(64, 0.1) == 6);
    CHECK(nearest_level_index(64, 0.001) == 1);
    CHECK(nearest_level_index(4, 0.375) == 1);  // 1.5 -> tie, smaller level
    CHECK(nearest_level_index(4, 0.625) == 2);
    CHECK_THROWS_AS(nearest_level_index(64, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(nearest_level_index(64, 1.5), std::invalid_argument);
}

TEST_CASE("FLD round trip and errors") {
    const fs::path dir = fs::temp_directory_path() / "squarec_transform";
    fs::create_directories(dir);
    const auto s = append_cube(make_cube(5), Side::pos_x, 3);
    const auto t = scale_of(s).t;
    save_field(t, 3, dir / "t.fld");
    const auto [back, nd] = load_field(dir / "t.fld");
    CHECK(nd == 3);
    CHECK(back.dims == t.dims);
    CHECK(back.values == t.values);

    std::ofstream(dir / "bad.fld", std::ios::binary) << "FLD 2 3 3\n1234";
    CHECK_THROWS_AS(load_field(dir / "bad.fld"), ParseError);
    std::ofstream(dir / "bad2.fld", std::ios::binary) << "XYZ 2 3 3\n";
    CHECK_THROWS_AS(load_field(dir / "bad2.fld"), ParseError);

    const auto sq = make_square(3);
    save_field_csv(scale_of(sq).t, sq, dir / "t.csv");
    std::ifstream in(dir / "t.csv");
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header == "x,y,value");
    CHECK(first == "1,1,0.5");
}
