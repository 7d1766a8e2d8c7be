#include "oracles.hpp"

#include <squarec/kernels.hpp>

#include <doctest.h>

using namespace squarec;
using namespace squarec::kernels;

namespace {

std::vector<double> random_field(const BinaryShape& s, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 5.0);
    std::vector<double> f(s.dims().cells(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i)
        if (s.occupied(i)) f[i] = u(rng);
    return f;
}

}  // namespace

TEST_CASE("stencil layout") {
    const auto s = BinaryShape::with_margin(2, {1, 1, 1}, {1});
    const auto st = Stencil::of(s);
    CHECK(st.size() == 1);
    REQUIRE(st.offsets.size() == 8);
    CHECK(st.offsets.front() == -4);  // (dx, dy) = (-1, -1) on a 3-wide array
    CHECK(std::is_sorted(st.offsets.begin(), st.offsets.end()));
    const auto cube = BinaryShape::with_margin(3, {1, 1, 1}, {1});
    CHECK(Stencil::of(cube).offsets.size() == 26);
}

TEST_CASE("residual kernel matches the oracle, serial and parallel agree bitwise") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 12; ++k) {
        const auto s = k < 8 ? oracle::random_blob(rng, 40, 30, 600) : oracle::random_blob(rng, 10, 10, 300, 3, 10);
        const auto st = Stencil::of(s);
        const auto f = random_field(s, rng);
        const double c = 2.0 + 1.0 / 9.0;
        std::vector<double> ra(st.size()), rb(st.size());
        const auto sa = residual_serial(st, f, c, ra);
        const auto sb = residual_parallel(st, f, c, rb);
        REQUIRE(ra == rb);
        CHECK(sa.max_residual == sb.max_residual);
        const auto ref = oracle::residual(s, f, c);
        double mx = 0.0;
        for (std::size_t i = 0; i < st.size(); ++i) {
            CHECK(ra[i] == doctest::Approx(ref[st.cells[i]]).epsilon(1e-14));
            mx = std::max(mx, std::abs(ra[i]));
        }
        CHECK(sa.max_residual == mx);
    }
}

TEST_CASE("explicit step kernels agree bitwise") {
    std::mt19937_64 rng(22);
    for (int k = 0; k < 8; ++k) {
        const auto s = oracle::random_blob(rng, 50, 50, 1500);
        const auto st = Stencil::of(s);
        const auto f = random_field(s, rng);
        std::vector<double> fa(f.size(), 0.0), fb(f.size(), 0.0);
        std::vector<double> ra(st.size(), 0.25), rb(st.size(), 0.25);
        const auto sa = explicit_step_serial(st, f, fa, ra, 2.01, 0.4);
        const auto sb = explicit_step_parallel(st, f, fb, rb, 2.01, 0.4);
        REQUIRE(fa == fb);
        REQUIRE(ra == rb);
        CHECK(sa.max_residual == sb.max_residual);
        CHECK(sa.max_change == sb.max_change);
        for (std::size_t i = 0; i < st.size(); ++i) CHECK(fa[st.cells[i]] == f[st.cells[i]] + 0.4 * ra[i]);
    }
}

TEST_CASE("extrema selection breaks ties on the first offset") {
    std::mt19937_64 rng(23);
    const auto s = oracle::random_blob(rng, 30, 30, 400);
    const auto st = Stencil::of(s);
    auto f = random_field(s, rng);
    for (double& v : f) v = std::round(v);  // plenty of ties
    std::vector<int> amax(st.size()), amin(st.size()), bmax(st.size()), bmin(st.size());
    select_extrema_serial(st, f, amax, amin);
    select_extrema_parallel(st, f, bmax, bmin);
    REQUIRE(amax == bmax);
    REQUIRE(amin == bmin);
    for (std::size_t i = 0; i < st.size(); ++i) {
        const double* p = f.data() + st.cells[i];
        for (int k = 0; k < static_cast<int>(st.offsets.size()); ++k) {
            CHECK(p[st.offsets[k]] <= p[st.offsets[amax[i]]]);
            CHECK(p[st.offsets[k]] >= p[st.offsets[amin[i]]]);
            if (k < amax[i]) CHECK(p[st.offsets[k]] < p[st.offsets[amax[i]]]);
            if (k < amin[i]) CHECK(p[st.offsets[k]] > p[st.offsets[amin[i]]]);
        }
    }
}
