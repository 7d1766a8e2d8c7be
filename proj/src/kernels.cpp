#include <squarec/kernels.hpp>

#include <algorithm>
#include <cmath>

namespace squarec::kernels {

namespace {

inline double cell_residual(const double* fp, const std::ptrdiff_t* off, std::size_t n_off, double c) {
    double mx = fp[off[0]];
    double mn = mx;
    for (std::size_t k = 1; k < n_off; ++k) {
        const double v = fp[off[k]];
        mx = std::max(mx, v);
        mn = std::min(mn, v);
    }
    return mx + mn - c * fp[0] + 1.0;
}

inline void cell_extrema(const double* gp, const std::ptrdiff_t* off, std::size_t n_off, int& amax, int& amin) {
    double mx = gp[off[0]];
    double mn = mx;
    amax = 0;
    amin = 0;
    for (std::size_t k = 1; k < n_off; ++k) {
        const double v = gp[off[k]];
        if (v > mx) {
            mx = v;
            amax = static_cast<int>(k);
        }
        if (v < mn) {
            mn = v;
            amin = static_cast<int>(k);
        }
    }
}

}  // namespace

Stencil Stencil::of(const BinaryShape& shape) {
    Stencil st;
    const Dims& d = shape.dims();
    st.cells.reserve(shape.count());
    for (std::size_t i = 0; i < d.cells(); ++i)
        if (shape.occupied(i)) st.cells.push_back(i);
    const int zr = shape.ndim() == 3 ? 1 : 0;
    const auto plane = static_cast<std::ptrdiff_t>(d.nx) * d.ny;
    for (int dz = -zr; dz <= zr; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0 && dz == 0) continue;
                st.offsets.push_back(dx + static_cast<std::ptrdiff_t>(d.nx) * dy + plane * dz);
            }
    return st;
}

StepStats residual_serial(const Stencil& st, std::span<const double> f, double c, std::span<double> r) {
    StepStats s;
    const auto* off = st.offsets.data();
    const std::size_t n_off = st.offsets.size();
    for (std::size_t i = 0; i < st.cells.size(); ++i) {
        r[i] = cell_residual(f.data() + st.cells[i], off, n_off, c);
        s.max_residual = std::max(s.max_residual, std::abs(r[i]));
    }
    return s;
}

StepStats residual_parallel(const Stencil& st, std::span<const double> f, double c, std::span<double> r) {
    double max_r = 0.0;
    const auto* off = st.offsets.data();
    const std::size_t n_off = st.offsets.size();
    const auto n = static_cast<std::ptrdiff_t>(st.cells.size());
#pragma omp parallel for schedule(static) reduction(max : max_r)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        r[i] = cell_residual(f.data() + st.cells[i], off, n_off, c);
        max_r = std::max(max_r, std::abs(r[i]));
    }
    return {max_r, 0.0};
}

StepStats explicit_step_serial(const Stencil& st, std::span<const double> f, std::span<double> f_next,
                               std::span<double> r_prev, double c, double dk) {
    StepStats s;
    const auto* off = st.offsets.data();
    const std::size_t n_off = st.offsets.size();
    for (std::size_t i = 0; i < st.cells.size(); ++i) {
        const std::size_t cell = st.cells[i];
        const double r = cell_residual(f.data() + cell, off, n_off, c);
        s.max_residual = std::max(s.max_residual, std::abs(r));
        s.max_change = std::max(s.max_change, std::abs(r - r_prev[i]));
        r_prev[i] = r;
        f_next[cell] = f[cell] + dk * r;
    }
    return s;
}

StepStats explicit_step_parallel(const Stencil& st, std::span<const double> f, std::span<double> f_next,
                                 std::span<double> r_prev, double c, double dk) {
    double max_r = 0.0;
    double max_dr = 0.0;
    const auto* off = st.offsets.data();
    const std::size_t n_off = st.offsets.size();
    const auto n = static_cast<std::ptrdiff_t>(st.cells.size());
#pragma omp parallel for schedule(static) reduction(max : max_r, max_dr)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::size_t cell = st.cells[i];
        const double r = cell_residual(f.data() + cell, off, n_off, c);
        max_r = std::max(max_r, std::abs(r));
        max_dr = std::max(max_dr, std::abs(r - r_prev[i]));
        r_prev[i] = r;
        f_next[cell] = f[cell] + dk * r;
    }
    return {max_r, max_dr};
}

void select_extrema_serial(const Stencil& st, std::span<const double> guess, std::span<int> argmax,
                           std::span<int> argmin) {
    for (std::size_t i = 0; i < st.cells.size(); ++i)
        cell_extrema(guess.data() + st.cells[i], st.offsets.data(), st.offsets.size(), argmax[i], argmin[i]);
}

void select_extrema_parallel(const Stencil& st, std::span<const double> guess, std::span<int> argmax,
                             std::span<int> argmin) {
    const auto n = static_cast<std::ptrdiff_t>(st.cells.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        cell_extrema(guess.data() + st.cells[i], st.offsets.data(), st.offsets.size(), argmax[i], argmin[i]);
}

}  // namespace squarec::kernels
