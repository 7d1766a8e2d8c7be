#pragma once

// Data-parallel inner loops of the field solver. Every kernel has a serial reference
// and an OpenMP version; the two produce bit-identical output (each cell is computed
// independently from read-only inputs and the reductions are max operations).

#include <squarec/grid.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace squarec::kernels {

/// Shape cells plus neighbour offsets into the array, in lexicographic (dz, dy, dx)
/// order with the centre excluded: 8 offsets in 2-D, 26 in 3-D.
struct Stencil {
    std::vector<std::size_t> cells;
    std::vector<std::ptrdiff_t> offsets;

    static Stencil of(const BinaryShape& shape);
    std::size_t size() const { return cells.size(); }
};

struct StepStats {
    double max_residual = 0.0;  ///< max |r| over the shape
    double max_change = 0.0;    ///< max |r - r_prev| over the shape
};

/// r[i] = max_N f + min_N f - c f(x) + 1 at stencil cell i, with c = 2 + 1/rho^2.
/// `f` spans the whole array and is zero outside the shape.
StepStats residual_serial(const Stencil& st, std::span<const double> f, double c, std::span<double> r);
StepStats residual_parallel(const Stencil& st, std::span<const double> f, double c, std::span<double> r);

/// One explicit step: r = residual(f), f_next = f + dk * r on the shape. `r_prev`
/// holds the previous residual on entry and the new one on exit; max_change compares
/// the two.
StepStats explicit_step_serial(const Stencil& st, std::span<const double> f, std::span<double> f_next,
                               std::span<double> r_prev, double c, double dk);
StepStats explicit_step_parallel(const Stencil& st, std::span<const double> f, std::span<double> f_next,
                                 std::span<double> r_prev, double c, double dk);

/// Index into `st.offsets` of the largest / smallest neighbour of each cell under
/// `guess`; ties go to the first offset in lexicographic order.
void select_extrema_serial(const Stencil& st, std::span<const double> guess, std::span<int> argmax,
                           std::span<int> argmin);
void select_extrema_parallel(const Stencil& st, std::span<const double> guess, std::span<int> argmax,
                             std::span<int> argmin);

}  // namespace squarec::kernels
