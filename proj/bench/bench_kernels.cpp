// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to vary the parallel side.

#include <squarec/generators.hpp>
#include <squarec/kernels.hpp>
#include <squarec/noisegen.hpp>
#include <squarec/transform.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace squarec;
using namespace squarec::kernels;

namespace {

struct Fixture {
    BinaryShape shape;
    Stencil st;
    std::vector<double> f;
    std::vector<double> r;

    explicit Fixture(int side) : shape(make_disk(side / 2)), st(Stencil::of(shape)), f(shape.dims().cells(), 0.0), r(st.size(), 0.0) {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (std::size_t i : st.cells) f[i] = u(rng);
    }
};

template <auto Kernel>
void bm_residual(benchmark::State& state) {
    Fixture fx(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto s = Kernel(fx.st, fx.f, 2.001, fx.r);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(fx.st.size()));
}

template <auto Kernel>
void bm_explicit_step(benchmark::State& state) {
    Fixture fx(static_cast<int>(state.range(0)));
    std::vector<double> next(fx.f.size(), 0.0);
    for (auto _ : state) {
        auto s = Kernel(fx.st, fx.f, next, fx.r, 2.001, 0.3);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(fx.st.size()));
}

template <auto Dt>
void bm_dt(benchmark::State& state) {
    const auto s = make_disk(static_cast<int>(state.range(0)) / 2);
    for (auto _ : state) benchmark::DoNotOptimize(Dt(s));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(s.dims().cells()));
}

template <auto Close>
void bm_closing(benchmark::State& state) {
    Rng rng(3);
    BinaryShape s = make_square(static_cast<int>(state.range(0)));
    for (int k = 0; k < 40; ++k) s = add_noise(s, 2, rng);
    for (auto _ : state) benchmark::DoNotOptimize(Close(s, 3));
}

}  // namespace

BENCHMARK(bm_residual<residual_serial>)->Name("residual/serial")->Arg(256)->Arg(1024);
BENCHMARK(bm_residual<residual_parallel>)->Name("residual/parallel")->Arg(256)->Arg(1024);
BENCHMARK(bm_explicit_step<explicit_step_serial>)->Name("explicit_step/serial")->Arg(256)->Arg(1024);
BENCHMARK(bm_explicit_step<explicit_step_parallel>)->Name("explicit_step/parallel")->Arg(256)->Arg(1024);
BENCHMARK(bm_dt<chebyshev_dt_reference>)->Name("chebyshev_dt/reference")->Arg(256)->Arg(1024);
BENCHMARK(bm_dt<chebyshev_dt>)->Name("chebyshev_dt/parallel")->Arg(256)->Arg(1024);
BENCHMARK(bm_closing<morphological_closing_serial>)->Name("closing/serial")->Arg(256);
BENCHMARK(bm_closing<morphological_closing>)->Name("closing/parallel")->Arg(256);

BENCHMARK_MAIN();
