#include <squarec/error.hpp>
#include <squarec/noisegen.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace squarec {

namespace {

// Canvas in world coordinates with room for growth on every side.
struct Canvas {
    Coord origin;
    Dims dims;
    std::vector<std::uint8_t> mask;

    Canvas(const BinaryShape& s, int pad) {
        origin = s.origin() - Coord{pad, pad, 0};
        dims = {s.dims().nx + 2 * pad, s.dims().ny + 2 * pad, 1};
        mask.assign(dims.cells(), 0);
        for (int y = 0; y < s.dims().ny; ++y)
            for (int x = 0; x < s.dims().nx; ++x)
                if (s.at(x, y)) mask[dims.index(x + pad, y + pad)] = 1;
    }
    void set_world(Coord w) {
        const Coord a = w - origin;
        if (!dims.contains(a)) throw std::logic_error("noise canvas too small");
        mask[dims.index(a)] = 1;
    }
    BinaryShape to_shape() const { return BinaryShape(2, dims, mask, origin).normalized(); }
};

// out[i] = OR (dilate) or AND (erode) of in[i + k] over k in [lo, hi], along one line.
template <bool Dilate>
void window_line(const std::uint8_t* in, std::uint8_t* out, std::ptrdiff_t stride, int n, int lo, int hi) {
    for (int i = 0; i < n; ++i) {
        bool acc = !Dilate;
        for (int k = lo; k <= hi; ++k) {
            const int j = i + k;
            const bool v = j >= 0 && j < n && in[j * stride];
            if (Dilate ? v : !v) {
                acc = Dilate;
                break;
            }
        }
        out[i * stride] = acc ? 1 : 0;
    }
}

template <bool Dilate, bool Parallel>
void window_2d(std::vector<std::uint8_t>& m, Dims d, int lo, int hi) {
    std::vector<std::uint8_t> tmp(m.size());
#pragma omp parallel for schedule(static) if (Parallel)
    for (int y = 0; y < d.ny; ++y) window_line<Dilate>(&m[d.index(0, y)], &tmp[d.index(0, y)], 1, d.nx, lo, hi);
#pragma omp parallel for schedule(static) if (Parallel)
    for (int x = 0; x < d.nx; ++x) window_line<Dilate>(&tmp[x], &m[x], d.nx, d.ny, lo, hi);
}

// The square B = [-h, side-1-h]^2 with h = (side-1)/2. Dilation X + B reads X at i - b,
// erosion X - B reads X at i + b.
template <bool Parallel>
BinaryShape closing_impl(const BinaryShape& shape, int side) {
    if (shape.ndim() != 2) throw DataError("morphological closing supports 2-D shapes only");
    if (side < 1) throw std::invalid_argument("closing: side must be >= 1");
    if (side == 1) return shape;
    const int h = (side - 1) / 2;
    Canvas c(shape, side + 1);
    window_2d<true, Parallel>(c.mask, c.dims, -(side - 1 - h), h);
    window_2d<false, Parallel>(c.mask, c.dims, -h, side - 1 - h);
    return c.to_shape();
}

void check_nf(int nf) {
    if (nf < 1) throw std::invalid_argument("noise factor must be >= 1");
}

}  // namespace

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: n must be >= 1");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    for (;;) {
        const std::uint64_t v = engine_();
        if (v < limit) return v % n;
    }
}

double Rng::gaussian(double mu, double sigma) {
    if (has_spare_) {
        has_spare_ = false;
        return mu + sigma * spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double k = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * k;
    has_spare_ = true;
    return mu + sigma * u * k;
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + (stream + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> norm_rand(Rng& rng, double mu, double sigma, std::size_t n) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("norm_rand: sigma must be >= 0");
    std::vector<double> out(n);
    for (double& x : out) x = rng.gaussian(mu, sigma);
    return out;
}

int draw_count(double x) { return std::max(0, static_cast<int>(std::lround(x))); }

BinaryShape morphological_closing(const BinaryShape& shape, int side) { return closing_impl<true>(shape, side); }
BinaryShape morphological_closing_serial(const BinaryShape& shape, int side) {
    return closing_impl<false>(shape, side);
}

std::vector<Coord> boundary_pixels(const BinaryShape& shape) {
    if (shape.ndim() != 2) throw DataError("boundary pixels: 2-D shapes only");
    std::vector<Coord> out;
    const Dims& d = shape.dims();
    for (int y = 0; y < d.ny; ++y)
        for (int x = 0; x < d.nx; ++x)
            if (shape.at(x, y) && (!shape.at(x - 1, y) || !shape.at(x + 1, y) || !shape.at(x, y - 1) || !shape.at(x, y + 1)))
                out.push_back(shape.origin() + Coord{x, y, 0});
    return out;
}

NoiseDraws draw_noise(const BinaryShape& shape, int nf, Rng& rng) {
    check_nf(nf);
    if (shape.ndim() != 2) throw DataError("noise is defined for 2-D shapes only");
    const double sigma = nf / 3.0;
    const int m = draw_count(norm_rand(rng, nf, sigma).front());
    NoiseDraws d;
    for (double v : norm_rand(rng, nf, sigma, static_cast<std::size_t>(m))) d.x_runs.push_back(static_cast<int>(std::lround(v)));
    for (double v : norm_rand(rng, nf, sigma, static_cast<std::size_t>(m))) d.y_runs.push_back(static_cast<int>(std::lround(v)));
    const auto boundary = boundary_pixels(shape);
    if (boundary.empty()) throw DataError("shape has no boundary pixels");
    d.anchor = boundary[rng.index(boundary.size())];
    return d;
}

BinaryShape apply_noise(const BinaryShape& shape, int nf, const NoiseDraws& draws) {
    check_nf(nf);
    if (shape.ndim() != 2) throw DataError("noise is defined for 2-D shapes only");
    if (!shape.at_world(draws.anchor)) throw DataError("noise anchor is not a shape pixel");

    int longest = 0;
    for (int v : draws.x_runs) longest = std::max(longest, v);
    for (int v : draws.y_runs) longest = std::max(longest, v);
    const int stack = static_cast<int>(std::max(draws.x_runs.size(), draws.y_runs.size()));
    Canvas c(shape, longest + stack + 2);

    const Coord a = draws.anchor;
    auto outward = [&](Coord step) {
        if (!shape.at_world(a + step)) return 1;
        if (!shape.at_world(a - step)) return -1;
        return 0;
    };
    // Axis u carries the runs; v is the stacking axis.
    auto extrude = [&](const std::vector<int>& runs, Coord u, Coord v) {
        const int n = static_cast<int>(runs.size());
        if (const int du = outward(u); du != 0) {
            for (int j = 0; j < n; ++j) {
                const Coord row{a.x + v.x * (j - (n - 1) / 2), a.y + v.y * (j - (n - 1) / 2), 0};
                for (int k = 1; k <= runs[j]; ++k) c.set_world({row.x + du * u.x * k, row.y + du * u.y * k, 0});
            }
        } else {
            const int dv = outward(v);
            if (dv == 0) return;
            for (int j = 0; j < n; ++j) {
                const int len = runs[j];
                const Coord row{a.x + dv * v.x * (j + 1), a.y + dv * v.y * (j + 1), 0};
                for (int k = 0; k < len; ++k) {
                    const int s = k - (len - 1) / 2;
                    c.set_world({row.x + u.x * s, row.y + u.y * s, 0});
                }
            }
        }
    };
    extrude(draws.x_runs, {1, 0, 0}, {0, 1, 0});
    extrude(draws.y_runs, {0, 1, 0}, {1, 0, 0});
    return morphological_closing(c.to_shape(), nf);
}

BinaryShape add_noise(const BinaryShape& shape, int nf, Rng& rng) {
    const NoiseDraws d = draw_noise(shape, nf, rng);
    return apply_noise(shape, nf, d);
}

std::vector<NoisySample> make_noisy_dataset(const BinaryShape& base, const std::vector<int>& counts,
                                            const std::vector<int>& nfs, std::uint64_t seed) {
    if (counts.empty() || nfs.empty()) throw std::invalid_argument("noisy dataset: empty counts or nfs");
    for (int c : counts)
        if (c < 1) throw std::invalid_argument("noisy dataset: counts must be >= 1");
    for (int nf : nfs) check_nf(nf);
    if (base.ndim() != 2) throw DataError("noise is defined for 2-D shapes only");

    const auto cells = static_cast<std::ptrdiff_t>(counts.size() * nfs.size());
    std::vector<NoisySample> out(static_cast<std::size_t>(cells), NoisySample{base, 0, 0, 0});
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < cells; ++i) {
        NoisySample& s = out[static_cast<std::size_t>(i)];
        s.count = counts[static_cast<std::size_t>(i) / nfs.size()];
        s.nf = nfs[static_cast<std::size_t>(i) % nfs.size()];
        s.seed = split_seed(seed, static_cast<std::uint64_t>(i));
        Rng rng(s.seed);
        for (int k = 0; k < s.count; ++k) s.shape = add_noise(s.shape, s.nf, rng);
    }
    return out;
}

std::string noise_sidecar(const NoisySample& sample, std::uint64_t master_seed) {
    std::ostringstream out;
    out << "seed=" << master_seed << '\n'
        << "sub_seed=" << sample.seed << '\n'
        << "nf=" << sample.nf << '\n'
        << "count=" << sample.count << '\n';
    return out.str();
}

}  // namespace squarec
