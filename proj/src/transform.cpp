#include <squarec/error.hpp>
#include <squarec/shape_io.hpp>
#include <squarec/transform.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace squarec {

namespace {

// d[i] = min_j max(|i - j|, h[j]) along one strided line: lower envelope of the
// chessboard cones, one forward and one backward scan.
void minmax_line(std::int32_t* base, std::ptrdiff_t stride, int n, std::vector<std::int32_t>& scratch) {
    scratch.resize(3 * static_cast<std::size_t>(n));
    std::int32_t* h = scratch.data();
    std::int32_t* s = h + n;  // envelope apices
    std::int32_t* t = s + n;  // first index each apex owns
    for (int i = 0; i < n; ++i) h[i] = base[i * stride];
    auto f = [&](int x, int i) { return std::max<std::int32_t>(std::abs(x - i), h[i]); };
    auto sep = [&](int i, int u) {
        return h[i] <= h[u] ? std::max<std::int32_t>(i + h[u], (i + u) / 2) : std::min<std::int32_t>(u - h[i], (i + u) / 2);
    };
    int q = 0;
    s[0] = 0;
    t[0] = 0;
    for (int u = 1; u < n; ++u) {
        while (q >= 0 && f(t[q], s[q]) > f(t[q], u)) --q;
        if (q < 0) {
            q = 0;
            s[0] = u;
        } else {
            const std::int32_t w = 1 + sep(s[q], u);
            if (w < n) {
                ++q;
                s[q] = u;
                t[q] = w;
            }
        }
    }
    for (int u = n - 1; u >= 0; --u) {
        base[u * stride] = f(u, s[q]);
        if (u == t[q]) --q;
    }
}

}  // namespace

ScalarField chebyshev_dt(const BinaryShape& shape) {
    const Dims d = shape.dims();
    const auto mask = shape.mask();
    std::vector<std::int32_t> dist(d.cells(), 0);
    const std::int32_t inf = std::numeric_limits<std::int32_t>::max() / 2;

    // Rows: 1-D distance to the nearest exterior cell along x.
    const int lines = d.ny * d.nz;
#pragma omp parallel for schedule(static)
    for (int line = 0; line < lines; ++line) {
        const std::size_t row = static_cast<std::size_t>(line) * d.nx;
        std::int32_t run = inf;
        for (int x = 0; x < d.nx; ++x) {
            run = mask[row + x] ? (run == inf ? inf : run + 1) : 0;
            dist[row + x] = run;
        }
        run = inf;
        for (int x = d.nx - 1; x >= 0; --x) {
            run = mask[row + x] ? (run == inf ? inf : run + 1) : 0;
            dist[row + x] = std::min(dist[row + x], run);
        }
    }

    // Columns, then slabs: min over the line of max(offset, previous distance).
#pragma omp parallel
    {
        std::vector<std::int32_t> scratch;
#pragma omp for schedule(static)
        for (int line = 0; line < d.nx * d.nz; ++line) {
            const int x = line % d.nx;
            const int z = line / d.nx;
            minmax_line(dist.data() + d.index(x, 0, z), d.nx, d.ny, scratch);
        }
        if (d.nz > 1) {
#pragma omp for schedule(static)
            for (int line = 0; line < d.nx * d.ny; ++line) {
                minmax_line(dist.data() + line, static_cast<std::ptrdiff_t>(d.nx) * d.ny, d.nz, scratch);
            }
        }
    }

    ScalarField out(d);
    for (std::size_t i = 0; i < dist.size(); ++i) out[i] = static_cast<double>(dist[i]);
    return out;
}

ScalarField chebyshev_dt_reference(const BinaryShape& shape) {
    const Dims d = shape.dims();
    const auto mask = shape.mask();
    const std::int32_t inf = std::numeric_limits<std::int32_t>::max() / 2;
    std::vector<std::int32_t> dist(d.cells());
    for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = mask[i] ? inf : 0;

    // Neighbour offsets preceding the centre in raster order; the backward pass uses
    // their negations.
    std::vector<Coord> half;
    const int zr = shape.ndim() == 3 ? 1 : 0;
    for (int dz = -zr; dz <= zr; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const bool before = dz < 0 || (dz == 0 && (dy < 0 || (dy == 0 && dx < 0)));
                if (before) half.push_back({dx, dy, dz});
            }
    auto relax = [&](int x, int y, int z, int sign) {
        const std::size_t i = d.index(x, y, z);
        if (!mask[i]) return;
        std::int32_t best = dist[i];
        for (const Coord& o : half) {
            const Coord n{x + sign * o.x, y + sign * o.y, z + sign * o.z};
            if (!d.contains(n)) continue;
            best = std::min(best, dist[d.index(n)] + 1);
        }
        dist[i] = best;
    };
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x) relax(x, y, z, +1);
    for (int z = d.nz - 1; z >= 0; --z)
        for (int y = d.ny - 1; y >= 0; --y)
            for (int x = d.nx - 1; x >= 0; --x) relax(x, y, z, -1);

    ScalarField out(d);
    for (std::size_t i = 0; i < dist.size(); ++i) out[i] = static_cast<double>(dist[i]);
    return out;
}

int Scale::level(std::size_t i) const {
    return static_cast<int>(std::lround(t[i] * rho_max));
}

Scale normalize_dt(const ScalarField& raw) {
    const double mx = raw.values.empty() ? 0.0 : *std::max_element(raw.values.begin(), raw.values.end());
    if (mx < 1.0) throw DataError("distance transform has no support");
    Scale s;
    s.rho_max = static_cast<int>(mx);
    s.t = ScalarField(raw.dims);
    for (std::size_t i = 0; i < raw.values.size(); ++i) s.t[i] = raw[i] / mx;
    return s;
}

Scale scale_of(const BinaryShape& shape) { return normalize_dt(chebyshev_dt(shape)); }

std::vector<LevelSet> level_sets(const Scale& scale) {
    std::vector<LevelSet> out(static_cast<std::size_t>(scale.rho_max));
    for (int k = 1; k <= scale.rho_max; ++k) {
        out[k - 1].level = k;
        out[k - 1].t_value = static_cast<double>(k) / scale.rho_max;
    }
    for (std::size_t i = 0; i < scale.t.values.size(); ++i) {
        if (scale.t[i] <= 0.0) continue;
        out[scale.level(i) - 1].cells.push_back(i);
    }
    return out;
}

int nearest_level_index(int rho_max, double t_star) {
    if (!(t_star > 0.0 && t_star <= 1.0)) throw std::invalid_argument("t_star must lie in (0, 1]");
    if (rho_max < 1) throw std::invalid_argument("rho_max must be >= 1");
    const int lo = std::clamp(static_cast<int>(std::floor(t_star * rho_max)), 1, rho_max);
    const int hi = std::min(lo + 1, rho_max);
    const double dlo = std::abs(static_cast<double>(lo) / rho_max - t_star);
    const double dhi = std::abs(static_cast<double>(hi) / rho_max - t_star);
    return dhi < dlo ? hi : lo;
}

LevelSet nearest_level(const Scale& scale, double t_star) {
    const int k = nearest_level_index(scale.rho_max, t_star);
    LevelSet out;
    out.level = k;
    out.t_value = static_cast<double>(k) / scale.rho_max;
    for (std::size_t i = 0; i < scale.t.values.size(); ++i)
        if (scale.t[i] > 0.0 && scale.level(i) == k) out.cells.push_back(i);
    return out;
}

void save_field(const ScalarField& field, int ndim, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "FLD " << ndim << ' ' << field.dims.nx << ' ' << field.dims.ny;
    if (ndim == 3) out << ' ' << field.dims.nz;
    out << '\n';
    std::string payload(field.values.size() * sizeof(double), '\0');
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        auto bits = std::bit_cast<std::uint64_t>(field.values[i]);
        for (int b = 0; b < 8; ++b) payload[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
    }
    out << payload;
    write_file_atomic(path, out.str());
}

std::pair<ScalarField, int> load_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string header;
    if (!std::getline(in, header)) throw ParseError(path.string() + ": missing FLD header");
    std::istringstream hs(header);
    std::string magic;
    int ndim = 0;
    Dims d;
    hs >> magic >> ndim >> d.nx >> d.ny;
    if (ndim == 3) hs >> d.nz;
    if (!hs || magic != "FLD" || (ndim != 2 && ndim != 3) || d.nx < 1 || d.ny < 1 || d.nz < 1)
        throw ParseError(path.string() + ": malformed FLD header");
    const std::string payload{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (payload.size() != d.cells() * 8) throw ParseError(path.string() + ": truncated FLD payload");
    ScalarField f(d);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b)
            bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(payload[i * 8 + b])) << (8 * b);
        f[i] = std::bit_cast<double>(bits);
    }
    return {std::move(f), ndim};
}

void save_field_csv(const ScalarField& field, const BinaryShape& shape, const std::filesystem::path& path) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << (shape.ndim() == 3 ? "x,y,z,value\n" : "x,y,value\n");
    out.precision(12);
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        if (!shape.occupied(i)) continue;
        const Coord c = field.dims.coord(i);
        out << c.x << ',' << c.y << ',';
        if (shape.ndim() == 3) out << c.z << ',';
        out << field[i] << '\n';
    }
    write_file_atomic(path, out.str());
}

}  // namespace squarec
