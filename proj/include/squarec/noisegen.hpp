#pragma once

// Boundary noise: Gaussian-length pixel runs extruded from one
// boundary pixel, followed by a morphological closing.

#include <squarec/grid.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace squarec {

/// Seeded generator. The engine is std::mt19937_64, whose output sequence is fixed by
/// the standard; uniforms take the top 53 bits, Gaussians use the Marsaglia polar
/// method, so streams are identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform();
    /// Uniform integer in [0, n), unbiased (rejection). n >= 1.
    std::uint64_t index(std::uint64_t n);
    double gaussian(double mu, double sigma);

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// SplitMix64 finaliser applied to `master` mixed with a stream id; used to derive
/// independent per-cell seeds.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream);

/// n draws from Normal(mu, sigma). Throws std::invalid_argument if sigma < 0.
std::vector<double> norm_rand(Rng& rng, double mu, double sigma, std::size_t n = 1);

/// Rounded to nearest, clamped below at 0.
int draw_count(double x);

/// Dilation then erosion by a side x side square; 2-D only. Output is re-stored with
/// a one-cell margin in the input's world coordinates.
BinaryShape morphological_closing(const BinaryShape& shape, int side);
BinaryShape morphological_closing_serial(const BinaryShape& shape, int side);

/// Shape cells with at least one 4-neighbour outside the shape, world coordinates,
/// index order.
std::vector<Coord> boundary_pixels(const BinaryShape& shape);

/// Random choices of one noise application.
struct NoiseDraws {
    Coord anchor;            ///< world coordinate of the chosen boundary pixel
    std::vector<int> x_runs;  ///< lengths (may be 0 or negative; skipped)
    std::vector<int> y_runs;
};

NoiseDraws draw_noise(const BinaryShape& shape, int nf, Rng& rng);

/// Extrudes the runs around the anchor and closes with an nf x nf square.
///
/// x runs: if the anchor has an exterior x-neighbour, run j starts next to the anchor
/// and extends away from the shape along x, on rows stacked around the anchor row.
/// Otherwise the runs are horizontal segments centred on the anchor column, stacked
/// on rows leaving the shape along y. y runs are the same with the axes swapped.
BinaryShape apply_noise(const BinaryShape& shape, int nf, const NoiseDraws& draws);

/// draw_noise then apply_noise. Throws DataError for 3-D shapes and std::invalid_argument
/// for nf < 1.
BinaryShape add_noise(const BinaryShape& shape, int nf, Rng& rng);

struct NoisySample {
    BinaryShape shape;
    int count = 0;
    int nf = 0;
    std::uint64_t seed = 0;  ///< sub-seed driving this sample
};

/// One sample per (count, nf) pair, counts outer and nfs inner; each applies add_noise
/// `count` times from `base` with Rng(split_seed(seed, pair index)).
std::vector<NoisySample> make_noisy_dataset(const BinaryShape& base, const std::vector<int>& counts,
                                            const std::vector<int>& nfs, std::uint64_t seed);

/// `seed=`, `nf=`, `count=` lines for the sidecar of a stored sample.
std::string noise_sidecar(const NoisySample& sample, std::uint64_t master_seed);

}  // namespace squarec
