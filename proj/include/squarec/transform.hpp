#pragma once

#include <squarec/grid.hpp>

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace squarec {

/// Dense real-valued grid over a shape's array. Holds both the scale field t and the
/// solver field f_S; values outside the shape mask are zero.
struct ScalarField {
    Dims dims;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(Dims d, double fill = 0.0) : dims(d), values(d.cells(), fill) {}

    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    double at(int x, int y, int z = 0) const { return values[dims.index(x, y, z)]; }
};

/// Raw Chebyshev (chessboard) distance transform: for every shape cell, the L-infinity
/// distance to the nearest cell outside the shape. Cells next to the exterior get 1,
/// exterior cells 0. Separable row/column(/slab) formulation, parallel over lines.
ScalarField chebyshev_dt(const BinaryShape& shape);

/// Reference two-pass chamfer sweep with the 3x3 (3x3x3) mask. Serial; kept to check
/// `chebyshev_dt` bit for bit.
ScalarField chebyshev_dt_reference(const BinaryShape& shape);

/// Normalised scale field t = raw / rho_max.
struct Scale {
    ScalarField t;
    int rho_max = 0;

    /// Integer level k of cell i (0 outside the shape).
    int level(std::size_t i) const;
};

Scale normalize_dt(const ScalarField& raw);
Scale scale_of(const BinaryShape& shape);

struct LevelSet {
    int level = 0;         ///< k in [1, rho_max]
    double t_value = 0.0;  ///< k / rho_max
    std::vector<std::size_t> cells;  ///< linear array indices, ascending
};

/// rho_max level sets ordered by increasing t; they partition the shape support.
std::vector<LevelSet> level_sets(const Scale& scale);

/// Level index k in [1, rho_max] whose k / rho_max is closest to t_star; exact ties go
/// to the smaller level. Throws std::invalid_argument unless 0 < t_star <= 1.
int nearest_level_index(int rho_max, double t_star);

LevelSet nearest_level(const Scale& scale, double t_star);

/// FLD: ASCII header `FLD <ndims> <dims...>\n` then little-endian float64 values,
/// x fastest.
void save_field(const ScalarField& field, int ndim, const std::filesystem::path& path);
/// Returns the field and its dimensionality.
std::pair<ScalarField, int> load_field(const std::filesystem::path& path);

/// Debug dump `x,y[,z],value` for shape cells only.
void save_field_csv(const ScalarField& field, const BinaryShape& shape,
                    const std::filesystem::path& path);

}  // namespace squarec
