#pragma once

#include <squarec/solver.hpp>
#include <squarec/transform.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace squarec {

enum class Estimator { entropy, stddev };

/// Histogram range for the entropy estimator.
enum class BinRange {
    unit,      ///< fixed [0, 1], the range of the normalised field
    observed,  ///< [min, max] of the values; spread below 1/bins counts as one bin
};

struct EntropyOptions {
    int bins = 1024;
    double log_base = 0.0;  ///< 0 means natural log
    BinRange range = BinRange::unit;
};

/// Entropy of the binned values. Values equal to the top of the range land in the last
/// bin. Throws std::invalid_argument on empty input or bins < 2.
double uniformity_entropy(std::span<const double> values, const EntropyOptions& opt = {});

/// Population standard deviation (Welford). Throws std::invalid_argument on empty input.
double uniformity_std(std::span<const double> values);

struct ProfileEntry {
    int level = 0;
    double t = 0.0;
    double entropy = 0.0;
    double stddev = 0.0;
    std::size_t cells = 0;

    double value(Estimator e) const { return e == Estimator::entropy ? entropy : stddev; }
};

struct ComplexityProfile {
    std::string shape_id;
    int bins = 1024;
    std::vector<ProfileEntry> levels;  ///< ascending t
    SolveReport report;
};

/// One entry per level set of t, measuring how uniform f_S is on it.
ComplexityProfile complexity_profile(const BinaryShape& shape, const SolverConfig& cfg,
                                     const EntropyOptions& opt = {}, std::string shape_id = {});
ComplexityProfile complexity_profile(const BinaryShape& shape, std::string shape_id = {});
/// Profile from a field computed elsewhere (normalised f_S on the same array).
ComplexityProfile complexity_profile(const ScalarField& field, const Scale& scale,
                                     const EntropyOptions& opt = {}, std::string shape_id = {});

/// Entry at the level nearest to t_star.
const ProfileEntry& profile_at(const ComplexityProfile& profile, double t_star);

struct Indicator {
    std::string shape_id;
    double t_lo = 0.0;
    double t_hi = 1.0;
    Estimator estimator = Estimator::entropy;
    double value = 0.0;
    int levels = 0;  ///< discrete levels averaged
};

/// Mean of the estimator over levels with t_lo < t <= t_hi. Throws DataError if no
/// level falls in the interval and std::invalid_argument unless t_lo < t_hi.
Indicator indicator(const ComplexityProfile& profile, double t_lo, double t_hi,
                    Estimator estimator = Estimator::entropy);

/// t_c = contact_width / body_width.
double predict_cutoff(double contact_width, double body_width);

/// `t,entropy,std`, 12 significant digits.
std::string profile_csv(const ComplexityProfile& profile);
/// `shape_id,t_lo,t_hi,estimator,value`.
std::string indicator_csv(std::span<const Indicator> indicators);

const char* to_string(Estimator e);
Estimator parse_estimator(std::string_view s);

}  // namespace squarec
