#pragma once

#include <squarec/complexity.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace squarec {

inline constexpr double kDefaultTolerance = 1e-9;

struct OrderGroup {
    std::vector<std::string> members;  ///< input order preserved within a group
    double value = 0.0;                ///< smallest value in the group
};

/// Ascending equality groups. Consecutive sorted values within `tolerance` of each
/// other share a group, so neighbouring groups are always more than `tolerance` apart.
struct LinearOrder {
    std::vector<OrderGroup> groups;
    double tolerance = kDefaultTolerance;

    /// Group index of `id`, or -1.
    int rank_of(std::string_view id) const;
    std::size_t size() const;
};

/// Groups (id, value) pairs. Throws std::invalid_argument on empty input or duplicate ids.
LinearOrder order_values(std::span<const std::pair<std::string, double>> values,
                         double tolerance = kDefaultTolerance);

/// Order by the estimator value at the level nearest to t_star in each profile.
LinearOrder order_at_scale(std::span<const ComplexityProfile> profiles, double t_star,
                           Estimator estimator = Estimator::entropy, double tolerance = kDefaultTolerance);

LinearOrder order_by_indicator(std::span<const Indicator> indicators, double tolerance = kDefaultTolerance);

/// Pairwise score over all unordered id pairs: +1 if the observed values tie within
/// `tolerance` or agree with `expected`, -1 otherwise; returns the mean. `expected`
/// lists ids from least to most complex. Fewer than two ids gives 1.
/// Throws DataError when ids differ or repeat.
double modified_kendall_tau(std::span<const std::string> expected,
                            std::span<const std::pair<std::string, double>> observed,
                            double tolerance = kDefaultTolerance);

/// Rows are shapes, columns indicators.
struct IndicatorTable {
    std::vector<std::string> ids;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> values;
};

struct PartialOrder {
    std::vector<std::string> ids;
    /// Equivalence classes of mutually dominating ids, sorted by the class's first
    /// appearance in `ids`.
    std::vector<std::vector<std::string>> classes;
    /// dominates[a][b]: class a is at most as complex as class b on every indicator.
    std::vector<std::vector<bool>> dominates;
    /// (lower, upper) class indices of the transitive reduction of strict dominance.
    std::vector<std::pair<int, int>> hasse_edges;
    /// Pairs of classes comparable in neither direction, lower index first.
    std::vector<std::pair<int, int>> incomparable_pairs;

    int class_of(std::string_view id) const;
    bool strictly_below(int a, int b) const { return a != b && dominates[a][b] && !dominates[b][a]; }
};

/// Product order of per-indicator ranks. Each indicator column is grouped as in
/// order_values; A <= B when A's group rank is at most B's on every column. Throws
/// DataError on a ragged or empty table.
PartialOrder partial_order(const IndicatorTable& table, double tolerance = kDefaultTolerance);

/// DOT text: one node per class (in class order), one edge per Hasse edge.
std::string hasse_dot(const PartialOrder& po);
void emit_hasse(const PartialOrder& po, const std::filesystem::path& path);

/// `rank,group_members,value`; members joined with ';'.
std::string order_csv(const LinearOrder& order);

}  // namespace squarec
