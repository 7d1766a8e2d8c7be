#include <squarec/error.hpp>
#include <squarec/ordering.hpp>
#include <squarec/shape_io.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace squarec {

namespace {

// Group id per input position, ranks ascending by value.
std::vector<int> group_ranks(std::span<const double> values, double tolerance) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<int> rank(values.size(), 0);
    int g = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (k > 0 && values[idx[k]] - values[idx[k - 1]] > tolerance) ++g;
        rank[idx[k]] = g;
    }
    return rank;
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + '"';
}

}  // namespace

int LinearOrder::rank_of(std::string_view id) const {
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (const auto& m : groups[g].members)
            if (m == id) return static_cast<int>(g);
    return -1;
}

std::size_t LinearOrder::size() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.members.size();
    return n;
}

LinearOrder order_values(std::span<const std::pair<std::string, double>> values, double tolerance) {
    if (values.empty()) throw std::invalid_argument("order: empty input");
    if (!(tolerance >= 0.0)) throw std::invalid_argument("order: tolerance must be >= 0");
    std::set<std::string> seen;
    for (const auto& [id, v] : values)
        if (!seen.insert(id).second) throw std::invalid_argument("order: duplicate id '" + id + "'");

    std::vector<double> v(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) v[i] = values[i].second;
    const auto rank = group_ranks(v, tolerance);
    LinearOrder out;
    out.tolerance = tolerance;
    out.groups.resize(static_cast<std::size_t>(*std::max_element(rank.begin(), rank.end()) + 1));
    for (auto& g : out.groups) g.value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto& g = out.groups[static_cast<std::size_t>(rank[i])];
        g.members.push_back(values[i].first);
        g.value = std::min(g.value, values[i].second);
    }
    return out;
}

LinearOrder order_at_scale(std::span<const ComplexityProfile> profiles, double t_star, Estimator estimator,
                           double tolerance) {
    std::vector<std::pair<std::string, double>> v;
    v.reserve(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const auto& p = profiles[i];
        v.emplace_back(p.shape_id.empty() ? "S" + std::to_string(i) : p.shape_id,
                       profile_at(p, t_star).value(estimator));
    }
    return order_values(v, tolerance);
}

LinearOrder order_by_indicator(std::span<const Indicator> indicators, double tolerance) {
    std::vector<std::pair<std::string, double>> v;
    v.reserve(indicators.size());
    for (const auto& i : indicators) v.emplace_back(i.shape_id, i.value);
    return order_values(v, tolerance);
}

double modified_kendall_tau(std::span<const std::string> expected,
                            std::span<const std::pair<std::string, double>> observed, double tolerance) {
    std::unordered_map<std::string, double> obs;
    for (const auto& [id, v] : observed)
        if (!obs.emplace(id, v).second) throw DataError("tau: duplicate observed id '" + id + "'");
    std::set<std::string> exp_ids(expected.begin(), expected.end());
    if (exp_ids.size() != expected.size()) throw DataError("tau: expected order repeats an id");
    if (exp_ids.size() != obs.size()) throw DataError("tau: expected and observed ids differ");
    for (const auto& id : expected)
        if (!obs.contains(id)) throw DataError("tau: id '" + id + "' has no observed value");

    const std::size_t n = expected.size();
    if (n < 2) return 1.0;
    long score = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            // expected[i] is simpler than expected[j].
            const double a = obs[expected[i]];
            const double b = obs[expected[j]];
            score += (std::abs(a - b) <= tolerance || a < b) ? 1 : -1;
        }
    return static_cast<double>(score) / static_cast<double>(n * (n - 1) / 2);
}

int PartialOrder::class_of(std::string_view id) const {
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (const auto& m : classes[c])
            if (m == id) return static_cast<int>(c);
    return -1;
}

PartialOrder partial_order(const IndicatorTable& table, double tolerance) {
    const std::size_t n = table.ids.size();
    if (n == 0) throw DataError("partial order: empty table");
    if (table.values.size() != n) throw DataError("partial order: row count differs from id count");
    const std::size_t m = table.values.front().size();
    if (m == 0) throw DataError("partial order: no indicators");
    for (const auto& row : table.values)
        if (row.size() != m) throw DataError("partial order: ragged indicator table");
    if (!table.columns.empty() && table.columns.size() != m)
        throw DataError("partial order: column names differ from row width");
    if (std::set<std::string>(table.ids.begin(), table.ids.end()).size() != n)
        throw DataError("partial order: duplicate id");

    std::vector<std::vector<int>> rank(n, std::vector<int>(m));
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = table.values[i][j];
        const auto r = group_ranks(col, tolerance);
        for (std::size_t i = 0; i < n; ++i) rank[i][j] = r[i];
    }
    auto le = [&](std::size_t a, std::size_t b) {
        for (std::size_t j = 0; j < m; ++j)
            if (rank[a][j] > rank[b][j]) return false;
        return true;
    };

    PartialOrder po;
    po.ids = table.ids;
    std::vector<int> cls(n, -1);
    std::vector<std::size_t> rep;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < rep.size(); ++c)
            if (rank[i] == rank[rep[c]]) {
                cls[i] = static_cast<int>(c);
                break;
            }
        if (cls[i] < 0) {
            cls[i] = static_cast<int>(rep.size());
            rep.push_back(i);
            po.classes.emplace_back();
        }
        po.classes[static_cast<std::size_t>(cls[i])].push_back(table.ids[i]);
    }
    const std::size_t k = rep.size();
    po.dominates.assign(k, std::vector<bool>(k, false));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) po.dominates[a][b] = le(rep[a], rep[b]);

    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            if (!po.strictly_below(static_cast<int>(a), static_cast<int>(b))) continue;
            bool covered = true;
            for (std::size_t c = 0; c < k && covered; ++c)
                if (po.strictly_below(static_cast<int>(a), static_cast<int>(c)) &&
                    po.strictly_below(static_cast<int>(c), static_cast<int>(b)))
                    covered = false;
            if (covered) po.hasse_edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (!po.dominates[a][b] && !po.dominates[b][a])
                po.incomparable_pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
    return po;
}

std::string hasse_dot(const PartialOrder& po) {
    std::ostringstream out;
    out << "digraph hasse {\n  rankdir=BT;\n";
    for (std::size_t c = 0; c < po.classes.size(); ++c) {
        std::string label;
        for (std::size_t i = 0; i < po.classes[c].size(); ++i) label += (i ? " = " : "") + po.classes[c][i];
        out << "  c" << c << " [label=" << dot_quote(label) << "];\n";
    }
    for (const auto& [a, b] : po.hasse_edges) out << "  c" << a << " -> c" << b << ";\n";
    out << "}\n";
    return out.str();
}

void emit_hasse(const PartialOrder& po, const std::filesystem::path& path) { write_file_atomic(path, hasse_dot(po)); }

std::string order_csv(const LinearOrder& order) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(12);
    out << "rank,group_members,value\n";
    for (std::size_t g = 0; g < order.groups.size(); ++g) {
        out << g + 1 << ',';
        for (std::size_t i = 0; i < order.groups[g].members.size(); ++i)
            out << (i ? ";" : "") << order.groups[g].members[i];
        out << ',' << order.groups[g].value << '\n';
    }
    return out.str();
}

}  // namespace squarec
