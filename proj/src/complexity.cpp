#include <squarec/complexity.hpp>
#include <squarec/error.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace squarec {

namespace {

constexpr double kLevelEps = 1e-12;

std::ostringstream csv_stream() {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(12);
    return out;
}

}  // namespace

double uniformity_entropy(std::span<const double> values, const EntropyOptions& opt) {
    if (values.empty()) throw std::invalid_argument("uniformity_entropy: empty input");
    if (opt.bins < 2) throw std::invalid_argument("uniformity_entropy: bins must be >= 2");
    if (opt.log_base < 0.0 || opt.log_base == 1.0) throw std::invalid_argument("uniformity_entropy: bad log base");

    double lo = 0.0;
    double width = 1.0;
    if (opt.range == BinRange::observed) {
        const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        if (*mx - *mn <= 1.0 / opt.bins) return 0.0;
        lo = *mn;
        width = *mx - *mn;
    }
    std::vector<std::size_t> counts(static_cast<std::size_t>(opt.bins), 0);
    for (double v : values) {
        const double u = (v - lo) / width;
        auto b = static_cast<long>(std::floor(u * opt.bins));
        b = std::clamp<long>(b, 0, opt.bins - 1);
        ++counts[static_cast<std::size_t>(b)];
    }
    const auto n = static_cast<double>(values.size());
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    if (opt.log_base > 0.0) h /= std::log(opt.log_base);
    return h == 0.0 ? 0.0 : h;  // no -0
}

double uniformity_std(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("uniformity_std: empty input");
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t k = 0;
    for (double v : values) {
        ++k;
        const double delta = v - mean;
        mean += delta / static_cast<double>(k);
        m2 += delta * (v - mean);
    }
    return std::sqrt(std::max(0.0, m2 / static_cast<double>(k)));
}

ComplexityProfile complexity_profile(const ScalarField& field, const Scale& scale, const EntropyOptions& opt,
                                     std::string shape_id) {
    if (!(field.dims == scale.t.dims)) throw std::invalid_argument("complexity_profile: field and scale dims differ");
    const auto sets = level_sets(scale);
    ComplexityProfile p;
    p.shape_id = std::move(shape_id);
    p.bins = opt.bins;
    p.levels.resize(sets.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(sets.size()); ++k) {
        const LevelSet& ls = sets[k];
        ProfileEntry& e = p.levels[k];
        e.level = ls.level;
        e.t = ls.t_value;
        e.cells = ls.cells.size();
        if (ls.cells.empty()) continue;
        std::vector<double> v;
        v.reserve(ls.cells.size());
        for (std::size_t i : ls.cells) v.push_back(field[i]);
        e.entropy = uniformity_entropy(v, opt);
        e.stddev = uniformity_std(v);
    }
    return p;
}

ComplexityProfile complexity_profile(const BinaryShape& shape, const SolverConfig& cfg, const EntropyOptions& opt,
                                     std::string shape_id) {
    auto res = solve_field(shape, cfg);
    auto p = complexity_profile(res.field, scale_of(shape), opt, std::move(shape_id));
    p.report = std::move(res.report);
    return p;
}

ComplexityProfile complexity_profile(const BinaryShape& shape, std::string shape_id) {
    return complexity_profile(shape, SolverConfig::defaults_for(shape), {}, std::move(shape_id));
}

const ProfileEntry& profile_at(const ComplexityProfile& profile, double t_star) {
    if (profile.levels.empty()) throw std::invalid_argument("profile_at: empty profile");
    const int rho = static_cast<int>(profile.levels.size());
    return profile.levels[static_cast<std::size_t>(nearest_level_index(rho, t_star) - 1)];
}

Indicator indicator(const ComplexityProfile& profile, double t_lo, double t_hi, Estimator estimator) {
    if (!(t_lo < t_hi)) throw std::invalid_argument("indicator: need t_lo < t_hi");
    Indicator ind{profile.shape_id, t_lo, t_hi, estimator, 0.0, 0};
    double sum = 0.0;
    for (const auto& e : profile.levels) {
        if (e.t > t_lo + kLevelEps && e.t <= t_hi + kLevelEps) {
            sum += e.value(estimator);
            ++ind.levels;
        }
    }
    if (ind.levels == 0) {
        std::ostringstream msg;
        msg << "indicator: no discrete level in (" << t_lo << ", " << t_hi << "]"
            << (profile.shape_id.empty() ? "" : " for " + profile.shape_id);
        throw DataError(msg.str());
    }
    ind.value = sum / ind.levels;
    return ind;
}

double predict_cutoff(double contact_width, double body_width) {
    if (!(contact_width > 0.0) || contact_width > body_width)
        throw std::invalid_argument("predict_cutoff: need 0 < contact_width <= body_width");
    return contact_width / body_width;
}

std::string profile_csv(const ComplexityProfile& profile) {
    auto out = csv_stream();
    out << "t,entropy,std\n";
    for (const auto& e : profile.levels) out << e.t << ',' << e.entropy << ',' << e.stddev << '\n';
    return out.str();
}

std::string indicator_csv(std::span<const Indicator> indicators) {
    auto out = csv_stream();
    out << "shape_id,t_lo,t_hi,estimator,value\n";
    for (const auto& i : indicators)
        out << i.shape_id << ',' << i.t_lo << ',' << i.t_hi << ',' << to_string(i.estimator) << ',' << i.value << '\n';
    return out.str();
}

const char* to_string(Estimator e) { return e == Estimator::entropy ? "entropy" : "std"; }

Estimator parse_estimator(std::string_view s) {
    if (s == "entropy") return Estimator::entropy;
    if (s == "std" || s == "stddev") return Estimator::stddev;
    throw std::invalid_argument("unknown estimator '" + std::string(s) + "'");
}

}  // namespace squarec
