// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset. Exit status is 0 only if every selected criterion passes.

#include "oracles.hpp"

#include <squarec/complexity.hpp>
#include <squarec/generators.hpp>
#include <squarec/noisegen.hpp>
#include <squarec/ordering.hpp>
#include <squarec/solver.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

using namespace squarec;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double field_at_world(const FieldResult& r, const BinaryShape& s, Coord w) {
    return r.field[s.dims().index(w - s.origin())];
}

// ---------------------------------------------------------------------------------

Outcome zero_class() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::pair<std::string, BinaryShape>> shapes{
        {"square32", make_square(32)},
        {"square64", make_square(64)},
        {"square128", make_square(128)},
        {"rect128x64", make_rect(128, 64)},
        {"L3x64", append_rect(append_rect(make_square(64), Side::pos_x, 64, 64, Placement::corner()), Side::pos_y,
                              64, 64, Placement::corner())},
        {"diag64+32", translate_union(make_square(64), {32, 32, 0})},
    };
    Outcome o;
    for (const auto& [id, s] : shapes) {
        const auto p = complexity_profile(s, id);
        double worst = 0.0;
        for (const auto& e : p.levels) worst = std::max(worst, e.entropy);
        if (worst != 0.0) {
            o.pass = false;
            o.detail += id + " max entropy " + fmt("%.3g", worst) + "; ";
        }
    }
    const double dt = seconds_since(t0);
    if (dt >= 10.0) o.pass = false;
    o.detail += std::to_string(shapes.size()) + " shapes, " + fmt("%.1f s", dt);
    return o;
}

// Group structure of a linear order as a list of id sets, low to high.
std::vector<std::set<std::string>> structure(const LinearOrder& o) {
    std::vector<std::set<std::string>> g;
    for (const auto& grp : o.groups) g.emplace_back(grp.members.begin(), grp.members.end());
    return g;
}

std::vector<ComplexityProfile> appendage_profiles() {
    const auto fam = appendage_family(128, {96, 64, 32});
    std::vector<ComplexityProfile> p;
    for (std::size_t i = 0; i < fam.size(); ++i) p.push_back(complexity_profile(fam[i], "S" + std::to_string(i)));
    return p;
}

Outcome appendage_orders() {
    const auto profiles = appendage_profiles();
    using G = std::vector<std::set<std::string>>;
    const G low{{"S0"}, {"S1"}, {"S2"}, {"S3"}};
    const G quarter{{"S0"}, {"S1"}, {"S2", "S3"}};
    const G half{{"S0"}, {"S1", "S2", "S3"}};
    const G all{{"S0", "S1", "S2", "S3"}};
    Outcome o;
    int checked = 0;
    for (const auto& e : profiles.front().levels) {
        const G& want = e.t <= 0.25 ? low : e.t <= 0.5 ? quarter : e.t <= 0.75 ? half : all;
        if (structure(order_at_scale(profiles, e.t, Estimator::entropy, 1e-9)) != want) {
            o.pass = false;
            o.detail += "t=" + fmt("%.4f", e.t) + " ";
        }
        ++checked;
    }
    o.detail += (o.pass ? "" : "wrong groups; ") + std::to_string(checked) + " levels checked";
    return o;
}

Outcome cutoff_congruence() {
    const auto fam = appendage_family(128, {96, 64, 32});
    std::vector<FieldResult> f;
    for (const auto& s : fam) f.push_back(solve_field(s));
    Outcome o;
    // (coarser shape, finer shape, cutoff)
    const std::tuple<int, int, double> pairs[] = {{2, 3, 0.25}, {1, 2, 0.5}, {0, 1, 0.75}};
    for (const auto& [a, b, tc] : pairs) {
        const Scale sc = scale_of(fam[b]);
        double worst = 0.0;
        std::size_t cells = 0;
        for (std::size_t i = 0; i < sc.t.values.size(); ++i) {
            if (!fam[b].occupied(i) || sc.t[i] <= tc) continue;
            const Coord w = fam[b].origin() + fam[b].dims().coord(i);
            if (!fam[a].at_world(w)) {
                worst = 1.0;
                continue;
            }
            worst = std::max(worst, std::abs(f[b].field[i] - field_at_world(f[a], fam[a], w)));
            ++cells;
        }
        if (worst > 1e-6) o.pass = false;
        o.detail += "S" + std::to_string(a) + "/S" + std::to_string(b) + " t>" + fmt("%.2f", tc) + ": " +
                    fmt("%.2e", worst) + " over " + std::to_string(cells) + " cells";
        if (tc < 0.75) o.detail += "; ";
    }
    return o;
}

Outcome disks() {
    Outcome o;
    std::vector<ComplexityProfile> p;
    for (int r : {32, 48, 64}) p.push_back(complexity_profile(make_disk(r), "disk" + std::to_string(r)));
    for (const auto& prof : p) {
        int zeros = 0;
        for (const auto& e : prof.levels) zeros += e.entropy <= 0.0;
        if (zeros) {
            o.pass = false;
            o.detail += prof.shape_id + " zero at " + std::to_string(zeros) + "/" +
                        std::to_string(prof.levels.size()) + " levels; ";
        }
    }
    // Common levels: compare at each t of the smallest disk.
    int misordered = 0;
    for (const auto& e : p[0].levels) {
        const double a = profile_at(p[0], e.t).entropy, b = profile_at(p[1], e.t).entropy,
                     c = profile_at(p[2], e.t).entropy;
        if (!(a < b && b < c)) ++misordered;
    }
    if (misordered) {
        o.pass = false;
        o.detail += "radius order broken at " + std::to_string(misordered) + "/" +
                    std::to_string(p[0].levels.size()) + " levels; ";
    }
    int above = 0;
    for (const auto& e : p[2].levels) above += e.entropy > 3.0;
    const double frac = static_cast<double>(above) / static_cast<double>(p[2].levels.size());
    if (frac < 0.70) o.pass = false;
    o.detail += "disk64 above 3 nats on " + fmt("%.0f%%", 100.0 * frac) + " of levels; ";
    const auto cross = complexity_profile(make_disk(2, DiskCenter::corner), "cross");
    double worst = 0.0;
    for (const auto& e : cross.levels) worst = std::max(worst, e.entropy);
    if (worst != 0.0) o.pass = false;
    o.detail += "cross max entropy " + fmt("%.3g", worst);
    return o;
}

Outcome cubes() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto fam = cube_family(64, 16);
    std::vector<ComplexityProfile> p;
    std::vector<int> appended;
    for (const auto& [id, s] : fam) {
        p.push_back(complexity_profile(s, id));
        appended.push_back(id == "S0" ? 0 : id[1] - '0');
    }
    Outcome o;
    const double tc = predict_cutoff(16, 64);
    int above_bad = 0, order_bad = 0, s0_bad = 0;
    for (std::size_t k = 0; k < p[0].levels.size(); ++k) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double hi = p[i].levels[k].entropy;
            if (p[i].levels[k].t > tc && hi != 0.0) ++above_bad;
            if (appended[i] == 0 && hi != 0.0) ++s0_bad;
            for (std::size_t j = 0; j < p.size(); ++j)
                if (appended[i] < appended[j] && hi > p[j].levels[k].entropy + 1e-12) ++order_bad;
        }
    }
    const double dt = seconds_since(t0);
    o.pass = above_bad == 0 && order_bad == 0 && s0_bad == 0 && dt < 300.0;
    o.detail = std::to_string(p.size()) + " shapes, " + std::to_string(p[0].levels.size()) + " levels; nonzero above cutoff " +
               std::to_string(above_bad) + ", order violations " + std::to_string(order_bad) + ", S0 nonzero " +
               std::to_string(s0_bad) + ", " + fmt("%.1f s", dt);
    return o;
}

Outcome floor_plans() {
    const auto p3 = complexity_profile(make_frame_plan(builtin_plan(3)), "P3");
    const auto p0 = complexity_profile(make_frame_plan(builtin_plan(0)), "P0");
    Outcome o;
    int bad3 = 0, above = 0, bad0 = 0;
    for (const auto& e : p3.levels)
        if (e.t > 0.625) {
            ++above;
            bad3 += e.entropy != 0.0;
        }
    for (const auto& e : p0.levels) bad0 += e.entropy != 0.0;
    o.pass = bad3 == 0 && bad0 == 0 && above > 0;
    o.detail = "P3 nonzero at " + std::to_string(bad3) + "/" + std::to_string(above) + " levels above 0.625; P0 nonzero at " +
               std::to_string(bad0) + "/" + std::to_string(p0.levels.size()) + " levels";
    return o;
}

Outcome noise_tau() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> counts{50, 100, 150, 200, 300, 400};
    const std::vector<int> nfs{1, 2, 3};
    const auto base = make_square(256);
    std::vector<std::string> expected;
    for (int c : counts) expected.push_back("c" + std::to_string(c));

    std::map<int, std::vector<double>> tau_at_09;
    int nf1_bad = 0, nf1_total = 0;
    double nf1_min = 1.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto data = make_noisy_dataset(base, counts, nfs, seed);
        std::map<int, std::vector<std::pair<std::string, ComplexityProfile>>> by_nf;
        for (const auto& s : data) by_nf[s.nf].emplace_back("c" + std::to_string(s.count), complexity_profile(s.shape));
        for (const auto& [nf, profs] : by_nf)
            for (int k = 1; k <= 9; ++k) {
                const double t = k / 10.0;
                std::vector<std::pair<std::string, double>> obs;
                for (const auto& [id, p] : profs) obs.emplace_back(id, profile_at(p, t).entropy);
                const double tau = modified_kendall_tau(expected, obs);
                if (nf == 1) {
                    ++nf1_total;
                    nf1_bad += tau != 1.0;
                    nf1_min = std::min(nf1_min, tau);
                }
                if (k == 9) tau_at_09[nf].push_back(tau);
            }
    }
    Outcome o;
    o.pass = nf1_bad == 0;
    o.detail = "nf=1 tau<1 in " + std::to_string(nf1_bad) + "/" + std::to_string(nf1_total) + " (min " +
               fmt("%.2f", nf1_min) + "); mean tau at t=0.9:";
    for (const auto& [nf, v] : tau_at_09) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        if (m < 0.95) o.pass = false;
        o.detail += " nf" + std::to_string(nf) + "=" + fmt("%.2f", m);
    }
    o.detail += ", " + fmt("%.0f s", seconds_since(t0));
    return o;
}

double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0, m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
        m = std::max(m, std::abs(b[i]));
    }
    return m > 0.0 ? d / m : d;
}

Outcome solver_oracle() {
    std::vector<BinaryShape> suite = oracle::connected_shapes(4, 4);
    const std::size_t exhaustive = suite.size();
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 20; ++k) suite.push_back(oracle::random_blob(rng, 9, 9, 20 + static_cast<int>(rng() % 50)));

    double worst_hybrid = 0.0, worst_explicit = 0.0;
    for (const auto& s : suite) {
        const auto cfg = SolverConfig::defaults_for(s);
        const auto ref = oracle::fixed_point(s, cfg.rho);
        const auto hyb = solve_field_raw(s, cfg);
        auto ex_cfg = cfg;
        ex_cfg.mode = SolveMode::explicit_scheme;
        const auto ex = solve_field_raw(s, ex_cfg);
        worst_hybrid = std::max(worst_hybrid, rel_diff(hyb.field.values, ref));
        worst_explicit = std::max(worst_explicit, rel_diff(ex.field.values, hyb.field.values));
    }
    Outcome o;
    o.pass = worst_hybrid <= 1e-6 && worst_explicit <= 1e-6;
    o.detail = std::to_string(exhaustive) + " exhaustive + 20 random shapes; hybrid vs oracle " + fmt("%.2e", worst_hybrid) +
               ", explicit vs hybrid " + fmt("%.2e", worst_explicit);
    return o;
}

Outcome symmetry() {
    using Map = std::function<Coord(Coord)>;
    const std::vector<Map> maps{
        [](Coord c) { return Coord{-c.y, c.x, 0}; },  [](Coord c) { return Coord{-c.x, -c.y, 0}; },
        [](Coord c) { return Coord{c.y, -c.x, 0}; },  [](Coord c) { return Coord{-c.x, c.y, 0}; },
        [](Coord c) { return Coord{c.x, -c.y, 0}; },  [](Coord c) { return Coord{c.y, c.x, 0}; },
        [](Coord c) { return Coord{-c.y, -c.x, 0}; },
    };
    std::mt19937_64 rng(909);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const auto s = k % 2 ? oracle::random_blob(rng, 32, 32, 300 + static_cast<int>(rng() % 400))
                             : oracle::random_rects(rng, 32, 32, 5);
        const auto f = solve_field(s);
        const auto cells = s.world_cells();
        for (const auto& m : maps) {
            std::vector<Coord> moved;
            for (const Coord& c : cells) moved.push_back(m(c));
            const auto t = BinaryShape::from_cells(2, moved);
            const auto g = solve_field(t);
            for (const Coord& c : cells)
                worst = std::max(worst, std::abs(field_at_world(f, s, c) - field_at_world(g, t, m(c))));
        }
    }
    Outcome o;
    o.pass = worst <= 1e-9;
    o.detail = "10 shapes x 7 transforms, max abs diff " + fmt("%.2e", worst);
    return o;
}

Outcome partial_orders() {
    std::mt19937_64 rng(1010);
    int tables = 0, bad = 0;
    for (std::size_t n = 1; n <= 8; ++n)
        for (std::size_t m = 1; m <= 3; ++m)
            for (int rep = 0; rep < 40; ++rep, ++tables) {
                IndicatorTable t;
                for (std::size_t i = 0; i < n; ++i) {
                    t.ids.push_back("s" + std::to_string(i));
                    std::vector<double> row;
                    for (std::size_t j = 0; j < m; ++j)
                        row.push_back(rep % 2 ? static_cast<double>(rng() % 3) : std::uniform_real_distribution<double>()(rng));
                    t.values.push_back(row);
                }
                const auto po = partial_order(t);
                const auto closure = oracle::transitive_closure(po.classes.size(), po.hasse_edges);
                bool ok = true;
                for (std::size_t a = 0; a < n && ok; ++a)
                    for (std::size_t b = 0; b < n && ok; ++b) {
                        const bool ab = oracle::dominates(t.values[a], t.values[b], kDefaultTolerance);
                        const bool ba = oracle::dominates(t.values[b], t.values[a], kDefaultTolerance);
                        const int ca = po.class_of(t.ids[a]), cb = po.class_of(t.ids[b]);
                        if ((ca == cb) != (ab && ba)) ok = false;
                        else if (ca != cb && closure[ca][cb] != (ab && !ba)) ok = false;
                    }
                bad += !ok;
            }

    IndicatorTable plans;
    plans.columns = {"low", "all"};
    for (int i : {2, 3}) {
        const auto p = complexity_profile(make_frame_plan(builtin_plan(i)), "P" + std::to_string(i));
        plans.ids.push_back(p.shape_id);
        plans.values.push_back({indicator(p, 0.0, 0.25).value, indicator(p, 0.0, 1.0).value});
    }
    const auto po = partial_order(plans);
    Outcome o;
    o.pass = bad == 0 && po.incomparable_pairs.size() == 1;
    o.detail = std::to_string(tables) + " random tables, " + std::to_string(bad) + " mismatches; P2 low/all " +
               fmt("%.4f", plans.values[0][0]) + "/" + fmt("%.4f", plans.values[0][1]) + ", P3 low/all " +
               fmt("%.4f", plans.values[1][0]) + "/" + fmt("%.4f", plans.values[1][1]) +
               (po.incomparable_pairs.size() == 1 ? ", incomparable" : ", comparable");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
        {"zero-complexity class", zero_class},
        {"appendage orders", appendage_orders},
        {"cutoff congruence", cutoff_congruence},
        {"disks", disks},
        {"3-D cube family", cubes},
        {"floor plans P3 and P0", floor_plans},
        {"noise tau", noise_tau},
        {"solver oracle equivalence", solver_oracle},
        {"symmetry equivariance", symmetry},
        {"partial order", partial_orders},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.contains(n)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("criterion %2d %s: %s (%s)\n", n, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
