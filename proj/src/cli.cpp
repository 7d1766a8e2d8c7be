#include <squarec/cli.hpp>
#include <squarec/complexity.hpp>
#include <squarec/error.hpp>
#include <squarec/generators.hpp>
#include <squarec/noisegen.hpp>
#include <squarec/ordering.hpp>
#include <squarec/shape_io.hpp>
#include <squarec/solver.hpp>
#include <squarec/transform.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

extern char** environ;

#ifndef SQUAREC_VERSION
#define SQUAREC_VERSION "0.0.0"
#endif

namespace squarec::cli {

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

// Shortest round-trip form, locale independent.
std::string num(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto t = trim(s);
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc{} || r.ptr != t.data() + t.size()) throw ParseError(what + ": bad number '" + t + "'");
    return v;
}

// ---------------------------------------------------------------------------------
// Config file: `key = value` lines, `#` comments, optional `[subcommand]` sections.

using Section = std::map<std::string, std::string>;

std::map<std::string, Section> parse_config(const fs::path& path) {
    std::map<std::string, Section> cfg;
    std::istringstream in(read_text(path));
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
        cfg[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

std::string env_key(const std::string& option) {
    std::string k = "SQUAREC_";
    for (char c : option) k += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return k;
}

bool truthy(std::string v) {
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    return v == "1" || v == "true" || v == "yes" || v == "on";
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& name) {
    const std::string flag = "--" + name;
    for (const auto& a : args)
        if (a == flag || a.starts_with(flag + "=")) return true;
    return false;
}

// ---------------------------------------------------------------------------------
// Manifest

struct Manifest {
    fs::path dir;
    std::string command;
    std::vector<std::string> args;
    std::vector<std::pair<std::string, std::string>> settings;
    std::vector<std::pair<std::string, std::string>> extra;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<std::string> partial;

    void output(const fs::path& p) { outputs.push_back(p.filename().string()); }

    std::string text() const {
        std::string canon;
        for (const auto& [k, v] : settings) canon += k + "=" + v + "\n";
        std::ostringstream out;
        out << "tool=squarec\nversion=" SQUAREC_VERSION "\ncommand=" << command << "\n";
        out << "args=";
        for (std::size_t i = 0; i < args.size(); ++i) out << (i ? " " : "") << args[i];
        out << "\nconfig_hash=" << hex64(fnv1a64(canon)) << "\n";
        for (const auto& [k, v] : settings) out << "option." << k << "=" << v << "\n";
        for (const auto& [k, v] : extra) out << k << "=" << v << "\n";
        for (const auto& in : inputs) out << "input=" << in << " fnv1a64=" << hex64(fnv1a64(read_text(in))) << "\n";
        for (const auto& o : outputs) out << "output=" << o << "\n";
        for (const auto& p : partial) out << "partial=" << p << "\n";
        out << "status=" << (partial.empty() ? "ok" : "nonconverged") << "\n";
        return out.str();
    }
    void write() const { write_file_atomic(dir / "manifest.txt", text()); }
};

// ---------------------------------------------------------------------------------
// Option groups shared by several subcommands

struct SolverFlags {
    std::string mode = "hybrid";
    std::string linear = "automatic";
    std::string stop_rule = "both";
    double rho = 0, eps1 = 0, eps2 = 0, eps3 = 0, dk = 0;
    long max_iters = 0;
    int max_outer = 0;
    CLI::Option *o_rho{}, *o_eps1{}, *o_eps2{}, *o_eps3{}, *o_dk{}, *o_iters{}, *o_outer{};

    void add(CLI::App* app) {
        app->add_option("--mode", mode, "solver mode")->check(CLI::IsMember({"hybrid", "system", "explicit"}));
        app->add_option("--linear", linear, "linear solver for the system scheme")
            ->check(CLI::IsMember({"automatic", "direct", "iterative"}));
        app->add_option("--stop-rule", stop_rule, "explicit stopping rule")->check(CLI::IsMember({"both", "either"}));
        o_rho = app->add_option("--rho", rho, "screening radius (default: rho_max)");
        o_eps1 = app->add_option("--eps1", eps1, "explicit residual bound");
        o_eps2 = app->add_option("--eps2", eps2, "explicit residual-change bound");
        o_eps3 = app->add_option("--eps3", eps3, "system residual-change bound");
        o_dk = app->add_option("--dk", dk, "explicit step size");
        o_iters = app->add_option("--max-iters", max_iters, "explicit step cap");
        o_outer = app->add_option("--max-outer", max_outer, "system solve cap");
        for (CLI::Option* o : {o_rho, o_eps1, o_eps2, o_eps3, o_dk, o_iters, o_outer}) o->default_str("auto");
    }

    SolverConfig config_for(const BinaryShape& shape) const {
        SolverConfig c = SolverConfig::defaults_for(shape);
        if (o_rho->count()) {
            c.rho = rho;
            if (!o_dk->count()) c.dk = 1.0 / c.screening();
        }
        if (o_eps1->count()) c.eps1 = eps1;
        if (o_eps2->count()) c.eps2 = eps2;
        if (o_eps3->count()) c.eps3 = eps3;
        if (o_dk->count()) c.dk = dk;
        if (o_iters->count()) c.max_iters = max_iters;
        if (o_outer->count()) c.max_outer = max_outer;
        c.mode = mode == "system" ? SolveMode::system : mode == "explicit" ? SolveMode::explicit_scheme : SolveMode::hybrid;
        c.linear = linear == "direct" ? LinearSolver::direct
                   : linear == "iterative" ? LinearSolver::iterative
                                           : LinearSolver::automatic;
        c.stop_rule = stop_rule == "either" ? StopRule::either : StopRule::both;
        c.validate();
        return c;
    }
};

struct EntropyFlags {
    int bins = 1024;
    double log_base = 0.0;
    std::string range = "unit";

    void add(CLI::App* app) {
        app->add_option("--bins", bins, "histogram bins")->check(CLI::Range(2, 1 << 24));
        app->add_option("--log-base", log_base, "entropy log base (0: natural)");
        app->add_option("--range", range, "histogram range")->check(CLI::IsMember({"unit", "observed"}));
    }
    EntropyOptions options() const {
        if (log_base != 0.0 && !(log_base > 0.0 && log_base != 1.0))
            throw std::invalid_argument("--log-base must be 0 or a positive number other than 1");
        return {bins, log_base, range == "observed" ? BinRange::observed : BinRange::unit};
    }
};

// ---------------------------------------------------------------------------------

Side parse_side(const std::string& s) {
    static const std::map<std::string, Side> m = {{"neg_x", Side::neg_x}, {"pos_x", Side::pos_x},
                                                  {"neg_y", Side::neg_y}, {"pos_y", Side::pos_y},
                                                  {"neg_z", Side::neg_z}, {"pos_z", Side::pos_z}};
    const auto it = m.find(s);
    if (it == m.end()) throw std::invalid_argument("unknown face '" + s + "'");
    return it->second;
}

std::string shape_ext(const BinaryShape& s) { return s.ndim() == 3 ? ".vox" : ".pbm"; }

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

std::vector<std::string> unique_ids(const std::vector<std::string>& paths) {
    std::vector<std::string> ids;
    for (const auto& p : paths) {
        std::string id = stem_of(p);
        if (std::find(ids.begin(), ids.end(), id) != ids.end())
            throw std::invalid_argument("inputs share the id '" + id + "'; rename one of them");
        ids.push_back(id);
    }
    return ids;
}

// `t,entropy,std` as written by profile_csv.
ComplexityProfile load_profile_csv(const std::string& path, const std::string& id) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || trim(line) != "t,entropy,std")
        throw ParseError(path + ": expected header 't,entropy,std'");
    ComplexityProfile p;
    p.shape_id = id;
    p.report.converged = true;
    int level = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
            throw ParseError(path + ": malformed row '" + line + "'");
        ProfileEntry e;
        e.level = ++level;
        e.t = parse_double(a, path);
        e.entropy = parse_double(b, path);
        e.stddev = parse_double(c, path);
        p.levels.push_back(e);
    }
    if (p.levels.empty()) throw DataError(path + ": no profile rows");
    return p;
}

std::pair<double, double> parse_interval(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("interval '" + s + "' is not lo:hi");
    const double lo = parse_double(s.substr(0, colon), "interval");
    const double hi = parse_double(s.substr(colon + 1), "interval");
    if (!(lo < hi) || lo < 0.0 || hi > 1.0) throw std::invalid_argument("interval '" + s + "' must satisfy 0 <= lo < hi <= 1");
    return {lo, hi};
}

std::string order_text(const LinearOrder& order) {
    std::string s;
    for (std::size_t g = 0; g < order.groups.size(); ++g) {
        if (g) s += " < ";
        for (std::size_t i = 0; i < order.groups[g].members.size(); ++i)
            s += (i ? " = " : "") + order.groups[g].members[i];
    }
    return s;
}

// ---------------------------------------------------------------------------------

struct Cli {
    CLI::App app{"Multi-scale shape complexity against the square (L-infinity) reference", "squarec"};
    std::string config_path;

    // generate
    CLI::App* gen{};
    std::string g_kind, g_center = "cell", g_plan, g_format = "binary", g_name, g_out = ".";
    int g_side = 128, g_width = 128, g_height = 64, g_radius = 64, g_base = 128, g_append_side = 16;
    int g_dx = 32, g_dy = 32, g_dz = 0, g_builtin = -1, g_nf = 1, g_count = 1;
    std::uint64_t g_seed = 0;
    std::vector<int> g_widths{96, 64, 32};
    std::vector<std::string> g_faces;
    bool g_family = false;

    // dataset
    CLI::App* dset{};
    int d_side = 256;
    std::string d_base, d_out = ".";
    std::vector<int> d_counts{50, 100, 150, 200, 300, 400}, d_nfs{1, 2, 3};
    std::uint64_t d_seed = 1;

    // field
    CLI::App* fld{};
    std::vector<std::string> f_inputs;
    std::string f_out = ".";
    bool f_scale = false, f_csv = false, f_raw = false;
    SolverFlags f_solver;

    // profile
    CLI::App* prof{};
    std::vector<std::string> p_inputs;
    std::string p_out = ".", p_estimator = "entropy";
    std::vector<double> p_at;
    SolverFlags p_solver;
    EntropyFlags p_entropy;

    // compare
    CLI::App* cmp{};
    std::vector<std::string> c_inputs, c_intervals{"0:1"};
    std::string c_out = ".", c_estimator = "entropy";
    double c_tolerance = kDefaultTolerance;
    std::optional<double> c_at;
    SolverFlags c_solver;
    EntropyFlags c_entropy;

    // tau
    CLI::App* tau{};
    std::string t_expected, t_observed;
    double t_tolerance = kDefaultTolerance;

    Cli() {
        app.option_defaults()->always_capture_default();
        app.require_subcommand(1);
        app.set_version_flag("--version", "squarec " SQUAREC_VERSION);
        app.add_option("--config", config_path, "config file (key = value, [subcommand] sections)");

        gen = app.add_subcommand("generate", "write a generated shape (PBM or VOX3)");
        gen->add_option("kind", g_kind, "shape kind")
            ->required()
            ->check(CLI::IsMember({"square", "rect", "disk", "appendage", "cube", "translate", "plan", "noisy"}));
        gen->add_option("--side", g_side, "square/cube side, or noisy base square side");
        gen->add_option("--width", g_width, "rectangle width");
        gen->add_option("--height", g_height, "rectangle height");
        gen->add_option("--radius", g_radius, "disk radius");
        gen->add_option("--center", g_center, "disk centre")->check(CLI::IsMember({"cell", "corner"}));
        gen->add_option("--base", g_base, "appendage family base square side");
        gen->add_option("--widths", g_widths, "appendage widths")->delimiter(',');
        gen->add_option("--faces", g_faces, "cube faces that receive appendages")->delimiter(',');
        gen->add_option("--append-side", g_append_side, "appended cube side");
        gen->add_flag("--family", g_family, "cube: write the ten-shape appendage family");
        gen->add_option("--dx", g_dx, "translate offset x");
        gen->add_option("--dy", g_dy, "translate offset y");
        gen->add_option("--dz", g_dz, "translate offset z");
        gen->add_option("--plan", g_plan, "floor-plan text file");
        gen->add_option("--builtin", g_builtin, "built-in floor plan P0..P3")->check(CLI::Range(-1, 3));
        gen->add_option("--nf", g_nf, "noise factor")->check(CLI::PositiveNumber);
        gen->add_option("--count", g_count, "noise applications")->check(CLI::NonNegativeNumber);
        gen->add_option("--seed", g_seed, "random seed");
        gen->add_option("--format", g_format, "PBM flavour")->check(CLI::IsMember({"binary", "ascii"}));
        gen->add_option("--name", g_name, "output file stem");
        gen->add_option("--out-dir", g_out, "output directory");

        dset = app.add_subcommand("dataset", "noisy variants of a base shape, one per (count, nf)");
        dset->add_option("--side", d_side, "base square side")->check(CLI::PositiveNumber);
        dset->add_option("--base-shape", d_base, "base shape file (overrides --side)");
        dset->add_option("--counts", d_counts, "noise application counts")->delimiter(',');
        dset->add_option("--nfs", d_nfs, "noise factors")->delimiter(',');
        dset->add_option("--seed", d_seed, "master seed");
        dset->add_option("--out-dir", d_out, "output directory");

        fld = app.add_subcommand("field", "solve for f_S and write it as FLD");
        fld->add_option("inputs", f_inputs, "shape files")->required()->check(CLI::ExistingFile);
        fld->add_flag("--scale", f_scale, "also write the normalised distance transform t");
        fld->add_flag("--csv", f_csv, "also write x,y[,z],value CSV");
        fld->add_flag("--raw", f_raw, "skip the final normalisation");
        fld->add_option("--out-dir", f_out, "output directory");
        f_solver.add(fld);

        prof = app.add_subcommand("profile", "complexity per level of t, one CSV per shape");
        prof->add_option("inputs", p_inputs, "shape files")->required()->check(CLI::ExistingFile);
        prof->add_option("--estimator", p_estimator, "estimator for --at values")->check(CLI::IsMember({"entropy", "std"}));
        prof->add_option("--at", p_at, "also write id,value at these scales")->delimiter(',');
        prof->add_option("--out-dir", p_out, "output directory");
        p_solver.add(prof);
        p_entropy.add(prof);

        cmp = app.add_subcommand("compare", "order shapes by interval indicators");
        cmp->add_option("inputs", c_inputs, "shape files or profile CSVs")->required()->check(CLI::ExistingFile);
        cmp->add_option("--intervals", c_intervals, "scale intervals lo:hi")->delimiter(',');
        cmp->add_option("--at", c_at, "order at a single scale instead of intervals");
        cmp->add_option("--tolerance", c_tolerance, "equality tolerance")->check(CLI::NonNegativeNumber);
        cmp->add_option("--estimator", c_estimator, "uniformity estimator")->check(CLI::IsMember({"entropy", "std"}));
        cmp->add_option("--out-dir", c_out, "output directory");
        c_solver.add(cmp);
        c_entropy.add(cmp);

        tau = app.add_subcommand("tau", "modified Kendall tau of observed values against an expected order");
        tau->add_option("expected", t_expected, "ids from least to most complex, one per line")
            ->required()
            ->check(CLI::ExistingFile);
        tau->add_option("observed", t_observed, "CSV id,value")->required()->check(CLI::ExistingFile);
        tau->add_option("--tolerance", t_tolerance, "tie tolerance")->check(CLI::NonNegativeNumber);
    }

    // Command-line arguments plus values from the environment and config file for every
    // option the command line left unset.
    std::vector<std::string> resolve(const std::vector<std::string>& args, const Environment& env) {
        std::string sub_name;
        std::string cfg_file;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) cfg_file = args[i + 1];
            else if (args[i].starts_with("--config=")) cfg_file = args[i].substr(9);
            else if (sub_name.empty() && !args[i].starts_with("-") && (i == 0 || args[i - 1] != "--config"))
                sub_name = args[i];
        }
        if (cfg_file.empty())
            if (const auto it = env.find("SQUAREC_CONFIG"); it != env.end()) cfg_file = it->second;
        CLI::App* sub = sub_name.empty() ? nullptr : app.get_subcommand_no_throw(sub_name);
        if (!sub) return args;

        std::map<std::string, Section> cfg;
        if (!cfg_file.empty()) {
            cfg = parse_config(cfg_file);
            for (const auto& [section, keys] : cfg) {
                if (section.empty()) continue;
                CLI::App* s = app.get_subcommand_no_throw(section);
                if (!s) throw std::invalid_argument("config: unknown section [" + section + "]");
                for (const auto& kv : keys)
                    if (!s->get_option_no_throw("--" + kv.first))
                        throw std::invalid_argument("config: [" + section + "] has no option '" + kv.first + "'");
            }
        }

        std::vector<std::string> injected;
        for (CLI::Option* opt : sub->get_options()) {
            if (opt->get_lnames().empty()) continue;
            const std::string name = opt->get_lnames().front();
            if (name == "help" || given_on_command_line(args, name)) continue;
            std::optional<std::string> value;
            if (const auto it = env.find(env_key(name)); it != env.end()) value = it->second;
            else if (const auto s = cfg.find(sub_name); s != cfg.end() && s->second.contains(name))
                value = s->second.at(name);
            else if (const auto g = cfg.find(""); g != cfg.end() && g->second.contains(name))
                value = g->second.at(name);
            if (!value) continue;
            if (opt->get_type_size_max() == 0) {
                if (truthy(*value)) injected.push_back("--" + name);
            } else {
                injected.push_back("--" + name + "=" + *value);
            }
        }
        std::vector<std::string> out;
        bool placed = false;
        for (std::size_t i = 0; i < args.size(); ++i) {
            out.push_back(args[i]);
            if (!placed && args[i] == sub_name && (i == 0 || args[i - 1] != "--config")) {
                out.insert(out.end(), injected.begin(), injected.end());
                placed = true;
            }
        }
        return out;
    }

    Manifest manifest_for(CLI::App* sub, const fs::path& dir, const std::vector<std::string>& args) {
        fs::create_directories(dir);
        Manifest m;
        m.dir = dir;
        m.command = sub->get_name();
        m.args = args;
        for (const CLI::Option* opt : sub->get_options()) {
            if (opt->get_name() == "--help" || opt->get_lnames().empty()) continue;
            const std::string name = opt->get_lnames().front();
            if (name == "out-dir") continue;
            std::string v;
            if (opt->get_type_size_max() == 0) {
                v = opt->count() ? "true" : "false";
            } else if (opt->count()) {
                for (const auto& r : opt->results()) v += (v.empty() ? "" : ",") + r;
            } else {
                v = opt->get_default_str();
                if (v.size() >= 2 && (v.front() == '[' || v.front() == '{')) v = v.substr(1, v.size() - 2);
            }
            m.settings.emplace_back(name, v);
        }
        std::sort(m.settings.begin(), m.settings.end());
        return m;
    }

    // ------------------------------------------------------------------------------

    int do_generate(const std::vector<std::string>& args, std::ostream& out) {
        Manifest m = manifest_for(gen, g_out, args);
        const ShapeFormat fmt = g_format == "ascii" ? ShapeFormat::pbm_ascii : ShapeFormat::pbm_binary;
        auto emit = [&](const BinaryShape& s, const std::string& stem) {
            const fs::path p = fs::path(g_out) / (stem + shape_ext(s));
            save_shape(s, p, s.ndim() == 3 ? ShapeFormat::vox3 : fmt);
            m.output(p);
            out << p.string() << "\n";
        };
        auto name_or = [&](const std::string& fallback) { return g_name.empty() ? fallback : g_name; };

        if (g_kind == "square") {
            emit(make_square(g_side), name_or("square_" + std::to_string(g_side)));
        } else if (g_kind == "rect") {
            emit(make_rect(g_width, g_height), name_or("rect_" + std::to_string(g_width) + "x" + std::to_string(g_height)));
        } else if (g_kind == "disk") {
            const auto c = g_center == "corner" ? DiskCenter::corner : DiskCenter::cell;
            emit(make_disk(g_radius, c), name_or("disk_" + std::to_string(g_radius)));
        } else if (g_kind == "appendage") {
            const auto fam = appendage_family(g_base, g_widths);
            const std::string prefix = g_name.empty() ? "S" : g_name + "_S";
            for (std::size_t i = 0; i < fam.size(); ++i) emit(fam[i], prefix + std::to_string(i));
        } else if (g_kind == "cube") {
            if (g_family) {
                for (const auto& [id, s] : cube_family(g_side, g_append_side)) emit(s, g_name.empty() ? id : g_name + "_" + id);
            } else {
                BinaryShape s = make_cube(g_side);
                for (const auto& f : g_faces) s = append_cube(s, parse_side(f), g_append_side);
                emit(s, name_or("cube_" + std::to_string(g_side)));
            }
        } else if (g_kind == "translate") {
            emit(translate_union(make_square(g_side), {g_dx, g_dy, g_dz}), name_or("translate_" + std::to_string(g_side)));
        } else if (g_kind == "plan") {
            if (g_plan.empty() == (g_builtin < 0)) throw std::invalid_argument("plan: give exactly one of --plan or --builtin");
            std::string text;
            if (g_plan.empty()) {
                text = builtin_plan(g_builtin);
            } else {
                text = read_text(g_plan);
                m.inputs.push_back(g_plan);
            }
            emit(make_frame_plan(text), name_or(g_plan.empty() ? "P" + std::to_string(g_builtin) : stem_of(g_plan)));
        } else {  // noisy
            Rng rng(g_seed);
            BinaryShape s = make_square(g_side);
            for (int k = 0; k < g_count; ++k) s = add_noise(s, g_nf, rng);
            const std::string stem =
                name_or("noisy_c" + std::to_string(g_count) + "_nf" + std::to_string(g_nf) + "_s" + std::to_string(g_seed));
            emit(s, stem);
            const fs::path side = fs::path(g_out) / (stem + ".txt");
            write_file_atomic(side, noise_sidecar(NoisySample{s, g_count, g_nf, g_seed}, g_seed));
            m.output(side);
            m.extra.emplace_back("seed", std::to_string(g_seed));
        }
        m.write();
        return exit_ok;
    }

    int do_dataset(const std::vector<std::string>& args, std::ostream& out) {
        Manifest m = manifest_for(dset, d_out, args);
        BinaryShape base = make_square(d_side);
        if (!d_base.empty()) {
            base = load_shape(d_base);
            m.inputs.push_back(d_base);
        }
        const auto samples = make_noisy_dataset(base, d_counts, d_nfs, d_seed);
        std::map<int, std::vector<std::pair<int, std::string>>> by_nf;
        for (const auto& s : samples) {
            const std::string stem = "noisy_c" + std::to_string(s.count) + "_nf" + std::to_string(s.nf);
            const fs::path p = fs::path(d_out) / (stem + ".pbm");
            save_shape(s.shape, p);
            write_file_atomic(fs::path(d_out) / (stem + ".txt"), noise_sidecar(s, d_seed));
            m.output(p);
            m.output(fs::path(d_out) / (stem + ".txt"));
            by_nf[s.nf].emplace_back(s.count, stem);
        }
        // Expected order per noise factor: more noise applications, more complex.
        for (auto& [nf, v] : by_nf) {
            std::stable_sort(v.begin(), v.end());
            std::string text;
            for (const auto& e : v) text += e.second + "\n";
            const fs::path p = fs::path(d_out) / ("expected_nf" + std::to_string(nf) + ".txt");
            write_file_atomic(p, text);
            m.output(p);
        }
        m.extra.emplace_back("seed", std::to_string(d_seed));
        m.write();
        out << samples.size() << " samples written to " << d_out << "\n";
        return exit_ok;
    }

    int do_field(const std::vector<std::string>& args, std::ostream& out) {
        Manifest m = manifest_for(fld, f_out, args);
        const auto ids = unique_ids(f_inputs);
        for (std::size_t i = 0; i < f_inputs.size(); ++i) {
            const BinaryShape s = load_input(f_inputs[i]);
            m.inputs.push_back(f_inputs[i]);
            const SolverConfig cfg = f_solver.config_for(s);
            const FieldResult r = f_raw ? solve_field_raw(s, cfg) : solve_field(s, cfg);
            const fs::path base = fs::path(f_out) / ids[i];
            save_field(r.field, s.ndim(), base.string() + ".fld");
            m.output(base.string() + ".fld");
            write_file_atomic(base.string() + ".report.txt", r.report.to_text());
            m.output(base.string() + ".report.txt");
            if (f_csv) {
                save_field_csv(r.field, s, base.string() + ".csv");
                m.output(base.string() + ".csv");
            }
            if (f_scale) {
                save_field(scale_of(s).t, s.ndim(), base.string() + "_t.fld");
                m.output(base.string() + "_t.fld");
            }
            if (!r.report.converged) m.partial.push_back(ids[i] + ".fld");
            out << ids[i] << ": " << to_string(r.report.converged_by) << ", residual " << num(r.report.final_residual)
                << "\n";
        }
        m.write();
        return m.partial.empty() ? exit_ok : exit_nonconvergence;
    }

    ComplexityProfile profile_input(const std::string& path, const std::string& id, const SolverFlags& solver,
                                    const EntropyFlags& entropy) {
        if (fs::path(path).extension() == ".csv") return load_profile_csv(path, id);
        const BinaryShape s = load_input(path);
        return complexity_profile(s, solver.config_for(s), entropy.options(), id);
    }

    static BinaryShape load_input(const std::string& path) {
        auto named = [&](const Error& e) {
            const std::string msg = e.what();
            return msg.find(path) == std::string::npos ? path + ": " + msg : msg;
        };
        try {
            return load_shape(path);
        } catch (const ParseError& e) {
            throw ParseError(named(e));
        } catch (const DataError& e) {
            throw DataError(named(e));
        }
    }

    int do_profile(const std::vector<std::string>& args, std::ostream& out) {
        Manifest m = manifest_for(prof, p_out, args);
        const auto ids = unique_ids(p_inputs);
        const Estimator est = parse_estimator(p_estimator);
        std::vector<ComplexityProfile> profiles;
        for (std::size_t i = 0; i < p_inputs.size(); ++i) {
            const BinaryShape s = load_input(p_inputs[i]);
            m.inputs.push_back(p_inputs[i]);
            auto p = complexity_profile(s, p_solver.config_for(s), p_entropy.options(), ids[i]);
            const fs::path csv = fs::path(p_out) / (ids[i] + ".csv");
            write_file_atomic(csv, profile_csv(p));
            m.output(csv);
            if (!p.report.converged) m.partial.push_back(csv.filename().string());
            out << csv.string() << "\n";
            profiles.push_back(std::move(p));
        }
        for (double t : p_at) {
            std::string text = "id,value\n";
            for (const auto& p : profiles) {
                std::ostringstream row;
                row.imbue(std::locale::classic());
                row.precision(12);
                row << p.shape_id << ',' << profile_at(p, t).value(est) << '\n';
                text += row.str();
            }
            const fs::path v = fs::path(p_out) / ("values_t" + num(t) + ".csv");
            write_file_atomic(v, text);
            m.output(v);
        }
        m.write();
        return m.partial.empty() ? exit_ok : exit_nonconvergence;
    }

    int do_compare(const std::vector<std::string>& args, std::ostream& out) {
        if (c_inputs.size() < 2) throw std::invalid_argument("compare: need >= 2 shapes");
        Manifest m = manifest_for(cmp, c_out, args);
        const auto ids = unique_ids(c_inputs);
        const Estimator est = parse_estimator(c_estimator);
        std::vector<ComplexityProfile> profiles;
        for (std::size_t i = 0; i < c_inputs.size(); ++i) {
            profiles.push_back(profile_input(c_inputs[i], ids[i], c_solver, c_entropy));
            m.inputs.push_back(c_inputs[i]);
            if (!profiles.back().report.converged) m.partial.push_back(ids[i]);
        }

        if (c_at) {
            const LinearOrder order = order_at_scale(profiles, *c_at, est, c_tolerance);
            const fs::path p = fs::path(c_out) / ("order_t" + num(*c_at) + ".csv");
            write_file_atomic(p, order_csv(order));
            m.output(p);
            out << order_text(order) << "\n";
            m.write();
            return m.partial.empty() ? exit_ok : exit_nonconvergence;
        }

        std::vector<std::pair<double, double>> intervals;
        for (const auto& s : c_intervals) intervals.push_back(parse_interval(s));
        std::vector<Indicator> all;
        IndicatorTable table;
        table.ids = ids;
        table.values.assign(ids.size(), {});
        for (const auto& [lo, hi] : intervals) {
            std::vector<Indicator> col;
            for (std::size_t i = 0; i < profiles.size(); ++i) {
                col.push_back(indicator(profiles[i], lo, hi, est));
                table.values[i].push_back(col.back().value);
            }
            table.columns.push_back(num(lo) + ":" + num(hi));
            const LinearOrder order = order_by_indicator(col, c_tolerance);
            const fs::path p = fs::path(c_out) / ("order_" + num(lo) + "_" + num(hi) + ".csv");
            write_file_atomic(p, order_csv(order));
            m.output(p);
            out << "(" << num(lo) << ", " << num(hi) << "]: " << order_text(order) << "\n";
            all.insert(all.end(), col.begin(), col.end());
        }
        const fs::path ind = fs::path(c_out) / "indicators.csv";
        write_file_atomic(ind, indicator_csv(all));
        m.output(ind);
        if (intervals.size() >= 2) {
            const PartialOrder po = partial_order(table, c_tolerance);
            const fs::path dot = fs::path(c_out) / "hasse.dot";
            emit_hasse(po, dot);
            m.output(dot);
            for (const auto& [a, b] : po.incomparable_pairs)
                out << "incomparable: " << po.classes[a].front() << " | " << po.classes[b].front() << "\n";
        }
        m.write();
        return m.partial.empty() ? exit_ok : exit_nonconvergence;
    }

    int do_tau(std::ostream& out) {
        std::vector<std::string> expected;
        {
            std::istringstream in(read_text(t_expected));
            for (std::string line; std::getline(in, line);) {
                if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
                if (auto t = trim(line); !t.empty()) expected.push_back(t);
            }
        }
        std::vector<std::pair<std::string, double>> observed;
        {
            std::istringstream in(read_text(t_observed));
            bool first = true;
            for (std::string line; std::getline(in, line); first = false) {
                if (trim(line).empty()) continue;
                const auto comma = line.find(',');
                if (comma == std::string::npos) throw ParseError(t_observed + ": expected 'id,value' rows");
                const std::string id = trim(line.substr(0, comma));
                const std::string v = trim(line.substr(comma + 1));
                if (first && id == "id") continue;
                observed.emplace_back(id, parse_double(v, t_observed));
            }
        }
        double t = modified_kendall_tau(expected, observed, t_tolerance);
        if (t == 0.0) t = 0.0;  // no "-0.0000"
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", t);
        out << buf << "\n";
        return exit_ok;
    }
};

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Environment process_environment() {
    Environment env;
    for (char** e = environ; e && *e; ++e) {
        const std::string_view kv(*e);
        if (!kv.starts_with("SQUAREC_")) continue;
        const auto eq = kv.find('=');
        if (eq == std::string_view::npos) continue;
        env.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
    }
    return env;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
    Cli cli;
    try {
        std::vector<std::string> full = cli.resolve(args, env);
        std::reverse(full.begin(), full.end());
        try {
            cli.app.parse(full);
        } catch (const CLI::ParseError& e) {
            const int code = cli.app.exit(e, out, err);
            return code == 0 ? exit_ok : exit_usage;
        }
        if (cli.gen->parsed()) return cli.do_generate(args, out);
        if (cli.dset->parsed()) return cli.do_dataset(args, out);
        if (cli.fld->parsed()) return cli.do_field(args, out);
        if (cli.prof->parsed()) return cli.do_profile(args, out);
        if (cli.cmp->parsed()) return cli.do_compare(args, out);
        if (cli.tau->parsed()) return cli.do_tau(out);
        err << "squarec: no subcommand\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "squarec: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        err << "squarec: " << e.what() << "\n";
        return exit_data;
    } catch (const fs::filesystem_error& e) {
        err << "squarec: " << e.what() << "\n";
        return exit_data;
    }
}

}  // namespace squarec::cli
