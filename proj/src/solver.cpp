#include <squarec/error.hpp>
#include <squarec/kernels.hpp>
#include <squarec/solver.hpp>

#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace squarec {

namespace {

using kernels::Stencil;

constexpr int kMaxHalvings = 12;

double field_max(const ScalarField& f) {
    return f.values.empty() ? 0.0 : *std::max_element(f.values.begin(), f.values.end());
}

bool explicit_stop(const SolverConfig& cfg, double max_r, double max_change) {
    const bool small = max_r <= cfg.eps1;
    const bool settled = max_change <= cfg.eps2;
    return cfg.stop_rule == StopRule::both ? (small && settled) : (small || settled);
}

FieldResult run_explicit(const BinaryShape& shape, const Stencil& st, const SolverConfig& cfg, ScalarField f) {
    const double c = cfg.screening();
    ScalarField next = f;
    std::vector<double> r_prev(st.size(), 0.0);
    FieldResult out;
    out.report.mode_trace.push_back(Phase::explicit_scheme);

    for (long it = 0;; ++it) {
        const auto stats = kernels::explicit_step_parallel(st, f.values, next.values, r_prev, c, cfg.dk);
        // Before the first step there is no previous residual; use the bound
        // |r(f + dk r) - r(f)| <= (2 + c) dk max|r| instead.
        const double change = it == 0 ? (2.0 + c) * cfg.dk * stats.max_residual : stats.max_change;
        if (explicit_stop(cfg, stats.max_residual, change)) {
            out.report.iterations = it;
            out.report.final_residual = stats.max_residual;
            out.report.converged = true;
            out.report.converged_by = StopReason::explicit_converged;
            break;
        }
        std::swap(f, next);
        if (it + 1 >= cfg.max_iters) {
            out.report.iterations = it + 1;
            std::vector<double> r(st.size());
            out.report.final_residual = kernels::residual_parallel(st, f.values, c, r).max_residual;
            out.report.converged = false;
            out.report.converged_by = StopReason::max_iters;
            break;
        }
    }
    (void)shape;
    out.field = std::move(f);
    return out;
}

struct SystemOutcome {
    ScalarField field;
    SolveReport report;
};

SystemOutcome run_system(const BinaryShape& shape, const Stencil& st, const SolverConfig& cfg,
                         const ScalarField& guess) {
    const double c = cfg.screening();
    const Dims& d = shape.dims();
    const auto n = static_cast<Eigen::Index>(st.size());

    std::vector<int> unknown(d.cells(), -1);
    for (std::size_t i = 0; i < st.size(); ++i) unknown[st.cells[i]] = static_cast<int>(i);

    std::vector<int> argmax(st.size()), argmin(st.size());
    kernels::select_extrema_parallel(st, guess.values, argmax, argmin);

    SystemOutcome out;
    out.report.mode_trace.push_back(Phase::system);
    ScalarField f(d);
    std::vector<double> r(st.size()), r_prev(st.size());
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(3 * st.size());
    const bool direct = cfg.linear == LinearSolver::direct ||
                        (cfg.linear == LinearSolver::automatic && st.size() <= cfg.direct_limit);
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double, Eigen::RowMajor>, Eigen::IncompleteLUT<double>> iter;
    iter.setTolerance(cfg.linear_tol);
    iter.setMaxIterations(20'000);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < st.size(); ++i) x[static_cast<Eigen::Index>(i)] = guess[st.cells[i]];

    ScalarField accepted(d), trial(d);
    double accepted_r = 0.0;
    for (int outer = 1;; ++outer) {
        triplets.clear();
        for (std::size_t i = 0; i < st.size(); ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            triplets.emplace_back(row, row, c);
            for (int slot : {argmax[i], argmin[i]}) {
                const int col = unknown[st.cells[i] + st.offsets[slot]];
                if (col >= 0) triplets.emplace_back(row, col, -1.0);
            }
        }
        bool ok = false;
        if (direct) {
            Eigen::SparseMatrix<double> a(n, n);
            a.setFromTriplets(triplets.begin(), triplets.end());
            a.makeCompressed();
            lu.compute(a);
            if (lu.info() == Eigen::Success) {
                x = lu.solve(rhs);
                ok = lu.info() == Eigen::Success;
            }
        } else {
            Eigen::SparseMatrix<double, Eigen::RowMajor> a(n, n);
            a.setFromTriplets(triplets.begin(), triplets.end());
            a.makeCompressed();
            iter.compute(a);
            if (iter.info() == Eigen::Success) {
                // Warm start from the previous solution; the policy changes little between steps.
                x = iter.solveWithGuess(rhs, x);
                ok = iter.info() == Eigen::Success;
            }
        }
        out.report.outer_iterations = outer;
        if (!ok || !x.allFinite()) {
            out.report.converged_by = StopReason::singular;
            out.report.converged = false;
            if (outer == 1) out.field = ScalarField(d);
            return out;
        }
        for (std::size_t i = 0; i < st.size(); ++i) f[st.cells[i]] = x[static_cast<Eigen::Index>(i)];

        // Each solve is a semismooth Newton step for the nonlinear equation. After the
        // first one, backtrack towards the accepted field until max |r| decreases.
        double max_r = kernels::residual_parallel(st, f.values, c, r).max_residual;
        if (outer > 1 && max_r >= accepted_r) {
            double lambda = 1.0;
            for (int h = 0; h < kMaxHalvings && max_r >= accepted_r; ++h) {
                lambda *= 0.5;
                for (std::size_t i = 0; i < st.size(); ++i) {
                    const std::size_t cell = st.cells[i];
                    trial[cell] = accepted[cell] + lambda * (x[static_cast<Eigen::Index>(i)] - accepted[cell]);
                }
                max_r = kernels::residual_parallel(st, trial.values, c, r).max_residual;
            }
            f = trial;
        }
        accepted = f;
        accepted_r = max_r;
        out.field = f;
        out.report.final_residual = max_r;
        out.report.outer_residuals.push_back(max_r);

        double max_change = 0.0;
        for (std::size_t i = 0; i < st.size(); ++i) max_change = std::max(max_change, std::abs(r[i] - r_prev[i]));
        if (max_r <= cfg.zero_tol * std::max(1.0, field_max(f))) {
            out.report.converged = true;
            out.report.converged_by = StopReason::zero_residual;
            return out;
        }
        if (outer > 1 && max_change <= cfg.eps3) {
            out.report.converged = true;
            out.report.converged_by = StopReason::system_stall;
            return out;
        }
        if (outer >= cfg.max_outer) {
            out.report.converged = false;
            out.report.converged_by = StopReason::max_iters;
            return out;
        }
        std::swap(r, r_prev);
        kernels::select_extrema_parallel(st, f.values, argmax, argmin);
    }
}

void merge_into(SolveReport& total, const SolveReport& part) {
    total.iterations += part.iterations;
    total.outer_iterations += part.outer_iterations;
    total.final_residual = part.final_residual;
    total.mode_trace.insert(total.mode_trace.end(), part.mode_trace.begin(), part.mode_trace.end());
    total.outer_residuals.insert(total.outer_residuals.end(), part.outer_residuals.begin(), part.outer_residuals.end());
    total.converged_by = part.converged_by;
    total.converged = part.converged;
}

}  // namespace

SolverConfig SolverConfig::defaults_for(const BinaryShape& shape) {
    SolverConfig cfg;
    cfg.rho = estimate_rho(shape);
    const auto n = static_cast<double>(shape.count());
    cfg.eps1 = n * 1e-6;
    cfg.eps2 = n * 1e-10;
    cfg.eps3 = n * 1e-6;
    cfg.dk = 1.0 / cfg.screening();
    return cfg;
}

void SolverConfig::validate() const {
    if (!(rho > 0.0)) throw std::invalid_argument("solver: rho must be positive");
    if (!(dk > 0.0) || dk > 1.0 / screening() * (1.0 + 1e-12))
        throw std::invalid_argument("solver: dk must lie in (0, 1/(2 + 1/rho^2)]");
    if (!(eps2 > 0.0) || !(eps1 > eps2)) throw std::invalid_argument("solver: need eps1 > eps2 > 0");
    if (!(eps3 > 0.0)) throw std::invalid_argument("solver: eps3 must be positive");
    if (max_iters < 1 || max_outer < 1) throw std::invalid_argument("solver: iteration caps must be >= 1");
    if (!(zero_tol >= 0.0)) throw std::invalid_argument("solver: zero_tol must be >= 0");
}

std::string SolveReport::to_text() const {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(12);
    out << "iterations=" << iterations << '\n';
    out << "outer_iterations=" << outer_iterations << '\n';
    out << "final_residual=" << final_residual << '\n';
    out << "mode_trace=";
    for (std::size_t i = 0; i < mode_trace.size(); ++i)
        out << (i ? "," : "") << (mode_trace[i] == Phase::system ? "system" : "explicit");
    out << '\n';
    out << "converged_by=" << to_string(converged_by) << '\n';
    out << "converged=" << (converged ? "true" : "false") << '\n';
    return out.str();
}

double estimate_rho(const BinaryShape& shape) { return static_cast<double>(scale_of(shape).rho_max); }

ScalarField residual(const ScalarField& f, const BinaryShape& shape, const SolverConfig& cfg) {
    if (!(f.dims == shape.dims())) throw std::invalid_argument("residual: field and shape dims differ");
    const auto st = Stencil::of(shape);
    std::vector<double> r(st.size());
    kernels::residual_parallel(st, f.values, cfg.screening(), r);
    ScalarField out(shape.dims());
    for (std::size_t i = 0; i < st.size(); ++i) out[st.cells[i]] = r[i];
    return out;
}

FieldResult solve_explicit(const BinaryShape& shape, const SolverConfig& cfg,
                           const std::optional<ScalarField>& warm_start) {
    cfg.validate();
    ScalarField f(shape.dims());
    if (warm_start) {
        if (!(warm_start->dims == shape.dims())) throw std::invalid_argument("warm start dims differ from shape");
        for (std::size_t i = 0; i < f.values.size(); ++i) f[i] = shape.occupied(i) ? (*warm_start)[i] : 0.0;
    }
    return run_explicit(shape, Stencil::of(shape), cfg, std::move(f));
}

FieldResult solve_system(const BinaryShape& shape, const SolverConfig& cfg, const ScalarField& guess) {
    cfg.validate();
    if (!(guess.dims == shape.dims())) throw std::invalid_argument("guess dims differ from shape");
    ScalarField g(shape.dims());
    for (std::size_t i = 0; i < g.values.size(); ++i) g[i] = shape.occupied(i) ? guess[i] : 0.0;
    auto res = run_system(shape, Stencil::of(shape), cfg, g);
    return {std::move(res.field), res.report};
}

FieldResult solve_field_raw(const BinaryShape& shape, const SolverConfig& cfg) {
    cfg.validate();
    const auto st = Stencil::of(shape);
    if (cfg.mode == SolveMode::explicit_scheme) return run_explicit(shape, st, cfg, ScalarField(shape.dims()));

    const Scale scale = scale_of(shape);
    auto sys = run_system(shape, st, cfg, scale.t);
    FieldResult out{std::move(sys.field), sys.report};
    if (cfg.mode == SolveMode::system) return out;
    if (out.report.converged_by == StopReason::zero_residual) return out;

    // Stall, cap, or singular system: hand the current solution to the explicit scheme.
    auto tail = run_explicit(shape, st, cfg, std::move(out.field));
    merge_into(out.report, tail.report);
    out.field = std::move(tail.field);
    return out;
}

FieldResult solve_field(const BinaryShape& shape, const SolverConfig& cfg) {
    auto res = solve_field_raw(shape, cfg);
    const double mx = field_max(res.field);
    if (!(mx > 0.0)) throw DataError("solver produced a non-positive field");
    for (double& v : res.field.values) v /= mx;
    return res;
}

FieldResult solve_field(const BinaryShape& shape) { return solve_field(shape, SolverConfig::defaults_for(shape)); }

const char* to_string(SolveMode m) {
    switch (m) {
        case SolveMode::explicit_scheme: return "explicit";
        case SolveMode::system: return "system";
        case SolveMode::hybrid: return "hybrid";
    }
    return "?";
}

const char* to_string(LinearSolver s) {
    switch (s) {
        case LinearSolver::automatic: return "auto";
        case LinearSolver::direct: return "direct";
        case LinearSolver::iterative: return "iterative";
    }
    return "?";
}

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::zero_residual: return "zero_residual";
        case StopReason::system_stall: return "system_stall";
        case StopReason::explicit_converged: return "explicit_converged";
        case StopReason::max_iters: return "max_iters";
        case StopReason::singular: return "singular";
    }
    return "?";
}

}  // namespace squarec
