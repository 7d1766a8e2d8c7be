#pragma once

#include <squarec/grid.hpp>
#include <squarec/transform.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace squarec {

enum class SolveMode { explicit_scheme, system, hybrid };

/// Linear solver behind each system-scheme step. `automatic` factorises directly up to
/// `direct_limit` unknowns and switches to preconditioned BiCGSTAB above it.
enum class LinearSolver { automatic, direct, iterative };

/// How the two explicit-scheme conditions combine: residual below eps1 and residual
/// change below eps2 (`both`), or either one alone (`either`).
enum class StopRule { both, either };

struct SolverConfig {
    double rho = 1.0;    ///< screening radius in pixels
    double eps1 = 1e-6;  ///< explicit scheme: max |residual|
    double eps2 = 1e-10; ///< explicit scheme: max |residual change| between steps
    double eps3 = 1e-6;  ///< system scheme: max |residual change| between outer iterations
    double dk = 1.0 / 3.0;
    long max_iters = 2'000'000;  ///< explicit steps
    int max_outer = 200;         ///< linear solves in the system scheme
    /// System residual counts as zero when max |r| <= zero_tol * max(1, max f).
    double zero_tol = 1e-10;
    SolveMode mode = SolveMode::hybrid;
    StopRule stop_rule = StopRule::both;
    LinearSolver linear = LinearSolver::automatic;
    std::size_t direct_limit = 60'000;
    double linear_tol = 1e-14;  ///< relative residual target of the iterative solver

    /// rho = rho_max of the Chebyshev DT, eps1 = eps3 = N*1e-6, eps2 = N*1e-10 with N the
    /// cell count, dk = 1 / (2 + 1/rho^2).
    static SolverConfig defaults_for(const BinaryShape& shape);

    double screening() const { return 2.0 + 1.0 / (rho * rho); }
    /// Throws std::invalid_argument if any invariant fails.
    void validate() const;
};

enum class Phase { system, explicit_scheme };

enum class StopReason {
    zero_residual,  ///< system: frozen neighbour choices reproduce the nonlinear equation
    system_stall,   ///< system: residual change below eps3
    explicit_converged,
    max_iters,
    singular,
};

struct SolveReport {
    long iterations = 0;   ///< explicit steps
    int outer_iterations = 0;  ///< system solves
    double final_residual = 0.0;
    std::vector<Phase> mode_trace;
    std::vector<double> outer_residuals;  ///< max |r| after each system solve
    StopReason converged_by = StopReason::max_iters;
    bool converged = false;

    /// Line-oriented key=value text.
    std::string to_text() const;
};

struct FieldResult {
    ScalarField field;
    SolveReport report;
};

/// rho_max of the Chebyshev distance transform.
double estimate_rho(const BinaryShape& shape);

/// Residual of the discretised screened equation at every shape cell (zero outside).
ScalarField residual(const ScalarField& f, const BinaryShape& shape, const SolverConfig& cfg);

/// Explicit scheme f <- f + dk * r(f) from zero or a warm start; unnormalised.
FieldResult solve_explicit(const BinaryShape& shape, const SolverConfig& cfg,
                           const std::optional<ScalarField>& warm_start = std::nullopt);

/// Frozen-extrema linear systems: pick each cell's largest and smallest neighbour from
/// `guess`, solve the resulting sparse system, re-pick from the solution, repeat.
/// Unnormalised.
FieldResult solve_system(const BinaryShape& shape, const SolverConfig& cfg, const ScalarField& guess);

/// The field f_S normalised to [0, 1] using the configured mode. Hybrid runs the system
/// scheme guided by t and, unless it reached a zero residual, continues with the
/// explicit scheme from the system solution.
FieldResult solve_field(const BinaryShape& shape, const SolverConfig& cfg);
FieldResult solve_field(const BinaryShape& shape);

/// Unnormalised solve_field (same phases, no final division).
FieldResult solve_field_raw(const BinaryShape& shape, const SolverConfig& cfg);

const char* to_string(SolveMode m);
const char* to_string(LinearSolver s);
const char* to_string(StopReason r);

}  // namespace squarec
