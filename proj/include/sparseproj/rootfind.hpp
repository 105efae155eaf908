#pragma once

// Safeguarded root finding that locates the pair of neighbouring entry
// values bracketing the zero of the auxiliary function. Every derivative
// based step that leaves the current bracket [lo, up] is replaced by a
// bisection step.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "sparseproj/auxfn.hpp"
#include "sparseproj/core.hpp"

namespace sparseproj {

enum class SolverKind { Bisection, Newton, NewtonSqr, Halley };

inline constexpr SolverKind kAllSolvers[] = {SolverKind::Bisection, SolverKind::Newton,
                                             SolverKind::NewtonSqr, SolverKind::Halley};

std::string_view to_string(SolverKind kind) noexcept;
std::optional<SolverKind> parse_solver(std::string_view name) noexcept;

/// Total auxiliary evaluations allowed for one root-finding run.
inline constexpr int kEvaluationCap = 200;
/// Derivative solvers that have not finished after this many evaluations are
/// switched to plain bisection for the rest of the budget.
inline constexpr int kForcedBisectionAfter = kEvaluationCap / 2;

struct SolverState {
    double lo = 0.0;
    double up = 0.0;
    double alpha = 0.0;
    int evals = 0;
};

/// Largest value, its multiplicity, and the second-largest distinct value.
struct EntryExtremes {
    double max = 0.0;
    std::size_t max_count = 0;
    std::optional<double> second_max;
};

EntryExtremes scan_extremes(std::span<const double> x) noexcept;

/// lo = 0, up = second-largest distinct entry value, alpha = midpoint.
/// Throws Error(DegenerateInput) when x holds a single distinct value.
SolverState init_state(std::span<const double> x);

/// Clamped Halley factor h = 1 - Psi Psi'' / (2 Psi'^2), limited to [0.5, 1.5].
double halley_factor(const AuxEvaluation& aux) noexcept;

/// One iteration: shrink the bracket with the sign of Psi(alpha) (a zero
/// counts as positive), then propose the next iterate. `aux` must have been
/// evaluated at state.alpha. The evaluation counter is left untouched.
SolverState step(const SolverState& state, const AuxEvaluation& aux, SolverKind solver) noexcept;

struct BracketResult {
    AuxEvaluation aux;  // finished == true
    int evals = 0;      // evaluate_aux calls made here, the midpoint start included
};

/// Runs the solver from init_state until an evaluation certifies its bracket.
/// Requires Psi(0) > 0. Throws Error(NonuniqueProjection) when tied maxima
/// make the projection ambiguous, Error(SolverFailure) when the evaluation
/// cap is exhausted.
BracketResult find_bracket(std::span<const double> x, const SparsenessTarget& target,
                           SolverKind solver);

}  // namespace sparseproj
