#include "sparseproj/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sparseproj {

std::string_view to_string(SolverKind kind) noexcept {
    switch (kind) {
        case SolverKind::Bisection: return "bisection";
        case SolverKind::Newton: return "newton";
        case SolverKind::NewtonSqr: return "newtonsqr";
        case SolverKind::Halley: return "halley";
    }
    return "unknown";
}

std::optional<SolverKind> parse_solver(std::string_view name) noexcept {
    for (const SolverKind kind : kAllSolvers) {
        if (name == to_string(kind)) return kind;
    }
    return std::nullopt;
}

EntryExtremes scan_extremes(std::span<const double> x) noexcept {
    EntryExtremes ex;
    if (x.empty()) return ex;
    ex.max = x[0];
    ex.max_count = 0;
    for (const double v : x) {
        if (v > ex.max) {
            ex.second_max = ex.max;
            ex.max = v;
            ex.max_count = 1;
        } else if (v == ex.max) {
            ++ex.max_count;
        } else if (!ex.second_max || v > *ex.second_max) {
            ex.second_max = v;
        }
    }
    return ex;
}

namespace {

SolverState state_from(const EntryExtremes& ex) {
    if (!ex.second_max) {
        throw Error(ErrorCode::DegenerateInput,
                    "all entries are equal; the second-largest entry value is undefined");
    }
    SolverState s;
    s.lo = 0.0;
    s.up = *ex.second_max;
    s.alpha = s.lo + 0.5 * (s.up - s.lo);
    return s;
}

double midpoint(const SolverState& s) noexcept { return s.lo + 0.5 * (s.up - s.lo); }

}  // namespace

SolverState init_state(std::span<const double> x) { return state_from(scan_extremes(x)); }

double halley_factor(const AuxEvaluation& aux) noexcept {
    const double h = 1.0 - aux.psi * aux.psi_second / (2.0 * aux.psi_prime * aux.psi_prime);
    // NaN (from psi_prime == 0) ends up at the upper clamp.
    return std::max(0.5, std::min(1.5, h));
}

SolverState step(const SolverState& state, const AuxEvaluation& aux, SolverKind solver) noexcept {
    SolverState next = state;
    if (aux.psi >= 0.0) {
        next.lo = state.alpha;
    } else {
        next.up = state.alpha;
    }

    double alpha = 0.0;
    switch (solver) {
        case SolverKind::Bisection:
            next.alpha = midpoint(next);
            return next;
        case SolverKind::Newton:
            alpha = state.alpha - aux.psi / aux.psi_prime;
            break;
        case SolverKind::NewtonSqr:
            alpha = state.alpha - aux.psi_tilde / aux.psi_tilde_prime;
            break;
        case SolverKind::Halley:
            alpha = state.alpha - aux.psi / (halley_factor(aux) * aux.psi_prime);
            break;
    }
    // Also catches the NaN/inf produced by a vanishing derivative.
    if (!(alpha >= next.lo && alpha <= next.up)) {
        alpha = midpoint(next);
    }
    next.alpha = alpha;
    return next;
}

BracketResult find_bracket(std::span<const double> x, const SparsenessTarget& target,
                           SolverKind solver) {
    const EntryExtremes ex = scan_extremes(x);
    SolverState state = state_from(ex);

    // On [x_2nd-max, x_max) only the tied maxima survive and Psi equals
    // sqrt(count) - lambda1/lambda2. If that is not negative the zero is not
    // below x_2nd-max and the projection splits the tied maxima arbitrarily.
    if (ex.max_count >= 2 &&
        std::sqrt(static_cast<double>(ex.max_count)) * target.lambda2() >= target.lambda1()) {
        throw Error(ErrorCode::NonuniqueProjection,
                    "tied maximal entries make the projection nonunique");
    }

    AuxEvaluation aux = evaluate_aux(x, target, state.alpha);
    state.evals = 1;
    while (!aux.finished) {
        if (state.evals >= kEvaluationCap) {
            throw Error(ErrorCode::SolverFailure,
                        "root finding did not certify a bracket within " +
                            std::to_string(kEvaluationCap) + " evaluations");
        }
        const SolverKind kind = state.evals >= kForcedBisectionAfter ? SolverKind::Bisection : solver;
        state = step(state, aux, kind);
        aux = evaluate_aux(x, target, state.alpha);
        ++state.evals;
    }
    return BracketResult{aux, state.evals};
}

}  // namespace sparseproj
