#pragma once

// Euclidean projection onto D = { s >= 0 : ||s||_1 = lambda1, ||s||_2 = lambda2 }.
//
// The projection is a normalised soft shrinkage
//
//     p = lambda2 * max(x - alpha* e, 0) / ||max(x - alpha* e, 0)||_2
//
// where alpha* is the zero of the auxiliary function. Root finding only has to
// locate the pair of neighbouring entries around alpha*; the accumulators of
// that evaluation give alpha* in closed form. Runs in O(n) time with O(1)
// additional space when used in place.

#include <cstddef>
#include <span>
#include <vector>

#include "sparseproj/core.hpp"
#include "sparseproj/rootfind.hpp"

namespace sparseproj {

struct ClosedForm {
    double alpha = 0.0;
    double beta = 0.0;
    double a = 0.0;  // d * ell2_sq - ell1^2
    double b = 0.0;  // d * lambda2^2 - lambda1^2
};

/// alpha = (ell1 - lambda1 sqrt(a / b)) / d and beta = sqrt(a / b) for the
/// support summarised by (ell1, ell2_sq, d). Throws Error(NumericDegeneracy)
/// for d < 2 or when a or b is not positive.
ClosedForm closed_form_alpha(double ell1, double ell2_sq, std::size_t d, double lambda1,
                             double lambda2);

/// The same closed form over the support { i : x_i > threshold } of size d,
/// with a accumulated from entries centred on their mean. This keeps a and
/// alpha accurate when the support entries nearly coincide.
ClosedForm closed_form_centered(std::span<const double> x, double threshold, std::size_t d,
                                double lambda1, double lambda2);

enum class Branch {
    Increase,  // sigma(x) < sigma*; root finding located the support
    Decrease,  // sigma(x) >= sigma*; the support is all of {0, ..., n-1}
};

struct ProjectionInfo {
    double alpha = 0.0;
    double beta = 0.0;
    double a = 0.0;
    double b = 0.0;
    std::size_t d = 0;
    int evals = 0;  // evaluate_aux calls, the alpha = 0 screening call included
    Branch branch = Branch::Increase;
};

/// Overwrites x with its projection.
/// Errors: Dimension (x.size() != target.n()), NegativeEntry, Domain (zero
/// vector), NonuniqueProjection (all entries equal, or tied maxima that the
/// target cannot separate), SolverFailure.
ProjectionInfo project_in_place(std::span<double> x, const SparsenessTarget& target,
                                SolverKind solver = SolverKind::NewtonSqr);

struct ProjectionResult {
    std::vector<double> p;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<std::size_t> support;  // ascending indices with p_i > 0
    double a = 0.0;
    double b = 0.0;
    int evals = 0;
    Branch branch = Branch::Increase;
    double min_gap = 0.0;  // min_i |x_i - alpha|
    double x_max = 0.0;
};

/// Copying wrapper around project_in_place.
ProjectionResult project(std::span<const double> x, const SparsenessTarget& target,
                         SolverKind solver = SolverKind::NewtonSqr);

}  // namespace sparseproj
