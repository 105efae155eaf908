#pragma once

// Derivative of the projection. On the support I (d = |I|) the Jacobian is
//
//     G = sqrt(b/a) E_d - (lambda2^2 e e^T + d p p^T - lambda1 (e p^T + p e^T)) / sqrt(a b)
//
// with p the sliced projection, and it vanishes outside I. grad_vec applies
// it in O(n) without forming the matrix.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sparseproj/project.hpp"

namespace sparseproj {

struct GradientFactors {
    std::size_t n = 0;
    std::vector<std::size_t> support;
    std::vector<double> p_tilde;  // p restricted to support, same order
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double a = 0.0;
    double b = 0.0;
    /// Some x_i lies within the tolerance of alpha*, where the projection is
    /// not differentiable. The formulas still evaluate.
    bool boundary_unreliable = false;
};

/// Default band for boundary_unreliable, relative to max(x).
inline constexpr double kBoundaryTolerance = 1e-9;

/// Captures the factors of a finished projection. The band is
/// `relative_tolerance * result.x_max`.
GradientFactors make_gradient_factors(const ProjectionResult& result,
                                      const SparsenessTarget& target,
                                      double relative_tolerance = kBoundaryTolerance);

/// z = J y. Throws Error(DegenerateGradient) if a or b is not positive and
/// Error(Dimension) if y.size() != factors.n.
std::vector<double> grad_vec(const GradientFactors& factors, std::span<const double> y);

/// Dense n x n Jacobian, symmetric by construction. Meant for small n.
Eigen::MatrixXd grad_matrix(const GradientFactors& factors);

}  // namespace sparseproj
