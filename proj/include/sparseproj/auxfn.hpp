#pragma once

// One-pass evaluation of the auxiliary function
//
//     Psi(alpha) = ||max(x - alpha, 0)||_1 / ||max(x - alpha, 0)||_2 - lambda1 / lambda2
//
// together with its first two derivatives, the squared-ratio variant
// Psi~ = l1^2 / l2^2 - lambda1^2 / lambda2^2 and its derivative, and the
// neighbouring entry values of alpha. Once the neighbours straddle the zero
// of Psi the evaluation reports `finished` and its accumulators determine
// the zero in closed form.

#include <cstddef>
#include <span>

#include "sparseproj/core.hpp"

namespace sparseproj {

struct AuxEvaluation {
    double alpha = 0.0;
    double psi = 0.0;
    double psi_prime = 0.0;
    double psi_second = 0.0;
    double psi_tilde = 0.0;
    double psi_tilde_prime = 0.0;
    bool finished = false;
    double ell1 = 0.0;        // sum of x_i over I = { i : x_i > alpha }
    double ell2_sq = 0.0;     // sum of x_i^2 over I
    std::size_t d = 0;        // |I|
    double bracket_lo = 0.0;  // largest positive entry <= alpha, or 0
    double bracket_hi = 0.0;  // smallest entry > alpha

    /// l1(xi) = ell1 - d xi, valid for xi in [bracket_lo, bracket_hi].
    double shifted_l1(double xi) const noexcept { return ell1 - static_cast<double>(d) * xi; }

    /// l2(xi)^2 = ell2_sq - 2 xi ell1 + d xi^2, valid for xi in [bracket_lo, bracket_hi].
    double shifted_l2_sq(double xi) const noexcept {
        return ell2_sq - 2.0 * xi * ell1 + static_cast<double>(d) * xi * xi;
    }
};

/// Requires 0 <= alpha < max(x); throws Error(Domain) otherwise, including the
/// case where rounding leaves l2(alpha)^2 non-positive. The caller guarantees
/// x >= 0; lambda1/lambda2 are taken as given.
AuxEvaluation evaluate_aux(std::span<const double> x, double lambda1, double lambda2, double alpha);

inline AuxEvaluation evaluate_aux(std::span<const double> x, const SparsenessTarget& target,
                                  double alpha) {
    return evaluate_aux(x, target.lambda1(), target.lambda2(), alpha);
}

}  // namespace sparseproj
