#pragma once

// Reference implementations used to verify the linear-time projection and
// its gradient. None of these share code with the root-finding path.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sparseproj/core.hpp"
#include "sparseproj/rootfind.hpp"

namespace sparseproj::oracle {

struct OracleReport {
    std::vector<double> p;
    double alpha = 0.0;
    std::vector<std::size_t> support;  // ascending indices
    double distance = 0.0;             // ||p - x||_2
    bool tie = false;                  // another point of D is equally close
    int candidates_visited = 0;
};

/// Sort-based projection: with x sorted descending the support is a prefix,
/// so each prefix length d = n, n-1, ..., 2 is tried in turn and the first
/// whose closed-form alpha separates the prefix from the rest is taken.
/// O(n log n) time, O(n) space. Throws Error(Inconsistency) if no prefix
/// qualifies.
OracleReport project_sorted(std::span<const double> x, const SparsenessTarget& target);

inline constexpr std::size_t kBruteForceMaxDim = 12;

/// Exhaustive minimiser over every support subset S with |S| >= 2. For each
/// S both stationary points of the distance on D restricted to S are formed
/// and kept if their entries on S are positive; the closest candidate wins.
/// Throws Error(Size) for n > 12.
OracleReport project_bruteforce(std::span<const double> x, const SparsenessTarget& target);

struct FdJacobian {
    Eigen::MatrixXd jacobian;
    std::vector<bool> unreliable;  // per column: support changed, or a one-sided quotient was used
};

/// Central difference quotient (project(x + h e_k) - project(x - h e_k)) / (2h)
/// column by column. Columns where x_k < h fall back to a forward quotient.
FdJacobian jacobian_fd(std::span<const double> x, const SparsenessTarget& target, double h,
                       SolverKind solver = SolverKind::NewtonSqr);

/// Entry-wise relative error max |A - N| / max(|A_ij|, floor), where the
/// floor is kRelativeErrorFloor * max|A| so that entries that are zero by
/// accident are compared on the scale of the matrix.
inline constexpr double kRelativeErrorFloor = 1e-3;
double max_relative_error(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& numeric);

}  // namespace sparseproj::oracle
