#include "sparseproj/core.hpp"

#include <cmath>
#include <limits>

namespace sparseproj {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Domain: return "domain";
        case ErrorCode::Dimension: return "dimension";
        case ErrorCode::Range: return "range";
        case ErrorCode::InvalidTarget: return "invalid-target";
        case ErrorCode::NegativeEntry: return "negative-entry";
        case ErrorCode::DegenerateInput: return "degenerate-input";
        case ErrorCode::NonuniqueProjection: return "nonunique-projection";
        case ErrorCode::NumericDegeneracy: return "numeric-degeneracy";
        case ErrorCode::SolverFailure: return "solver-failure";
        case ErrorCode::DegenerateGradient: return "degenerate-gradient";
        case ErrorCode::Size: return "size";
        case ErrorCode::Inconsistency: return "inconsistency";
        case ErrorCode::MalformedInput: return "malformed-input";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

std::string_view to_string(InputStatus status) noexcept {
    switch (status) {
        case InputStatus::OkIncrease: return "ok-increase";
        case InputStatus::OkDecrease: return "ok-decrease";
        case InputStatus::AlreadyInD: return "already-in-D";
        case InputStatus::RejectNegative: return "reject-negative";
        case InputStatus::RejectZero: return "reject-zero";
        case InputStatus::RejectDimension: return "reject-dimension";
    }
    return "unknown";
}

SparsenessTarget SparsenessTarget::make(std::size_t n, double lambda1, double lambda2) {
    if (n < 2) {
        throw Error(ErrorCode::Dimension, "dimension must be at least 2");
    }
    const double root_n = std::sqrt(static_cast<double>(n));
    // Written so that NaN fails every comparison.
    if (!(lambda2 > 0.0 && lambda2 < lambda1 && lambda1 < root_n * lambda2) ||
        !std::isfinite(lambda1)) {
        throw Error(ErrorCode::InvalidTarget,
                    "target norms must satisfy 0 < lambda2 < lambda1 < sqrt(n) * lambda2");
    }
    return SparsenessTarget(n, lambda1, lambda2);
}

double SparsenessTarget::sigma_star() const noexcept {
    const double root_n = std::sqrt(static_cast<double>(n_));
    return (root_n - lambda1_ / lambda2_) / (root_n - 1.0);
}

Norms norms(std::span<const double> x) noexcept {
    Norms out;
    for (const double v : x) {
        out.l1 += v;
        out.l2_sq += v * v;
    }
    return out;
}

double sigma(std::span<const double> x) {
    if (x.size() < 2) {
        throw Error(ErrorCode::Dimension, "sparseness needs at least two entries");
    }
    double l1 = 0.0;
    double l2_sq = 0.0;
    for (const double v : x) {
        l1 += std::abs(v);
        l2_sq += v * v;
    }
    if (l1 == 0.0) {
        throw Error(ErrorCode::Domain, "sparseness of the zero vector is undefined");
    }
    if (!(l2_sq >= std::numeric_limits<double>::min()) || !std::isfinite(l2_sq)) {
        throw Error(ErrorCode::Domain, "squared L2 norm underflows or is not finite");
    }
    const double root_n = std::sqrt(static_cast<double>(x.size()));
    const double value = (root_n - l1 / std::sqrt(l2_sq)) / (root_n - 1.0);
    // Rounding can push the one-hot and uniform cases a hair outside [0, 1].
    if (value < 0.0) return 0.0;
    if (value > 1.0) return 1.0;
    return value;
}

SparsenessTarget derive_norms(double sigma_star, std::size_t n, double lambda2) {
    if (!(sigma_star > 0.0 && sigma_star < 1.0)) {
        throw Error(ErrorCode::Range, "target sparseness must lie strictly inside (0, 1)");
    }
    if (n < 2) {
        throw Error(ErrorCode::Dimension, "dimension must be at least 2");
    }
    const double root_n = std::sqrt(static_cast<double>(n));
    const double lambda1 = lambda2 * (root_n - sigma_star * (root_n - 1.0));
    return SparsenessTarget::make(n, lambda1, lambda2);
}

ValidationReport validate_input(std::span<const double> x, const SparsenessTarget& target) {
    ValidationReport report{InputStatus::RejectDimension};
    if (x.size() < 2 || x.size() != target.n()) {
        return report;
    }
    for (const double v : x) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            report.status = InputStatus::RejectNegative;
            return report;
        }
    }
    const Norms nm = norms(x);
    report.l1 = nm.l1;
    report.l2 = std::sqrt(nm.l2_sq);
    if (nm.l1 == 0.0 || !(nm.l2_sq >= std::numeric_limits<double>::min())) {
        report.status = InputStatus::RejectZero;
        return report;
    }
    report.sigma = sigma(x);
    const bool on_l1 = std::abs(report.l1 - target.lambda1()) <= kMembershipTolerance * target.lambda1();
    const bool on_l2 = std::abs(report.l2 - target.lambda2()) <= kMembershipTolerance * target.lambda2();
    if (on_l1 && on_l2) {
        report.status = InputStatus::AlreadyInD;
    } else if (report.sigma < target.sigma_star()) {
        report.status = InputStatus::OkIncrease;
    } else {
        report.status = InputStatus::OkDecrease;
    }
    return report;
}

}  // namespace sparseproj
