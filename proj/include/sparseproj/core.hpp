#pragma once

// Domain types shared by every part of the library: Hoyer's sparseness
// measure, the target norm pair that defines the constraint set, and the
// error type used throughout.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sparseproj {

enum class ErrorCode {
    Domain,             // value outside the mathematical domain (zero vector, alpha >= x_max, ...)
    Dimension,          // n < 2 or mismatched lengths
    Range,              // target sparseness outside (0, 1)
    InvalidTarget,      // lambda1/lambda2 do not satisfy lambda2 < lambda1 < sqrt(n) lambda2
    NegativeEntry,
    DegenerateInput,    // fewer than two distinct entry values
    NonuniqueProjection,
    NumericDegeneracy,
    SolverFailure,
    DegenerateGradient,
    Size,
    Inconsistency,
    MalformedInput,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Target norms of the set D = { s >= 0 : ||s||_1 = lambda1, ||s||_2 = lambda2 }
/// in dimension n. Construct through make() or derive_norms() to get a
/// validated value.
class SparsenessTarget {
public:
    /// Throws Error(InvalidTarget) unless 0 < lambda2 < lambda1 < sqrt(n) lambda2,
    /// Error(Dimension) when n < 2.
    static SparsenessTarget make(std::size_t n, double lambda1, double lambda2);

    std::size_t n() const noexcept { return n_; }
    double lambda1() const noexcept { return lambda1_; }
    double lambda2() const noexcept { return lambda2_; }

    /// The sparseness every point of D attains.
    double sigma_star() const noexcept;

private:
    SparsenessTarget(std::size_t n, double l1, double l2) : n_(n), lambda1_(l1), lambda2_(l2) {}

    std::size_t n_;
    double lambda1_;
    double lambda2_;
};

/// Hoyer's sparseness (sqrt(n) - ||x||_1/||x||_2) / (sqrt(n) - 1).
/// Throws Error(Dimension) for n < 2 and Error(Domain) for the zero vector or
/// when ||x||_2^2 underflows.
double sigma(std::span<const double> x);

/// lambda1 = lambda2 * (sqrt(n) - sigma_star * (sqrt(n) - 1)).
/// The open interval is enforced: sigma_star of exactly 0 or 1 is a range error.
SparsenessTarget derive_norms(double sigma_star, std::size_t n, double lambda2 = 1.0);

enum class InputStatus {
    OkIncrease,     // sigma(x) < sigma*
    OkDecrease,     // sigma(x) >= sigma*
    AlreadyInD,
    RejectNegative,
    RejectZero,
    RejectDimension,
};

std::string_view to_string(InputStatus status) noexcept;

struct ValidationReport {
    InputStatus status;
    double sigma = 0.0;      // sigma(x) when computable, else 0
    double l1 = 0.0;
    double l2 = 0.0;
};

/// Relative tolerance for the already-in-D classification.
inline constexpr double kMembershipTolerance = 1e-12;

/// Diagnostic classification of an input against a target; never throws.
ValidationReport validate_input(std::span<const double> x, const SparsenessTarget& target);

struct Norms {
    double l1 = 0.0;
    double l2_sq = 0.0;
};

/// Single pass; entries are used as given (no abs), the caller ensures x >= 0.
Norms norms(std::span<const double> x) noexcept;

}  // namespace sparseproj
