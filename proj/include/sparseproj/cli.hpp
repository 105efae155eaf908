#pragma once

// Command-line front end. Subcommands: project, sigma, gradvec, bench, selfcheck.

#include <iosfwd>
#include <string>
#include <vector>

#include "sparseproj/core.hpp"
#include "sparseproj/gradient.hpp"

namespace sparseproj::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kMalformedInput = 2,
    kRejectZero = 3,
    kRejectNegative = 4,
    kRejectDimension = 5,
    kInvalidTarget = 6,
    kNonunique = 7,
    kSolverFailure = 8,
    kDegenerateGradient = 9,
    kIoError = 10,
    kSelfcheckFailed = 11,
    kInternal = 12,
};

int exit_code_for(ErrorCode code) noexcept;

/// Factor artifact written by `project --emit-factors` and read by `gradvec`.
/// JSON document; doubles are written with round-trip precision.
std::string factors_to_json(const GradientFactors& f, double alpha, double beta);
/// Throws Error(MalformedInput) on a missing or ill-typed field.
GradientFactors factors_from_json(const std::string& text);

/// Runs the CLI with `args` excluding the program name. "-" paths refer to
/// `in` / `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace sparseproj::cli
