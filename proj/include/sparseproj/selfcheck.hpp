#pragma once

// Desk-scale release gate: runs the oracle, feasibility, solver-agreement and
// gradient property suites and reports per-suite counts.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sparseproj::selfcheck {

enum class Fault {
    None,
    FlipClosedFormSign,  // use the "+" root of the quadratic for alpha
};

struct Options {
    std::uint64_t seed = 20260101;
    int vectors_per_suite = 200;
    Fault fault = Fault::None;
};

struct SuiteResult {
    std::string name;
    int checks = 0;
    int failures = 0;
    std::string first_failure;

    bool passed() const noexcept { return failures == 0; }
};

std::vector<SuiteResult> run(const Options& options);

/// Fixed-width table, one row per suite.
void print_table(std::ostream& out, const std::vector<SuiteResult>& results);

}  // namespace sparseproj::selfcheck
