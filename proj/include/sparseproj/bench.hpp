#pragma once

// Solver-comparison benchmark. Every (n, sigma*, trial) cell draws its input
// from a counter-based generator keyed by (seed, n, sigma*, trial), so every
// solver sees the same vector and reruns reproduce the CSV exactly.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "sparseproj/rootfind.hpp"

namespace sparseproj::bench {

inline constexpr std::size_t kDefaultMaxDim = std::size_t{1} << 20;
inline constexpr std::size_t kHugeMaxDim = std::size_t{1} << 26;
inline constexpr std::string_view kCsvHeader = "n,sigma_star,solver,evals,seed,wall_ns";

struct BenchConfig {
    std::vector<std::size_t> n_list{1024};
    std::vector<double> sigma_list;  // empty means the default grid 0.200, 0.225, ..., 0.975
    int trials = 100;
    std::vector<SolverKind> solvers{std::begin(kAllSolvers), std::end(kAllSolvers)};
    std::uint64_t seed = 0;
    bool allow_huge = false;  // lift the n <= 2^20 limit up to 2^26
};

/// 0.200, 0.225, ..., 0.975.
std::vector<double> default_sigma_grid();

/// Throws Error(Range/Dimension/Size) for an invalid grid.
void validate(const BenchConfig& config);

struct BenchRecord {
    std::size_t n = 0;
    double sigma_star = 0.0;
    SolverKind solver = SolverKind::Bisection;
    int evals = 0;
    std::uint64_t seed = 0;  // trial key; regenerates the input with fill_uniform
    std::int64_t wall_ns = 0;
};

std::uint64_t trial_key(std::uint64_t seed, std::size_t n, double sigma_star, int trial) noexcept;

/// Entry i is a function of (key, i) only; values lie in the open interval (0, 1).
void fill_uniform(std::uint64_t key, std::span<double> out) noexcept;

/// Monotonic nanosecond clock; replaceable for deterministic tests.
using Clock = std::function<std::int64_t()>;
std::int64_t steady_now_ns();

using RecordSink = std::function<void(const BenchRecord&)>;

struct RunSummary {
    std::size_t records = 0;
    bool truncated = false;
    std::string truncation_reason;
};

/// Records are emitted in (n, sigma*, solver, trial) order. Allocation
/// failure stops the run and reports truncation instead of throwing.
RunSummary run_benchmark(const BenchConfig& config, const RecordSink& sink,
                         const Clock& clock = steady_now_ns);

void write_csv_preamble(std::ostream& out, const BenchConfig& config);
void write_csv_record(std::ostream& out, const BenchRecord& record);
void write_csv_truncation(std::ostream& out, const std::string& reason);

/// Convenience: preamble, all records, and a truncation marker if needed.
RunSummary run_benchmark_csv(const BenchConfig& config, std::ostream& out,
                             const Clock& clock = steady_now_ns);

struct CellKey {
    std::size_t n;
    double sigma_star;
    SolverKind solver;
    auto operator<=>(const CellKey&) const = default;
};

struct CellStats {
    int count = 0;
    double mean_evals = 0.0;
    double median_wall_ns = 0.0;
};

std::map<CellKey, CellStats> summarize(const std::vector<BenchRecord>& records);

}  // namespace sparseproj::bench
