#include "sparseproj/bench.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <new>
#include <ostream>

#include "sparseproj/core.hpp"
#include "sparseproj/project.hpp"

namespace sparseproj::bench {

namespace {

std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

}  // namespace

std::vector<double> default_sigma_grid() {
    std::vector<double> grid;
    // k / 40 is the double nearest to the decimal grid value.
    for (int k = 8; k <= 39; ++k) {
        grid.push_back(k / 40.0);
    }
    return grid;
}

void validate(const BenchConfig& config) {
    if (config.trials < 1) {
        throw Error(ErrorCode::Range, "trials must be at least 1");
    }
    if (config.n_list.empty() || config.solvers.empty()) {
        throw Error(ErrorCode::Range, "benchmark grid is empty");
    }
    const std::size_t limit = config.allow_huge ? kHugeMaxDim : kDefaultMaxDim;
    for (const std::size_t n : config.n_list) {
        if (n < 4) {
            throw Error(ErrorCode::Dimension, "benchmark dimensions must be at least 4");
        }
        if (n > limit) {
            throw Error(ErrorCode::Size, "dimension " + std::to_string(n) +
                                             " exceeds the limit " + std::to_string(limit));
        }
    }
    for (const double s : config.sigma_list) {
        if (!(s > 0.0 && s < 1.0)) {
            throw Error(ErrorCode::Range, "target sparseness must lie strictly inside (0, 1)");
        }
    }
}

std::uint64_t trial_key(std::uint64_t seed, std::size_t n, double sigma_star, int trial) noexcept {
    std::uint64_t k = mix64(seed);
    k = mix64(k ^ static_cast<std::uint64_t>(n));
    k = mix64(k ^ std::bit_cast<std::uint64_t>(sigma_star));
    k = mix64(k ^ static_cast<std::uint64_t>(trial));
    return k;
}

void fill_uniform(std::uint64_t key, std::span<double> out) noexcept {
    constexpr double kScale = 0x1.0p-53;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::uint64_t r = mix64(key + static_cast<std::uint64_t>(i));
        out[i] = (static_cast<double>(r >> 11) + 0.5) * kScale;
    }
}

std::int64_t steady_now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

RunSummary run_benchmark(const BenchConfig& config, const RecordSink& sink, const Clock& clock) {
    validate(config);
    const std::vector<double> sigmas =
        config.sigma_list.empty() ? default_sigma_grid() : config.sigma_list;

    RunSummary summary;
    std::vector<double> buffer;
    for (const std::size_t n : config.n_list) {
        try {
            buffer.resize(n);
        } catch (const std::bad_alloc&) {
            summary.truncated = true;
            summary.truncation_reason = "allocation failed at n=" + std::to_string(n);
            return summary;
        }
        for (const double sigma_star : sigmas) {
            const SparsenessTarget target = derive_norms(sigma_star, n);
            for (const SolverKind solver : config.solvers) {
                for (int trial = 0; trial < config.trials; ++trial) {
                    BenchRecord rec;
                    rec.n = n;
                    rec.sigma_star = sigma_star;
                    rec.solver = solver;
                    rec.seed = trial_key(config.seed, n, sigma_star, trial);
                    fill_uniform(rec.seed, buffer);
                    const std::int64_t start = clock();
                    const ProjectionInfo info = project_in_place(buffer, target, solver);
                    const std::int64_t stop = clock();
                    rec.evals = info.evals;
                    rec.wall_ns = std::max<std::int64_t>(1, stop - start);
                    sink(rec);
                    ++summary.records;
                }
            }
        }
    }
    return summary;
}

void write_csv_preamble(std::ostream& out, const BenchConfig& config) {
    out << "# distribution=uniform(0,1) generator=splitmix64-counter lambda2=1 trials="
        << config.trials << " base_seed=" << config.seed << '\n';
    out << kCsvHeader << '\n';
}

void write_csv_record(std::ostream& out, const BenchRecord& r) {
    out << r.n << ',' << format_double(r.sigma_star) << ',' << to_string(r.solver) << ','
        << r.evals << ',' << r.seed << ',' << r.wall_ns << '\n';
}

void write_csv_truncation(std::ostream& out, const std::string& reason) {
    out << "# truncated: " << reason << '\n';
}

RunSummary run_benchmark_csv(const BenchConfig& config, std::ostream& out, const Clock& clock) {
    write_csv_preamble(out, config);
    RunSummary summary =
        run_benchmark(config, [&](const BenchRecord& r) { write_csv_record(out, r); }, clock);
    if (summary.truncated) {
        write_csv_truncation(out, summary.truncation_reason);
    }
    return summary;
}

std::map<CellKey, CellStats> summarize(const std::vector<BenchRecord>& records) {
    std::map<CellKey, std::vector<const BenchRecord*>> groups;
    for (const BenchRecord& r : records) {
        groups[CellKey{r.n, r.sigma_star, r.solver}].push_back(&r);
    }
    std::map<CellKey, CellStats> out;
    for (auto& [key, group] : groups) {
        CellStats s;
        s.count = static_cast<int>(group.size());
        double total = 0.0;
        std::vector<double> walls;
        walls.reserve(group.size());
        for (const BenchRecord* r : group) {
            total += r->evals;
            walls.push_back(static_cast<double>(r->wall_ns));
        }
        s.mean_evals = total / s.count;
        std::sort(walls.begin(), walls.end());
        const std::size_t mid = walls.size() / 2;
        s.median_wall_ns = walls.size() % 2 ? walls[mid] : 0.5 * (walls[mid - 1] + walls[mid]);
        out.emplace(key, s);
    }
    return out;
}

}  // namespace sparseproj::bench
