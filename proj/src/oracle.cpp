#include "sparseproj/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "sparseproj/project.hpp"

namespace sparseproj::oracle {

namespace {

void check_input(std::span<const double> x, const SparsenessTarget& target) {
    if (x.size() != target.n()) {
        throw Error(ErrorCode::Dimension, "input length does not match the target dimension");
    }
    if (std::any_of(x.begin(), x.end(), [](double v) { return !(v >= 0.0) || !std::isfinite(v); })) {
        throw Error(ErrorCode::NegativeEntry, "input entries must be finite and non-negative");
    }
    if (std::none_of(x.begin(), x.end(), [](double v) { return v > 0.0; })) {
        throw Error(ErrorCode::Domain, "cannot project the zero vector");
    }
}

double distance(std::span<const double> p, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = p[i] - x[i];
        s += t * t;
    }
    return std::sqrt(s);
}

std::vector<std::size_t> positive_support(std::span<const double> p) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) s.push_back(i);
    }
    return s;
}

}  // namespace

OracleReport project_sorted(std::span<const double> x, const SparsenessTarget& target) {
    check_input(x, target);
    const std::size_t n = x.size();
    const double l1 = target.lambda1();
    const double l2 = target.lambda2();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return x[i] > x[j]; });

    std::vector<double> s1(n + 1, 0.0);
    std::vector<double> s2(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double v = x[order[k]];
        s1[k + 1] = s1[k] + v;
        s2[k + 1] = s2[k] + v * v;
    }

    const double x_max = x[order[0]];
    OracleReport report;

    auto try_prefixes = [&](double slack) -> bool {
        report.candidates_visited = 0;
        for (std::size_t d = n; d >= 2; --d) {
            ++report.candidates_visited;
            const double dd = static_cast<double>(d);
            const double a = dd * s2[d] - s1[d] * s1[d];
            const double b = dd * l2 * l2 - l1 * l1;
            if (!(a > 0.0) || !(b > 0.0)) continue;
            const double beta = std::sqrt(a / b);
            const double alpha = (s1[d] - l1 * beta) / dd;
            const double last_in = x[order[d - 1]];
            const double first_out = d < n ? x[order[d]] : -std::numeric_limits<double>::infinity();
            if (last_in > alpha - slack && alpha >= first_out - slack) {
                // Recompute from centred moments once the prefix is accepted.
                const double mean = s1[d] / dd;
                double c = 0.0;
                double q = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    const double t = x[order[k]] - mean;
                    c += t;
                    q += t * t;
                }
                const double ac = dd * q - c * c;
                const double beta_c = ac > 0.0 ? std::sqrt(ac / b) : beta;
                const double alpha_c = ac > 0.0 ? (dd * mean + c - l1 * beta_c) / dd : alpha;
                report.alpha = alpha_c;
                report.p.assign(n, 0.0);
                for (std::size_t k = 0; k < d; ++k) {
                    const std::size_t i = order[k];
                    report.p[i] = std::max((x[i] - alpha_c) / beta_c, 0.0);
                }
                return true;
            }
        }
        return false;
    };

    if (!try_prefixes(0.0) && !try_prefixes(1e-12 * x_max)) {
        throw Error(ErrorCode::Inconsistency, "no prefix of the sorted input yields a valid support");
    }
    report.support = positive_support(report.p);
    report.distance = distance(report.p, x);
    return report;
}

OracleReport project_bruteforce(std::span<const double> x, const SparsenessTarget& target) {
    if (x.size() > kBruteForceMaxDim) {
        throw Error(ErrorCode::Size, "exhaustive enumeration is limited to n <= 12");
    }
    check_input(x, target);
    const std::size_t n = x.size();
    const double l1 = target.lambda1();
    const double l2 = target.lambda2();
    constexpr double kPositivitySlack = 1e-12;

    struct Candidate {
        std::vector<double> p;
        double alpha = 0.0;
        double dist_sq = std::numeric_limits<double>::infinity();
        bool degenerate = false;  // x constant on S: every point of D on S is equally close
    };
    Candidate best;
    Candidate runner_up;
    std::vector<double> p(n);
    int visited = 0;

    auto offer = [&](Candidate&& c) {
        if (c.dist_sq < best.dist_sq) {
            runner_up = std::move(best);
            best = std::move(c);
        } else if (c.dist_sq < runner_up.dist_sq) {
            runner_up = std::move(c);
        }
    };

    const std::uint32_t full = (std::uint32_t{1} << n);
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        const int m = std::popcount(mask);
        if (m < 2) continue;
        ++visited;
        const double mm = static_cast<double>(m);
        const double b = mm * l2 * l2 - l1 * l1;
        if (!(b > 0.0)) continue;

        double s1 = 0.0;
        double s2 = 0.0;
        double off_sq = 0.0;
        double first = -1.0;
        bool constant = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint32_t{1} << i)) {
                s1 += x[i];
                s2 += x[i] * x[i];
                if (first < 0.0) first = x[i];
                constant = constant && x[i] == first;
            } else {
                off_sq += x[i] * x[i];
            }
        }

        if (constant) {
            // Distance is the same for all of D on S; build one representative
            // with a single large entry and the rest equal.
            const double c = first;
            const double u = (l1 + std::sqrt((mm - 1.0) * b)) / mm;
            const double v = (l1 - u) / (mm - 1.0);
            Candidate cand;
            cand.p.assign(n, 0.0);
            bool placed = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (std::uint32_t{1} << i)) {
                    cand.p[i] = placed ? v : u;
                    placed = true;
                }
            }
            cand.alpha = c;
            cand.dist_sq = off_sq + l2 * l2 - 2.0 * c * l1 + mm * c * c;
            cand.degenerate = true;
            offer(std::move(cand));
            continue;
        }

        const double mean = s1 / mm;
        double c = 0.0;
        double q = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint32_t{1} << i)) {
                const double t = x[i] - mean;
                c += t;
                q += t * t;
            }
        }
        const double a = mm * q - c * c;
        s1 = mm * mean + c;
        if (!(a > 0.0)) continue;
        for (const double sign : {1.0, -1.0}) {
            const double beta = sign * std::sqrt(a / b);
            const double alpha = (s1 - l1 * beta) / mm;
            bool feasible = true;
            double dist_sq = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (std::uint32_t{1} << i)) {
                    const double v = (x[i] - alpha) / beta;
                    if (v < -kPositivitySlack * l2) {
                        feasible = false;
                        break;
                    }
                    p[i] = std::max(v, 0.0);
                } else {
                    p[i] = 0.0;
                }
                const double t = p[i] - x[i];
                dist_sq += t * t;
            }
            if (!feasible) continue;
            offer(Candidate{p, alpha, dist_sq, false});
        }
    }

    if (best.p.empty()) {
        throw Error(ErrorCode::Inconsistency, "no support subset produced a point of D");
    }

    OracleReport report;
    report.tie = best.degenerate;
    if (!runner_up.p.empty() &&
        std::abs(runner_up.dist_sq - best.dist_sq) <= 1e-10 * std::max(1.0, best.dist_sq)) {
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diff = std::max(diff, std::abs(runner_up.p[i] - best.p[i]));
        }
        report.tie = report.tie || diff > 1e-9 * l2;
    }
    report.p = std::move(best.p);
    report.alpha = best.alpha;
    report.support = positive_support(report.p);
    report.distance = std::sqrt(std::max(best.dist_sq, 0.0));
    report.candidates_visited = visited;
    return report;
}

FdJacobian jacobian_fd(std::span<const double> x, const SparsenessTarget& target, double h,
                       SolverKind solver) {
    const std::size_t n = x.size();
    const auto ni = static_cast<Eigen::Index>(n);
    FdJacobian out{Eigen::MatrixXd::Zero(ni, ni), std::vector<bool>(n, false)};

    const ProjectionResult center = project(x, target, solver);
    std::vector<double> xp(x.begin(), x.end());
    std::vector<double> xm(x.begin(), x.end());
    for (std::size_t k = 0; k < n; ++k) {
        xp[k] = x[k] + h;
        const ProjectionResult plus = project(xp, target, solver);
        ProjectionResult minus;
        double width = 2.0 * h;
        if (x[k] >= h) {
            xm[k] = x[k] - h;
            minus = project(xm, target, solver);
            xm[k] = x[k];
        } else {
            minus = center;
            width = h;
            out.unreliable[k] = true;
        }
        xp[k] = x[k];
        if (plus.support != minus.support || plus.support != center.support) {
            out.unreliable[k] = true;
        }
        for (std::size_t i = 0; i < n; ++i) {
            out.jacobian(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                (plus.p[i] - minus.p[i]) / width;
        }
    }
    return out;
}

double max_relative_error(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& numeric) {
    if (analytic.rows() != numeric.rows() || analytic.cols() != numeric.cols()) {
        throw Error(ErrorCode::Dimension, "matrices differ in shape");
    }
    const double floor = kRelativeErrorFloor * analytic.cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
        for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
            const double diff = std::abs(analytic(i, j) - numeric(i, j));
            if (diff == 0.0) continue;
            worst = std::max(worst, diff / std::max(std::abs(analytic(i, j)), floor));
        }
    }
    return worst;
}

}  // namespace sparseproj::oracle
