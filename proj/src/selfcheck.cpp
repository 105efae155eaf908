#include "sparseproj/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "sparseproj/bench.hpp"
#include "sparseproj/core.hpp"
#include "sparseproj/gradient.hpp"
#include "sparseproj/oracle.hpp"
#include "sparseproj/project.hpp"

namespace sparseproj::selfcheck {

namespace {

using Projector =
    std::function<ProjectionResult(std::span<const double>, const SparsenessTarget&, SolverKind)>;

ProjectionResult project_flipped(std::span<const double> x, const SparsenessTarget& target,
                                 SolverKind solver) {
    ProjectionResult r = project(x, target, solver);
    // ell1 = d alpha + lambda1 beta, so the "+" root sits 2 lambda1 beta / d higher.
    const double d = static_cast<double>(r.support.size());
    const double alpha = r.alpha + 2.0 * target.lambda1() * r.beta / d;
    double rho = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.p[i] = std::max(x[i] - alpha, 0.0);
        rho += r.p[i] * r.p[i];
    }
    for (double& v : r.p) v *= target.lambda2() / std::sqrt(rho);
    r.alpha = alpha;
    return r;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    // NaN in either input counts as a mismatch.
    return std::isnan(m) ? std::numeric_limits<double>::infinity() : m;
}

class Suite {
public:
    explicit Suite(std::string name) { result_.name = std::move(name); }

    void check(bool ok, const std::string& what) {
        ++result_.checks;
        if (!ok) {
            if (result_.failures == 0) result_.first_failure = what;
            ++result_.failures;
        }
    }

    SuiteResult take() { return std::move(result_); }

private:
    SuiteResult result_;
};

struct Case {
    std::vector<double> x;
    SparsenessTarget target;
};

class CaseGenerator {
public:
    explicit CaseGenerator(std::uint64_t seed) : rng_(seed) {}

    Case next(std::size_t n_min, std::size_t n_max) {
        std::uniform_int_distribution<std::size_t> dim(n_min, n_max);
        std::uniform_int_distribution<int> sig(1, 39);
        const std::size_t n = dim(rng_);
        std::vector<double> x(n);
        bench::fill_uniform(rng_(), x);
        return Case{std::move(x), derive_norms(0.025 * sig(rng_), n)};
    }

private:
    std::mt19937_64 rng_;
};

std::string describe(const Case& c) {
    std::ostringstream os;
    os << "n=" << c.x.size() << " sigma*=" << c.target.sigma_star();
    return os.str();
}

SuiteResult oracle_suite(const Options& opt, const Projector& proj) {
    Suite suite("oracle-equivalence");
    CaseGenerator gen(opt.seed);
    for (int k = 0; k < opt.vectors_per_suite; ++k) {
        const Case c = gen.next(3, 64);
        const double tol = 1e-9 * c.target.lambda2();
        const ProjectionResult r = proj(c.x, c.target, SolverKind::NewtonSqr);
        const oracle::OracleReport sorted = oracle::project_sorted(c.x, c.target);
        suite.check(max_abs_diff(r.p, sorted.p) <= tol, "sorted oracle mismatch at " + describe(c));
        if (c.x.size() <= 10) {
            const oracle::OracleReport brute = oracle::project_bruteforce(c.x, c.target);
            if (!brute.tie) {
                suite.check(max_abs_diff(r.p, brute.p) <= tol,
                            "exhaustive oracle mismatch at " + describe(c));
            }
        }
    }
    return suite.take();
}

SuiteResult feasibility_suite(const Options& opt, const Projector& proj) {
    Suite suite("feasibility");
    CaseGenerator gen(opt.seed + 1);
    for (int k = 0; k < opt.vectors_per_suite; ++k) {
        const Case c = gen.next(4, 512);
        const ProjectionResult r = proj(c.x, c.target, SolverKind::NewtonSqr);
        const Norms nm = norms(r.p);
        const double l1 = c.target.lambda1();
        const double l2 = c.target.lambda2();
        suite.check(std::abs(nm.l1 - l1) <= 1e-9 * l1, "L1 norm off target at " + describe(c));
        suite.check(std::abs(std::sqrt(nm.l2_sq) - l2) <= 1e-9 * l2,
                    "L2 norm off target at " + describe(c));
        suite.check(std::abs(sigma(r.p) - c.target.sigma_star()) <= 1e-9,
                    "sparseness off target at " + describe(c));
        const ProjectionResult again = proj(r.p, c.target, SolverKind::NewtonSqr);
        suite.check(max_abs_diff(again.p, r.p) <= 1e-9, "not idempotent at " + describe(c));
    }
    return suite.take();
}

SuiteResult solver_suite(const Options& opt, const Projector& proj) {
    Suite suite("solver-agreement");
    CaseGenerator gen(opt.seed + 2);
    for (int k = 0; k < opt.vectors_per_suite; ++k) {
        const Case c = gen.next(4, 256);
        const ProjectionResult ref = proj(c.x, c.target, SolverKind::Bisection);
        for (const SolverKind s : {SolverKind::Newton, SolverKind::NewtonSqr, SolverKind::Halley}) {
            const ProjectionResult r = proj(c.x, c.target, s);
            suite.check(r.support.size() == ref.support.size() &&
                            max_abs_diff(r.p, ref.p) <= 1e-9 * c.target.lambda2(),
                        std::string(to_string(s)) + " disagrees with bisection at " + describe(c));
        }
    }
    return suite.take();
}

SuiteResult gradient_suite(const Options& opt, const Projector& proj) {
    Suite suite("gradient");
    CaseGenerator gen(opt.seed + 3);
    std::mt19937_64 rng(opt.seed + 4);
    std::normal_distribution<double> normal;
    const int cases = std::max(1, opt.vectors_per_suite / 10);
    for (int k = 0; k < cases;) {
        const Case c = gen.next(4, 32);
        const ProjectionResult r = proj(c.x, c.target, SolverKind::NewtonSqr);
        if (r.min_gap <= 1e-3) continue;
        ++k;
        const GradientFactors f = make_gradient_factors(r, c.target);
        const Eigen::MatrixXd g = grad_matrix(f);
        const oracle::FdJacobian fd = oracle::jacobian_fd(c.x, c.target, 1e-6);
        // With two survivors the projection is locally constant and G vanishes.
        const bool fd_ok = r.support.size() == 2
                               ? g.cwiseAbs().maxCoeff() <= 1e-10 &&
                                     fd.jacobian.cwiseAbs().maxCoeff() <= 1e-5
                               : oracle::max_relative_error(g, fd.jacobian) <= 1e-5;
        suite.check(fd_ok, "finite differences disagree at " + describe(c));

        std::vector<double> y(c.x.size());
        for (double& v : y) v = normal(rng);
        const std::vector<double> z = grad_vec(f, y);
        const Eigen::VectorXd zm = g * Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
        const double ynorm = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size()).norm();
        suite.check(max_abs_diff(z, std::span<const double>(zm.data(), zm.size())) <= 1e-12 * ynorm,
                    "grad_vec and grad_matrix disagree at " + describe(c));

        std::vector<double> ones(c.x.size(), 0.0);
        for (const std::size_t i : r.support) ones[i] = 1.0;
        const std::vector<double> zp = grad_vec(f, r.p);
        const std::vector<double> ze = grad_vec(f, ones);
        const auto norm = [](const std::vector<double>& v) {
            return std::sqrt(norms(v).l2_sq);
        };
        suite.check(norm(zp) <= 1e-10 * c.target.lambda2() && norm(ze) <= 1e-10 * c.target.lambda2(),
                    "null space violated at " + describe(c));
    }
    return suite.take();
}

}  // namespace

std::vector<SuiteResult> run(const Options& options) {
    const Projector proj = options.fault == Fault::FlipClosedFormSign
                               ? Projector(project_flipped)
                               : Projector([](std::span<const double> x, const SparsenessTarget& t,
                                              SolverKind s) { return project(x, t, s); });

    std::vector<SuiteResult> results;
    for (auto* suite : {&oracle_suite, &feasibility_suite, &solver_suite, &gradient_suite}) {
        try {
            results.push_back(suite(options, proj));
        } catch (const std::exception& e) {
            SuiteResult r;
            r.failures = 1;
            r.first_failure = std::string("exception: ") + e.what();
            results.push_back(std::move(r));
        }
    }
    static constexpr const char* kNames[] = {"oracle-equivalence", "feasibility",
                                             "solver-agreement", "gradient"};
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].name.empty()) results[i].name = kNames[i];
    }
    return results;
}

void print_table(std::ostream& out, const std::vector<SuiteResult>& results) {
    out << std::left << std::setw(22) << "suite" << std::right << std::setw(8) << "checks"
        << std::setw(10) << "failures" << "  status\n";
    for (const SuiteResult& r : results) {
        out << std::left << std::setw(22) << r.name << std::right << std::setw(8) << r.checks
            << std::setw(10) << r.failures << "  " << (r.passed() ? "PASS" : "FAIL") << '\n';
        if (!r.passed()) out << "    first failure: " << r.first_failure << '\n';
    }
}

}  // namespace sparseproj::selfcheck
