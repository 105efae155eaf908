#include "sparseproj/project.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparseproj/auxfn.hpp"

namespace sparseproj {

namespace {

ClosedForm finish_closed_form(double sum, double a, std::size_t d, double lambda1, double lambda2) {
    if (d < 2) {
        throw Error(ErrorCode::NumericDegeneracy, "closed form needs a support of at least two");
    }
    const double dd = static_cast<double>(d);
    ClosedForm cf;
    cf.a = a;
    cf.b = dd * lambda2 * lambda2 - lambda1 * lambda1;
    if (!(cf.b > 0.0)) {
        throw Error(ErrorCode::NumericDegeneracy, "d * lambda2^2 - lambda1^2 is not positive");
    }
    if (!(cf.a > 0.0)) {
        throw Error(ErrorCode::NumericDegeneracy,
                    "support entries are all equal; the scale beta would vanish");
    }
    cf.beta = std::sqrt(cf.a / cf.b);
    cf.alpha = (sum - lambda1 * cf.beta) / dd;
    return cf;
}

}  // namespace

ClosedForm closed_form_alpha(double ell1, double ell2_sq, std::size_t d, double lambda1,
                             double lambda2) {
    const double dd = static_cast<double>(d);
    return finish_closed_form(ell1, dd * ell2_sq - ell1 * ell1, d, lambda1, lambda2);
}

ClosedForm closed_form_centered(std::span<const double> x, double threshold, std::size_t d,
                                double lambda1, double lambda2) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const double v : x) {
        if (v > threshold) {
            sum += v;
            ++count;
        }
    }
    if (count != d) {
        throw Error(ErrorCode::Inconsistency, "support size disagrees with the located bracket");
    }
    const double dd = static_cast<double>(d);
    const double mean = sum / dd;
    // c is the rounding residue of the mean; it corrects both moments.
    double c = 0.0;
    double q = 0.0;
    for (const double v : x) {
        if (v > threshold) {
            const double t = v - mean;
            c += t;
            q += t * t;
        }
    }
    return finish_closed_form(dd * mean + c, dd * q - c * c, d, lambda1, lambda2);
}

namespace {

void check_input(std::span<const double> x, const SparsenessTarget& target) {
    if (x.size() != target.n()) {
        throw Error(ErrorCode::Dimension, "input length does not match the target dimension");
    }
    bool nonzero = false;
    for (const double v : x) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::NegativeEntry, "input entries must be finite and non-negative");
        }
        nonzero = nonzero || v > 0.0;
    }
    if (!nonzero) {
        throw Error(ErrorCode::Domain, "cannot project the zero vector");
    }
}

}  // namespace

ProjectionInfo project_in_place(std::span<double> x, const SparsenessTarget& target,
                                SolverKind solver) {
    check_input(x, target);
    const double lambda1 = target.lambda1();
    const double lambda2 = target.lambda2();

    ProjectionInfo info;
    const AuxEvaluation screen = evaluate_aux(x, lambda1, lambda2, 0.0);
    info.evals = 1;

    double threshold = -std::numeric_limits<double>::infinity();
    std::size_t d = 0;
    if (screen.psi <= 0.0) {
        // Entries equal to zero contribute nothing to the sums, so only the
        // support size changes to the full index set.
        info.branch = Branch::Decrease;
        d = x.size();
    } else {
        info.branch = Branch::Increase;
        BracketResult bracket;
        try {
            bracket = find_bracket(x, target, solver);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::DegenerateInput) {
                throw Error(ErrorCode::NonuniqueProjection,
                            "all entries are equal; the projection is not unique");
            }
            throw;
        }
        info.evals += bracket.evals;
        threshold = bracket.aux.alpha;
        d = bracket.aux.d;
    }

    const ClosedForm cf = closed_form_centered(x, threshold, d, lambda1, lambda2);
    info.alpha = cf.alpha;
    info.beta = cf.beta;
    info.a = cf.a;
    info.b = cf.b;
    info.d = d;

    double rho = 0.0;
    for (double& v : x) {
        const double t = v - cf.alpha;
        if (t > 0.0) {
            v = t;
            rho += t * t;
        } else {
            v = 0.0;
        }
    }
    const double scale = lambda2 / std::sqrt(rho);
    for (double& v : x) {
        v *= scale;
    }
    return info;
}

ProjectionResult project(std::span<const double> x, const SparsenessTarget& target,
                         SolverKind solver) {
    ProjectionResult result;
    result.p.assign(x.begin(), x.end());
    const ProjectionInfo info = project_in_place(result.p, target, solver);
    result.alpha = info.alpha;
    result.beta = info.beta;
    result.a = info.a;
    result.b = info.b;
    result.evals = info.evals;
    result.branch = info.branch;

    result.min_gap = std::numeric_limits<double>::infinity();
    result.support.reserve(info.d);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (result.p[i] > 0.0) result.support.push_back(i);
        result.min_gap = std::min(result.min_gap, std::abs(x[i] - info.alpha));
        result.x_max = std::max(result.x_max, x[i]);
    }
    return result;
}

}  // namespace sparseproj
