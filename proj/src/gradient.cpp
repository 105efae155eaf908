#include "sparseproj/gradient.hpp"

#include <cmath>

namespace sparseproj {

namespace {

void check_factors(const GradientFactors& f) {
    if (!(f.a > 0.0) || !(f.b > 0.0)) {
        throw Error(ErrorCode::DegenerateGradient, "gradient needs a > 0 and b > 0");
    }
    if (f.support.size() != f.p_tilde.size()) {
        throw Error(ErrorCode::Dimension, "support and sliced projection differ in length");
    }
}

}  // namespace

GradientFactors make_gradient_factors(const ProjectionResult& result,
                                      const SparsenessTarget& target, double relative_tolerance) {
    GradientFactors f;
    f.n = result.p.size();
    f.support = result.support;
    f.p_tilde.reserve(f.support.size());
    for (const std::size_t i : f.support) {
        f.p_tilde.push_back(result.p[i]);
    }
    f.lambda1 = target.lambda1();
    f.lambda2 = target.lambda2();
    f.a = result.a;
    f.b = result.b;
    f.boundary_unreliable = !(result.min_gap > relative_tolerance * result.x_max);
    return f;
}

std::vector<double> grad_vec(const GradientFactors& f, std::span<const double> y) {
    check_factors(f);
    if (y.size() != f.n) {
        throw Error(ErrorCode::Dimension, "vector length does not match the projection");
    }
    const std::size_t d = f.support.size();

    double sum_y = 0.0;
    double scp = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double yj = y[f.support[j]];
        sum_y += yj;
        scp += f.p_tilde[j] * yj;
    }

    const double scale = std::sqrt(f.b / f.a);
    const double inv_sqrt_ab = 1.0 / std::sqrt(f.a * f.b);
    const double coef_p = inv_sqrt_ab * (f.lambda1 * sum_y - static_cast<double>(d) * scp);
    const double coef_e = inv_sqrt_ab * (f.lambda1 * scp - f.lambda2 * f.lambda2 * sum_y);

    std::vector<double> z(f.n, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t i = f.support[j];
        z[i] = scale * y[i] + coef_p * f.p_tilde[j] + coef_e;
    }
    return z;
}

Eigen::MatrixXd grad_matrix(const GradientFactors& f) {
    check_factors(f);
    const auto n = static_cast<Eigen::Index>(f.n);
    const std::size_t d = f.support.size();
    const double dd = static_cast<double>(d);
    const double scale = std::sqrt(f.b / f.a);
    const double inv_sqrt_ab = 1.0 / std::sqrt(f.a * f.b);
    const double l2_sq = f.lambda2 * f.lambda2;

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = r; c < d; ++c) {
            const double pr = f.p_tilde[r];
            const double pc = f.p_tilde[c];
            double v = -inv_sqrt_ab * (l2_sq + dd * pr * pc - f.lambda1 * (pr + pc));
            if (r == c) v += scale;
            const auto i = static_cast<Eigen::Index>(f.support[r]);
            const auto k = static_cast<Eigen::Index>(f.support[c]);
            g(i, k) = v;
            g(k, i) = v;
        }
    }
    return g;
}

}  // namespace sparseproj
