#include "sparseproj/auxfn.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace sparseproj {

namespace {

// Psi evaluated from the shifted accumulators. A vanishing l2 only happens at
// xi = x_max, which is outside the domain of Psi; report it as NaN so that
// every comparison against it is false.
double psi_at(double l1, double l2_sq, std::size_t d, double ratio) noexcept {
    if (d == 1) {
        return 1.0 - ratio;
    }
    if (!(l2_sq > 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return l1 / std::sqrt(l2_sq) - ratio;
}

}  // namespace

AuxEvaluation evaluate_aux(std::span<const double> x, double lambda1, double lambda2, double alpha) {
    if (!(alpha >= 0.0)) {
        throw Error(ErrorCode::Domain, "auxiliary function evaluated at negative alpha");
    }

    AuxEvaluation ev;
    ev.alpha = alpha;

    double l1 = 0.0;
    double l2_sq = 0.0;
    double l1a = 0.0;
    double l2a_sq = 0.0;
    std::size_t d = 0;
    double x_lo = 0.0;
    double dx_lo = -alpha;
    double x_hi = std::numeric_limits<double>::infinity();
    double dx_hi = std::numeric_limits<double>::infinity();

    for (const double xi : x) {
        const double t = xi - alpha;
        if (t > 0.0) {
            l1 += xi;
            l2_sq += xi * xi;
            l1a += t;
            l2a_sq += t * t;
            ++d;
            if (t < dx_hi) {
                x_hi = xi;
                dx_hi = t;
            }
        } else if (t > dx_lo) {
            x_lo = xi;
            dx_lo = t;
        }
    }

    if (d == 0) {
        throw Error(ErrorCode::Domain, "auxiliary function evaluated at alpha >= max(x)");
    }

    ev.ell1 = l1;
    ev.ell2_sq = l2_sq;
    ev.d = d;
    ev.bracket_lo = x_lo;
    ev.bracket_hi = x_hi;

    const double dd = static_cast<double>(d);
    if (!(l2a_sq > 0.0)) {
        throw Error(ErrorCode::Domain, "l2(alpha)^2 vanished; alpha is too close to max(x)");
    }
    const double l2a = std::sqrt(l2a_sq);
    const double ratio = lambda1 / lambda2;
    const double r = d == 1 ? 1.0 : l1a / l2a;

    ev.psi = r - ratio;
    // Exactly zero for d = 1, where l1 and l2 coincide.
    ev.psi_prime = d == 1 ? 0.0 : (l1a * l1a / l2a_sq - dd) / l2a;
    ev.psi_second = 3.0 * ev.psi_prime * l1a / l2a_sq;
    ev.psi_tilde = r * r - ratio * ratio;
    ev.psi_tilde_prime = 2.0 * r * ev.psi_prime;

    // Psi(x_j) >= 0 and Psi(x_k) < 0, shifted from alpha so that the small
    // moments near the top entries keep their digits. At x_j = 0 the unshifted
    // sums reproduce Psi(0) of an alpha = 0 evaluation bit for bit.
    const auto shift = [&](double xi) {
        const double s = xi - alpha;
        return std::pair{l1a - dd * s, l2a_sq - 2.0 * s * l1a + dd * s * s};
    };
    const auto [l1_lo, l2_sq_lo] = x_lo == 0.0 ? std::pair{l1, l2_sq} : shift(x_lo);
    const auto [l1_hi, l2_sq_hi] = shift(x_hi);
    const double psi_lo = psi_at(l1_lo, l2_sq_lo, d, ratio);
    const double psi_hi = psi_at(l1_hi, l2_sq_hi, d, ratio);
    ev.finished = psi_lo >= 0.0 && psi_hi < 0.0;
    return ev;
}

}  // namespace sparseproj
