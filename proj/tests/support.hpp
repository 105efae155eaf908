#pragma once

// Helpers shared by the unit tests. The reference evaluations here are
// deliberately naive (two passes, materialised shrinkage) so they share no
// code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sparseproj/core.hpp"

namespace testutil {

struct NaiveAux {
    double psi;
    double psi_prime;
    double psi_second;
    double psi_tilde;
    double psi_tilde_prime;
    double l1;
    double l2_sq;
    std::size_t d;
};

inline NaiveAux naive_aux(std::span<const double> x, double lambda1, double lambda2, double alpha) {
    std::vector<double> s;
    for (const double v : x) {
        if (v > alpha) s.push_back(v - alpha);
    }
    double l1 = 0.0;
    for (const double v : s) l1 += v;
    double l2_sq = 0.0;
    for (const double v : s) l2_sq += v * v;
    const double l2 = std::sqrt(l2_sq);
    const double d = static_cast<double>(s.size());
    NaiveAux r{};
    r.psi = l1 / l2 - lambda1 / lambda2;
    r.psi_prime = (l1 * l1 / l2_sq - d) / l2;
    r.psi_second = 3.0 * r.psi_prime * l1 / l2_sq;
    r.psi_tilde = l1 * l1 / l2_sq - lambda1 * lambda1 / (lambda2 * lambda2);
    r.psi_tilde_prime = 2.0 * (l1 / l2) * r.psi_prime;
    r.l1 = l1;
    r.l2_sq = l2_sq;
    r.d = s.size();
    return r;
}

inline std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(n);
    for (double& v : x) v = u(rng);
    return x;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double l1_norm(std::span<const double> x) {
    double s = 0.0;
    for (const double v : x) s += std::abs(v);
    return s;
}

inline double l2_norm(std::span<const double> x) {
    double s = 0.0;
    for (const double v : x) s += v * v;
    return std::sqrt(s);
}

inline std::vector<double> sorted_unique(std::span<const double> x) {
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace testutil
