#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "sparseproj/auxfn.hpp"
#include "sparseproj/project.hpp"
#include "sparseproj/rootfind.hpp"
#include "support.hpp"

using namespace sparseproj;

TEST_SUITE("rootfind") {

TEST_CASE("solver names") {
    for (const SolverKind s : kAllSolvers) CHECK(parse_solver(to_string(s)) == s);
    CHECK_FALSE(parse_solver("brent").has_value());
    CHECK(to_string(SolverKind::NewtonSqr) == "newtonsqr");
}

TEST_CASE("init_state") {
    const std::vector<double> x{3.0, 2.0, 1.0};
    const auto s = init_state(x);
    CHECK(s.lo == 0.0);
    CHECK(s.up == 2.0);
    CHECK(s.alpha == 1.0);

    const std::vector<double> tied{5.0, 5.0, 1.0};
    CHECK(init_state(tied).up == 1.0);

    const std::vector<double> flat{0.7, 0.7};
    try {
        init_state(flat);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateInput);
    }
}

TEST_CASE("bisection step") {
    SolverState s{0.0, 2.0, 1.0, 1};
    AuxEvaluation aux;
    aux.psi = -0.1;
    const auto next = step(s, aux, SolverKind::Bisection);
    CHECK(next.lo == 0.0);
    CHECK(next.up == 1.0);
    CHECK(next.alpha == 0.5);
    CHECK(next.evals == 1);

    aux.psi = 0.0;  // a zero counts as positive
    const auto other = step(s, aux, SolverKind::Bisection);
    CHECK(other.lo == 1.0);
    CHECK(other.alpha == 1.5);
}

TEST_CASE("newton step formula") {
    // Psi(1) = 3/sqrt 5 - 1.5 with a slope of -1.2/sqrt 5 lands at 0.704915.
    SolverState s{0.0, 2.0, 1.0, 1};
    AuxEvaluation aux;
    aux.psi = 3.0 / std::sqrt(5.0) - 1.5;
    aux.psi_prime = -1.2 / std::sqrt(5.0);
    const auto next = step(s, aux, SolverKind::Newton);
    CHECK(next.up == 1.0);
    CHECK(next.alpha == doctest::Approx(0.7049150281252629).epsilon(1e-14));
}

TEST_CASE("newton step on (3, 2, 1) from alpha = 1 falls back to the midpoint") {
    // The true slope at alpha = 1 has d = 2 survivors; the Newton target is
    // -0.7705, outside [0, 1].
    const std::vector<double> x{3.0, 2.0, 1.0};
    const auto aux = evaluate_aux(x, 1.5, 1.0, 1.0);
    CHECK(1.0 - aux.psi / aux.psi_prime == doctest::Approx(-0.77050983124842272307).epsilon(1e-13));
    const auto next = step(init_state(x), aux, SolverKind::Newton);
    CHECK(next.lo == 0.0);
    CHECK(next.up == 1.0);
    CHECK(next.alpha == 0.5);
}

TEST_CASE("out-of-bounds and degenerate derivative steps fall back") {
    SolverState s{0.0, 2.0, 1.0, 1};
    AuxEvaluation aux;
    aux.psi = -0.3;
    aux.psi_prime = -0.230769230769;  // newton target 1 - 1.3 = -0.3
    CHECK(step(s, aux, SolverKind::Newton).alpha == 0.5);
    aux.psi_prime = 0.0;
    aux.psi_tilde = -0.1;
    aux.psi_tilde_prime = 0.0;
    for (const SolverKind k : {SolverKind::Newton, SolverKind::NewtonSqr, SolverKind::Halley}) {
        CHECK(step(s, aux, k).alpha == 0.5);
    }
}

TEST_CASE("halley factor is clamped") {
    AuxEvaluation aux;
    aux.psi_prime = -1.0;
    for (const double psi : {-100.0, -1.0, -0.1, 0.0, 0.1, 1.0, 100.0}) {
        for (const double second : {-50.0, -1.0, 0.0, 1.0, 50.0}) {
            aux.psi = psi;
            aux.psi_second = second;
            const double h = halley_factor(aux);
            CHECK(h >= 0.5);
            CHECK(h <= 1.5);
            const double raw = 1.0 - psi * second / 2.0;
            if (raw >= 0.5 && raw <= 1.5) CHECK(h == raw);
        }
    }
    aux.psi_prime = 0.0;
    aux.psi = 0.0;
    aux.psi_second = 0.0;
    const double h = halley_factor(aux);
    CHECK(h >= 0.5);
    CHECK(h <= 1.5);
}

TEST_CASE("safeguard keeps iterates inside a shrinking bracket") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 8 + k % 100;
        const auto x = testutil::uniform_vector(rng, n);
        const auto t = derive_norms(0.2 + 0.7 * (k % 10) / 10.0, n);
        // Inputs already sparser than the target never enter root finding.
        if (evaluate_aux(x, t, 0.0).psi <= 0.0) continue;
        for (const SolverKind solver : kAllSolvers) {
            SolverState s = init_state(x);
            auto aux = evaluate_aux(x, t, s.alpha);
            double width = s.up - s.lo;
            int guard = 0;
            while (!aux.finished && guard++ < 100) {
                const auto next = step(s, aux, solver);
                CHECK(next.alpha >= next.lo);
                CHECK(next.alpha <= next.up);
                const double w = next.up - next.lo;
                CHECK(w <= width);
                if (solver == SolverKind::Bisection) CHECK(w == doctest::Approx(width / 2).epsilon(1e-12));
                // Psi(lo) >= 0 and Psi(up) < 0 are kept.
                if (next.lo > 0.0) CHECK(evaluate_aux(x, t, next.lo).psi >= 0.0);
                CHECK(evaluate_aux(x, t, next.up).psi < 0.0);
                width = w;
                s = next;
                aux = evaluate_aux(x, t, s.alpha);
            }
            CHECK(aux.finished);
        }
    }
}

TEST_CASE("x = (3, 2, 1) certifies the bracket [0, 1) with d = 3") {
    const std::vector<double> x{3.0, 2.0, 1.0};
    const auto t = SparsenessTarget::make(3, 1.5, 1.0);
    for (const SolverKind solver : kAllSolvers) {
        const auto r = find_bracket(x, t, solver);
        CHECK(r.aux.finished);
        CHECK(r.aux.d == 3);
        CHECK(r.aux.bracket_lo == 0.0);
        CHECK(r.aux.bracket_hi == 1.0);
        CHECK(r.evals == 2);
    }
}

TEST_CASE("all solvers agree on 1000 random vectors") {
    std::mt19937_64 rng(32);
    std::uniform_int_distribution<int> sig(1, 39);
    for (int k = 0; k < 1000; ++k) {
        const auto x = testutil::uniform_vector(rng, 64);
        const auto t = derive_norms(0.025 * sig(rng), 64);
        if (sigma(x) >= t.sigma_star()) continue;
        const auto ref = find_bracket(x, t, SolverKind::Bisection);
        const auto cf_ref = closed_form_alpha(ref.aux.ell1, ref.aux.ell2_sq, ref.aux.d, t.lambda1(), t.lambda2());
        for (const SolverKind s : {SolverKind::Newton, SolverKind::NewtonSqr, SolverKind::Halley}) {
            const auto r = find_bracket(x, t, s);
            CHECK(r.aux.d == ref.aux.d);
            CHECK(r.aux.ell1 == ref.aux.ell1);
            CHECK(r.aux.ell2_sq == ref.aux.ell2_sq);
            const auto cf = closed_form_alpha(r.aux.ell1, r.aux.ell2_sq, r.aux.d, t.lambda1(), t.lambda2());
            CHECK(std::abs(cf.alpha - cf_ref.alpha) <= 1e-10);
        }
    }
}

TEST_CASE("bisection evaluation count bound") {
    // Bisection stops once the bracket is shorter than every gap between
    // neighbouring distinct values in it, so evals <= ceil(log2(x_2nd / gap)) + 2.
    std::mt19937_64 rng(33);
    for (int k = 0; k < 300; ++k) {
        const std::size_t n = 4 + k % 200;
        const auto x = testutil::uniform_vector(rng, n);
        const auto t = derive_norms(0.3 + 0.6 * (k % 7) / 7.0, n);
        if (sigma(x) >= t.sigma_star()) continue;
        auto uniq = testutil::sorted_unique(x);
        uniq.insert(uniq.begin(), 0.0);
        const double second = uniq[uniq.size() - 2];
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 2 < uniq.size(); ++i) gap = std::min(gap, uniq[i + 1] - uniq[i]);
        const auto r = find_bracket(x, t, SolverKind::Bisection);
        CHECK(r.evals <= static_cast<int>(std::ceil(std::log2(second / gap))) + 2);
    }
}

TEST_CASE("tied maxima that the target cannot separate") {
    // Psi on the plateau is sqrt(2) - lambda1/lambda2 >= 0 here.
    const std::vector<double> x{1.0, 1.0, 0.2};
    const auto t = SparsenessTarget::make(3, 1.2, 1.0);
    try {
        find_bracket(x, t, SolverKind::Newton);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonuniqueProjection);
    }
    // With lambda1/lambda2 > sqrt(2) the zero lies below the second value.
    const auto wide = SparsenessTarget::make(3, 1.5, 1.0);
    CHECK(find_bracket(x, wide, SolverKind::Newton).aux.finished);
}

}  // TEST_SUITE
