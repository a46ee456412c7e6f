#include <doctest.h>

#include <cmath>
#include <numbers>

#include "graphrom/error_lab.hpp"

using namespace graphrom::errorlab;

TEST_CASE("mesh construction") {
    const Mesh1D m = Mesh1D::build(4, 1.0);
    CHECK(m.h == doctest::Approx(0.125));
    REQUIRE(m.training.size() == 5);
    REQUIRE(m.testing.size() == 4);
    CHECK(m.training.front() == 0.0);
    CHECK(m.training.back() == doctest::Approx(1.0));
    for (int i = 0; i < 4; ++i) {
        CHECK(m.testing[i] > m.training[i]);
        CHECK(m.testing[i] < m.training[i + 1]);
        CHECK(m.testing[i] - m.training[i] == doctest::Approx(m.h));
    }
    CHECK_THROWS_AS(Mesh1D::build(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Mesh1D::build(4, 0.0), std::invalid_argument);
}

TEST_CASE("power sums") {
    CHECK(static_cast<double>(faulhaber_exact(1, 100)) == 5050.0);
    CHECK(faulhaber(1, 100) == doctest::Approx(5050.0).epsilon(1e-14));
    for (long n : {0L, 1L, 7L, 100L}) CHECK(faulhaber(0, n) == static_cast<double>(n));

    // exact closed form equals loop summation in integer arithmetic
    for (int l = 0; l <= 6; ++l)
        for (long n : {1L, 2L, 13L, 100L, 1000L}) {
            __int128 loop = 0;
            for (long j = 1; j <= n; ++j) {
                __int128 p = 1;
                for (int e = 0; e < l; ++e) p *= j;
                loop += p;
            }
            CHECK(faulhaber_exact(l, n) == loop);
        }
    {
        __int128 loop = 0;
        for (long j = 1; j <= 25; ++j) loop += j * j * j;
        CHECK(faulhaber_exact(3, 25) == loop);
    }
    CHECK_THROWS_AS(faulhaber(11, 5), std::invalid_argument);
    CHECK_THROWS_AS(faulhaber(-1, 5), std::invalid_argument);
    CHECK_THROWS_AS(faulhaber_exact(10, 100000000L), std::overflow_error);
}

TEST_CASE("harmonic sums") {
    CHECK(harmonic(0.0, 7) == 7.0);
    const double euler_mascheroni = 0.5772156649015329;
    CHECK(harmonic(1.0, 1000000) ==
          doctest::Approx(std::log(1e6) + euler_mascheroni).epsilon(1e-5));
    const double basel = std::numbers::pi * std::numbers::pi / 6.0;
    CHECK(std::abs(harmonic(2.0, 20000) - basel) < 1e-4);
    CHECK(harmonic(2.0, 20000) > harmonic(2.0, 100));
    CHECK_THROWS_AS(harmonic(1.0, 0), std::invalid_argument);
}

TEST_CASE("closed-form non-local derivative") {
    const Mesh1D m = Mesh1D::build(8, 1.0);

    const PolySpec constant{{2.5}};
    for (int i = 0; i <= 8; ++i)
        CHECK(nonlocal_derivative_closed(constant, m, i, 0.0) == 0.0);

    const PolySpec linear{{0.0, 1.7}};
    for (int i = 0; i <= 8; ++i)
        CHECK(nonlocal_derivative_closed(linear, m, i, 0.0) ==
              doctest::Approx(1.7).epsilon(1e-13));

    const double a2 = 0.9;
    const PolySpec quadratic{{0.0, 0.0, a2}};
    for (int i = 0; i <= 8; ++i) {
        const double x = m.training[i];
        const double expected = a2 * (2.0 * x + (9.0 / 8.0) * (0.5 - x));
        CHECK(nonlocal_derivative_closed(quadratic, m, i, 0.0) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK_THROWS_AS(nonlocal_derivative_closed(linear, m, 9, 0.0), std::out_of_range);
    CHECK_THROWS_AS(nonlocal_derivative_closed(linear, m, 0, 1.0), std::invalid_argument);
}

TEST_CASE("graph path matches the closed form") {
    const PolySpec quadratic{{0.1, -0.4, 1.3}};
    const PolySpec cubic{{0.0, 1.0, -0.5, 0.25}};
    const PolySpec quartic{{0.2, 0.5, 1.0, -0.3, 0.1}};
    CHECK(oracle_match_graph_derivative(quadratic, Mesh1D::build(8, 1.0), 0.0) < 1e-10);
    CHECK(oracle_match_graph_derivative(cubic, Mesh1D::build(16, 1.0), 0.0) < 1e-10);
    CHECK(oracle_match_graph_derivative(quadratic, Mesh1D::build(8, 1.0), 0.5) < 1e-9);
    for (double eps : {0.0, 0.25, 0.5})
        for (int n : {4, 8, 16, 32})
            CHECK(oracle_match_graph_derivative(quartic, Mesh1D::build(n, 2.0), eps) < 1e-9);
}

TEST_CASE("midpoint quadratic derivative error vanishes") {
    const double a2 = 1.1;
    const PolySpec quadratic{{0.0, 0.0, a2}};
    for (int n : {4, 8, 16}) {
        const Mesh1D m = Mesh1D::build(n, 1.0);
        const int mid = n / 2;  // training point at L/2
        const double err = nonlocal_derivative_closed(quadratic, m, mid, 0.0) -
                           2.0 * a2 * m.training[mid];
        CHECK(std::abs(err) < 1e-12);
    }
}

TEST_CASE("quadratic derivative error persists as h shrinks") {
    const double a2 = 0.7, L = 1.0;
    const PolySpec quadratic{{0.0, 0.3, a2}};
    // fixed interior location x = L/4 (training index n/4)
    double prev_gap = 1e9;
    for (int n : {8, 32, 128, 512}) {
        const Mesh1D m = Mesh1D::build(n, L);
        const int i = n / 4;
        const double err = nonlocal_derivative_closed(quadratic, m, i, 0.0) -
                           quadratic.derivative(m.training[i]);
        const double limit = (L / 2.0 - m.training[i]) * a2;
        const double gap = std::abs(err - limit);
        CHECK(gap < prev_gap + 1e-15);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-3);  // approaches the finite limit, not zero
}

TEST_CASE("gamma1 fitting") {
    const Mesh1D m = Mesh1D::build(16, 1.0);
    const PolySpec linear{{0.2, 1.5}};
    CHECK(fit_gamma1(linear, m, 3) == doctest::Approx(1.0).epsilon(1e-12));

    // ratio formula cross-check against an explicit accumulation
    const PolySpec quadratic{{0.0, 1.0, 1.0}};
    const int i = 0;
    const double D = nonlocal_derivative_closed(quadratic, m, i, 0.0);
    double num = 0.0, den = 0.0;
    for (int j = 0; j <= 16; ++j) {
        if (j == i) continue;
        const double b = D * (m.training[j] - m.training[i]);
        const double d = quadratic.eval(m.training[j]) - quadratic.eval(m.training[i]);
        num += b * d;
        den += b * b;
    }
    CHECK(fit_gamma1(quadratic, m, i) == doctest::Approx(num / den).epsilon(1e-12));
}

TEST_CASE("gamma1 approaches the quadratic limit at first order") {
    const double L = 1.0;
    const PolySpec quadratic{{0.0, 1.0, 1.0}};
    const double limit = gamma1_quadratic_limit(L, 1.0, 1.0);
    CHECK(limit == doctest::Approx(7.0 / 6.0).epsilon(1e-14));

    std::vector<double> errs, hs;
    for (int n : {16, 32, 64, 128, 256}) {
        const Mesh1D m = Mesh1D::build(n, L);
        errs.push_back(std::abs(fit_gamma1(quadratic, m, 0) - limit));
        hs.push_back(m.h);
    }
    CHECK(errs.back() < 1e-3);
    // first-order rate: error roughly halves per halving of h
    for (std::size_t k = 1; k < errs.size(); ++k) {
        const double rate = std::log(errs[k - 1] / errs[k]) / std::log(hs[k - 1] / hs[k]);
        CHECK(rate == doctest::Approx(1.0).epsilon(0.25));
    }
}

TEST_CASE("convergence study slopes") {
    const PolySpec quadratic{{0.3, 1.0, 0.7}};
    const std::vector<int> n_list = {8, 16, 32, 64, 128};

    const StudyResult diff = convergence_study(quadratic, 1, 1.0, n_list, 0.0, ErrorNorm::L2,
                                               DerivativeMode::DifferentialExact);
    CHECK(diff.slope == doctest::Approx(2.0).epsilon(0.075));

    const StudyResult nl = convergence_study(quadratic, 1, 1.0, n_list, 0.0, ErrorNorm::L2,
                                             DerivativeMode::NonLocal);
    CHECK(nl.slope == doctest::Approx(1.0).epsilon(0.15));
    CHECK(nl.slope < diff.slope);

    // errors decrease with h in both modes
    for (const auto& res : {diff, nl})
        for (std::size_t k = 1; k < res.records.size(); ++k)
            CHECK(res.records[k].error_l2 <= res.records[k - 1].error_l2 + 1e-15);

    // a linear target is represented exactly: machine-precision floor
    const PolySpec linear{{0.4, 2.0}};
    const StudyResult exact = convergence_study(linear, 1, 1.0, n_list, 0.0, ErrorNorm::Linf,
                                                DerivativeMode::NonLocal);
    for (const auto& rec : exact.records) CHECK(rec.error_linf < 1e-12);

    CHECK_THROWS_AS(convergence_study(quadratic, 1, 1.0, {8, 16}, 0.0, ErrorNorm::L2,
                                      DerivativeMode::NonLocal),
                    std::invalid_argument);
}
