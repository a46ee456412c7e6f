#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "graphrom/regression.hpp"

using namespace graphrom;

namespace {

Eigen::MatrixXd random_matrix(int n, int p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd X(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) X(i, j) = gauss(rng);
    return X;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& X) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    return Eigen::MatrixXd(qr.householderQ()) .leftCols(X.cols());
}

// brute-force 1D prox: minimize the convex (g - v)^2 + lambda |g| by ternary
// search, no soft-threshold algebra involved
double prox_oracle(double v, double lambda) {
    auto obj = [&](double g) { return (g - v) * (g - v) + lambda * std::abs(g); };
    double lo = -2.0 * std::abs(v) - 1.0, hi = -lo;
    for (int it = 0; it < 300; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (obj(m1) <= obj(m2))
            hi = m2;
        else
            lo = m1;
    }
    const double g = 0.5 * (lo + hi);
    return std::abs(g) < 1e-13 ? 0.0 : g;
}

} // namespace

TEST_CASE("ols recovers planted coefficients and splits duplicates") {
    const Eigen::MatrixXd X = random_matrix(40, 5, 1);
    Eigen::VectorXd gamma_true(5);
    gamma_true << 1.0, -2.0, 0.5, 3.0, 0.0;
    const Eigen::VectorXd y = X * gamma_true;
    int rank = 0;
    const Eigen::VectorXd g = ols_fit(X, y, &rank);
    CHECK(rank == 5);
    CHECK((X * g - y).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((g - gamma_true).cwiseAbs().maxCoeff() < 1e-10);

    // orthonormal case: gamma = X^T y
    const Eigen::MatrixXd Q = orthonormalize(random_matrix(30, 4, 2));
    const Eigen::VectorXd y2 = random_matrix(30, 1, 3);
    CHECK((ols_fit(Q, y2) - Q.transpose() * y2).cwiseAbs().maxCoeff() < 1e-12);

    // duplicated column: min-norm split, prediction unchanged
    Eigen::MatrixXd Xd(40, 6);
    Xd << X, X.col(0);
    int rank_d = 0;
    const Eigen::VectorXd gd = ols_fit(Xd, y, &rank_d);
    CHECK(rank_d == 5);
    CHECK((Xd * gd - y).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(gd[0] == doctest::Approx(gd[5]).epsilon(1e-9));  // equal split
}

TEST_CASE("ridge identities") {
    const Eigen::MatrixXd X = random_matrix(30, 6, 4);
    const Eigen::VectorXd y = random_matrix(30, 1, 5);
    CHECK((ridge_fit(X, y, 0.0) - ols_fit(X, y)).cwiseAbs().maxCoeff() < 1e-10);

    const Eigen::MatrixXd Q = orthonormalize(random_matrix(30, 4, 6));
    const Eigen::VectorXd g_ols = ols_fit(Q, y);
    for (double lambda : {1e-6, 0.1, 1.0, 25.0})
        CHECK((ridge_fit(Q, y, lambda) - g_ols / (1.0 + lambda)).cwiseAbs().maxCoeff() < 1e-12);

    double prev = ridge_fit(X, y, 0.0).norm();
    for (double lambda : {0.1, 1.0, 10.0, 100.0, 1e4}) {
        const double cur = ridge_fit(X, y, lambda).norm();
        CHECK(cur < prev + 1e-15);
        prev = cur;
    }
    CHECK_THROWS_AS(ridge_fit(X, y, -1.0), std::invalid_argument);
}

TEST_CASE("lasso identities") {
    const Eigen::MatrixXd X = random_matrix(60, 5, 7);
    const Eigen::VectorXd y = random_matrix(60, 1, 8);
    const LassoResult zero = lasso_fit(X, y, 0.0);
    CHECK(zero.converged);
    CHECK((zero.coefficients - ols_fit(X, y)).cwiseAbs().maxCoeff() < 1e-8);

    const Eigen::MatrixXd Q = orthonormalize(random_matrix(40, 4, 9));
    const Eigen::VectorXd g_ols = ols_fit(Q, y.head(40));
    for (double lambda : {0.01, 0.2, 1.0}) {
        const Eigen::VectorXd g = lasso_fit(Q, y.head(40), lambda).coefficients;
        for (int j = 0; j < 4; ++j) {
            const double soft =
                std::copysign(std::max(0.0, std::abs(g_ols[j]) - lambda / 2.0), g_ols[j]);
            CHECK(g[j] == doctest::Approx(soft).epsilon(1e-8));
            CHECK(std::abs(g[j] - prox_oracle(g_ols[j], lambda)) < 1e-8);
        }
    }

    // large lambda kills everything
    const Eigen::VectorXd dead = lasso_fit(X, y, 1e6).coefficients;
    CHECK(dead.cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(lasso_fit(X, y, -0.5), std::invalid_argument);
}

TEST_CASE("weighted loss composition") {
    const int n = 100;
    Eigen::VectorXd y(n), yhat(n);
    for (int k = 0; k < n; ++k) {
        y[k] = std::sin(2.0 * std::numbers::pi * k / (n - 1.0));
        yhat[k] = y[k];
    }
    LossSpec l2only;
    CHECK(weighted_loss(y, yhat, l2only) == 0.0);

    yhat.array() += 0.25;  // constant offset: RMS = 0.25
    CHECK(weighted_loss(y, yhat, l2only) == doctest::Approx(0.25).epsilon(1e-12));

    LossSpec l1only;
    l1only.w2 = 0.0;
    l1only.w1 = 1.0;
    // two extrema, both off by 0.25
    CHECK(weighted_loss(y, yhat, l1only) == doctest::Approx(0.25).epsilon(1e-12));

    LossSpec linf;
    linf.w2 = 0.0;
    linf.winf = 1.0;
    CHECK(weighted_loss(y, yhat, linf) == doctest::Approx(0.25).epsilon(1e-12));

    // no peaks: warning raised, L1 contributes zero
    Eigen::VectorXd ramp(10), rhat(10);
    for (int k = 0; k < 10; ++k) {
        ramp[k] = k;
        rhat[k] = k + 1.0;
    }
    bool warned = false;
    LossSpec mixed;
    mixed.w2 = 1.0;
    mixed.w1 = 3.0;
    CHECK(weighted_loss(ramp, rhat, mixed, &warned) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(warned);

    LossSpec bad;
    bad.w2 = 0.0;
    CHECK_THROWS_AS(static_cast<void>(weighted_loss(y, yhat, bad)), std::invalid_argument);
}

TEST_CASE("leave-one-out cross validation") {
    const Eigen::MatrixXd X = random_matrix(25, 3, 10);
    Eigen::VectorXd gamma_true(3);
    gamma_true << 1.0, -1.0, 0.5;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 0.05);
    Eigen::VectorXd y = X * gamma_true;
    for (int k = 0; k < 25; ++k) y[k] += gauss(rng);

    SolverSpec solver;
    solver.kind = SolverKind::Ridge;
    solver.lambda_cv = true;
    solver.cv_grid = {1e-8, 1e-3, 1e3};
    LossSpec loss;
    const CvResult cv = loo_cross_validate(X, y, solver, loss);
    REQUIRE(cv.table.size() == 3);
    // huge lambda ruins held-out predictions on a strongly linear problem
    CHECK(cv.best_lambda < 1e3);

    // independent fold loop for one lambda
    const double lambda = 1e-3;
    Eigen::VectorXd yhat(25);
    for (int i = 0; i < 25; ++i) {
        Eigen::MatrixXd Xf(24, 3);
        Eigen::VectorXd yf(24);
        int r = 0;
        for (int k = 0; k < 25; ++k) {
            if (k == i) continue;
            Xf.row(r) = X.row(k);
            yf[r] = y[k];
            ++r;
        }
        yhat[i] = X.row(i).dot(ridge_fit(Xf, yf, lambda));
    }
    const double direct = weighted_loss(y, yhat, loss);
    CHECK(cv.table[1].lambda == lambda);
    CHECK(cv.table[1].mean_loss == doctest::Approx(direct).epsilon(1e-12));

    // constant-loss tie breaks toward the larger lambda
    SolverSpec tied = solver;
    tied.cv_grid = {0.25, 0.5};
    Eigen::VectorXd zero_y = Eigen::VectorXd::Zero(25);
    const CvResult tie = loo_cross_validate(X, zero_y, tied, loss);
    CHECK(tie.best_lambda == 0.5);

    SolverSpec single = solver;
    single.cv_grid = {0.125};
    CHECK(loo_cross_validate(X, y, single, loss).best_lambda == 0.125);
}

namespace {

OperatorBasis matrix_basis(const Eigen::MatrixXd& X, std::vector<bool> fixed = {}) {
    OperatorBasis basis;
    basis.X = X;
    for (int c = 0; c < X.cols(); ++c) {
        TermDescriptor d;
        char name[16];
        std::snprintf(name, sizeof name, "c%02d", c);
        d.powers[name] = 1;
        basis.descriptors.push_back(d);
    }
    basis.fixed = fixed.empty() ? std::vector<bool>(X.cols(), false) : std::move(fixed);
    return basis;
}

} // namespace

TEST_CASE("stepwise keeps the explanatory column") {
    const Eigen::MatrixXd X = random_matrix(50, 3, 12);
    const Eigen::VectorXd y = 2.0 * X.col(0);
    OperatorBasis basis = matrix_basis(X);
    SolverSpec solver;
    LossSpec loss;
    StepwiseStop stop;
    stop.min_terms = 1;
    const StepwiseTrace trace = stepwise_backward(basis, y, solver, loss, stop);
    REQUIRE(trace.final_active.size() == 1);
    CHECK(trace.final_active[0] == 0);
    CHECK(trace.final_coefficients_unnormalized[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(trace.records.size() == 3);
    CHECK(trace.records.front().active_terms == 3);
    CHECK(trace.records.back().active_terms == 1);
    // loss never improves as terms leave on this full-rank problem
    for (std::size_t r = 1; r < trace.records.size(); ++r)
        CHECK(trace.records[r].loss_total >= trace.records[r - 1].loss_total - 1e-12);
}

TEST_CASE("fixed columns are pinned and never removed") {
    const int n = 40;
    Eigen::MatrixXd X = random_matrix(n, 4, 13);
    X.col(0).setConstant(1.5);  // fixed base column
    const Eigen::VectorXd y =
        X.col(0) + 0.8 * X.col(2) + 0.001 * random_matrix(n, 1, 14).col(0);
    OperatorBasis basis = matrix_basis(X, {true, false, false, false});
    SolverSpec solver;
    LossSpec loss;
    StepwiseStop stop;
    stop.min_terms = 1;
    const StepwiseTrace trace = stepwise_backward(basis, y, solver, loss, stop);
    CHECK(trace.final_coefficients_unnormalized[0] == 1.0);
    REQUIRE(trace.final_active.size() == 1);
    CHECK(trace.final_active[0] == 2);
    CHECK(trace.final_coefficients_unnormalized[2] == doctest::Approx(0.8).epsilon(1e-2));
}

TEST_CASE("degenerate F denominator falls back to loss ranking") {
    // more active columns than rows
    const Eigen::MatrixXd X = random_matrix(4, 6, 15);
    const Eigen::VectorXd y = random_matrix(4, 1, 16);
    OperatorBasis basis = matrix_basis(X);
    SolverSpec solver;
    LossSpec loss;
    StepwiseStop stop;
    stop.min_terms = 2;
    const StepwiseTrace trace = stepwise_backward(basis, y, solver, loss, stop);
    CHECK(trace.records.front().f_fallback);
    CHECK(trace.records.back().active_terms == 2);
}

TEST_CASE("f threshold stops removal early") {
    const Eigen::MatrixXd X = random_matrix(60, 4, 17);
    Eigen::VectorXd gamma_true(4);
    gamma_true << 3.0, -2.0, 1.5, 0.0;
    Eigen::VectorXd y = X * gamma_true + 0.01 * random_matrix(60, 1, 18).col(0);
    OperatorBasis basis = matrix_basis(X);
    SolverSpec solver;
    LossSpec loss;
    StepwiseStop stop;
    stop.min_terms = 1;
    stop.f_threshold = 50.0;
    const StepwiseTrace trace = stepwise_backward(basis, y, solver, loss, stop);
    // the three real terms have enormous F; only the null column should go
    CHECK(trace.final_active.size() == 3);
    for (int c : {0, 1, 2})
        CHECK(std::find(trace.final_active.begin(), trace.final_active.end(), c) !=
              trace.final_active.end());
}
