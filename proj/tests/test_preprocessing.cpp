#include <doctest.h>

#include <cmath>
#include <numbers>

#include "graphrom/preprocessing.hpp"

using namespace graphrom;

namespace {

TimeSeries ramp_series(int n, double dt = 0.1) {
    TimeSeries s;
    Eigen::VectorXd v(n);
    for (int k = 0; k < n; ++k) {
        s.t.push_back(k * dt);
        v[k] = k * dt;
    }
    s.names = {"v"};
    s.columns = {v};
    return s;
}

} // namespace

TEST_CASE("time series validation") {
    TimeSeries s = ramp_series(4);
    s.validate();
    s.t[2] = s.t[1];
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    TimeSeries bad = ramp_series(4);
    bad.columns[0][1] = std::nan("");
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(ramp_series(4).column("missing"), std::invalid_argument);
}

TEST_CASE("gaussian filter identity cases") {
    const TimeSeries s = ramp_series(20);
    const TimeSeries same = gaussian_filter(s, 5, 1.0, 0);
    CHECK((same.columns[0] - s.columns[0]).cwiseAbs().maxCoeff() == 0.0);

    TimeSeries constant = ramp_series(20);
    constant.columns[0].setConstant(4.2);
    const TimeSeries filtered = gaussian_filter(constant, 7, 1.5, 3);
    CHECK((filtered.columns[0].array() - 4.2).abs().maxCoeff() < 1e-14);

    CHECK_THROWS_AS(gaussian_filter(s, 4, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_filter(s, 5, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_filter(s, 25, 1.0, 1), std::invalid_argument);
}

TEST_CASE("gaussian filter impulse response is the kernel") {
    TimeSeries s = ramp_series(21);
    s.columns[0].setZero();
    s.columns[0][10] = 1.0;
    const TimeSeries out = gaussian_filter(s, 5, 1.0, 1);
    double kernel[5], norm = 0.0;
    for (int k = -2; k <= 2; ++k) norm += kernel[k + 2] = std::exp(-0.5 * k * k);
    for (int k = -2; k <= 2; ++k)
        CHECK(out.columns[0][10 + k] == doctest::Approx(kernel[k + 2] / norm).epsilon(1e-13));
    CHECK(out.columns[0][5] == 0.0);
}

TEST_CASE("backward difference") {
    TimeSeries s = ramp_series(11);
    const TimeSeries d = backward_euler_derivative(s, "v");
    CHECK(d.length() == 10);
    CHECK(d.names[0] == "dv_dt");
    CHECK((d.columns[0].array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(d.t.front() == doctest::Approx(s.t[1]));

    TimeSeries sq = ramp_series(11);
    for (int k = 0; k < 11; ++k) sq.columns[0][k] = sq.t[k] * sq.t[k];
    const TimeSeries dsq = backward_euler_derivative(sq, "v");
    for (int k = 1; k < 11; ++k)
        CHECK(dsq.columns[0][k - 1] == doctest::Approx(sq.t[k] + sq.t[k - 1]).epsilon(1e-10));
}

TEST_CASE("peak finding") {
    Eigen::VectorXd mono(6);
    mono << 0, 1, 2, 3, 4, 5;
    CHECK(find_peaks(mono, 1).empty());

    const int n = 100;
    Eigen::VectorXd sine(n);
    for (int k = 0; k < n; ++k) sine[k] = std::sin(2.0 * std::numbers::pi * k / (n - 1.0));
    const auto peaks = find_peaks(sine, 1);
    REQUIRE(peaks.size() == 2);
    CHECK(std::abs(peaks[0] - 25) <= 1);  // maximum near t=0.25
    CHECK(std::abs(peaks[1] - 74) <= 1);  // minimum near t=0.75

    Eigen::VectorXd plateau(5);
    plateau << 0, 1, 1, 1, 0;
    CHECK(find_peaks(plateau, 1).empty());

    // second pass keeps only the extrema of the extremal subsequence
    Eigen::VectorXd wiggly(9);
    wiggly << 0, 2, 1, 5, 1, 3, 0, 1, 0;
    const auto pass1 = find_peaks(wiggly, 1);
    CHECK(pass1 == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
    const auto pass2 = find_peaks(wiggly, 2);
    for (int idx : pass2) CHECK(std::find(pass1.begin(), pass1.end(), idx) != pass1.end());
    CHECK(pass2 == std::vector<int>{2, 3, 4, 5, 6});
}

TEST_CASE("column normalization") {
    Eigen::MatrixXd X(4, 2);
    X << 2, 1, 2, 0, 2, 0, 2, 0;
    Eigen::MatrixXd y(4, 1);
    y << 3, 0, 0, 0;
    const NormalizedData nd = scale_and_normalize(X, y);
    CHECK(nd.pair.nx[0] == doctest::Approx(0.25));  // constant 2 over n=4, norm 4
    CHECK(nd.pair.nx[1] == doctest::Approx(1.0));
    CHECK(nd.pair.ny[0] == doctest::Approx(1.0 / 3.0));
    for (int c = 0; c < 2; ++c) CHECK(nd.X.col(c).norm() == doctest::Approx(1.0).epsilon(1e-14));
    // round trip
    Eigen::MatrixXd back = nd.X;
    for (int c = 0; c < 2; ++c) back.col(c) /= nd.pair.nx[c];
    CHECK((back - X).cwiseAbs().maxCoeff() < 1e-14);

    Eigen::MatrixXd Xz = X;
    Xz.col(1).setZero();
    CHECK_THROWS_WITH_AS(static_cast<void>(scale_and_normalize(Xz, y)),
                         doctest::Contains("column 1"), std::invalid_argument);
}
