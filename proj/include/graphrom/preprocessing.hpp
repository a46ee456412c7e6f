#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace graphrom {

/// Named time-series columns over a strictly increasing time axis (seconds).
struct TimeSeries {
    std::vector<double> t;
    std::vector<std::string> names;
    std::vector<Eigen::VectorXd> columns;

    void validate() const;
    int length() const { return static_cast<int>(t.size()); }
    int column_index(const std::string& name) const;
    const Eigen::VectorXd& column(const std::string& name) const;
};

/// Diagonal column scales from normalization; coefficients map back through
/// gamma = N_X gamma_tilde / N_y.
struct NormalizationPair {
    Eigen::VectorXd nx;
    Eigen::VectorXd ny;
};

enum class ColumnNorm { L2, MaxAbs };

/// Truncated, renormalized Gaussian smoothing applied `passes` times to every
/// column. Near the boundary the kernel is renormalized over its valid
/// support rather than padding the series.
TimeSeries gaussian_filter(const TimeSeries& series, int window, double sigma, int passes);

/// Backward difference d_k = (v_k - v_{k-1}) / (t_k - t_{k-1}); output aligned
/// to t[1:].
TimeSeries backward_euler_derivative(const TimeSeries& series, const std::string& column);

/// Strict local extrema (maxima and minima). Each pass beyond the first
/// re-applies peak finding to the subsequence of surviving extremal values,
/// mapped back to original indices. Endpoints are never selected; plateaus
/// yield no peak.
std::vector<int> find_peaks(const Eigen::VectorXd& values, int passes);

/// Scale every column of X and y to unit norm over the n samples; returns the
/// diagonal scales.
struct NormalizedData {
    Eigen::MatrixXd X;
    Eigen::MatrixXd y;
    NormalizationPair pair;
};
NormalizedData scale_and_normalize(const Eigen::MatrixXd& X, const Eigen::MatrixXd& y,
                                   ColumnNorm norm = ColumnNorm::L2);

} // namespace graphrom
