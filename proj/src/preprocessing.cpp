#include "graphrom/preprocessing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphrom {

void TimeSeries::validate() const {
    if (names.size() != columns.size())
        throw std::invalid_argument("TimeSeries: names/columns mismatch");
    const auto n = static_cast<Eigen::Index>(t.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].size() != n)
            throw std::invalid_argument("TimeSeries: column '" + names[c] + "' length mismatch");
        if (!columns[c].allFinite())
            throw std::invalid_argument("TimeSeries: non-finite value in column '" + names[c] + "'");
    }
    for (std::size_t k = 1; k < t.size(); ++k)
        if (!(t[k] > t[k - 1]))
            throw std::invalid_argument("TimeSeries: time not strictly increasing at row " +
                                        std::to_string(k));
}

int TimeSeries::column_index(const std::string& name) const {
    for (std::size_t c = 0; c < names.size(); ++c)
        if (names[c] == name) return static_cast<int>(c);
    throw std::invalid_argument("TimeSeries: missing column '" + name + "'");
}

const Eigen::VectorXd& TimeSeries::column(const std::string& name) const {
    return columns[column_index(name)];
}

TimeSeries gaussian_filter(const TimeSeries& series, int window, double sigma, int passes) {
    if (window < 1 || window % 2 == 0)
        throw std::invalid_argument("gaussian_filter: window must be odd and >= 1");
    if (window > series.length())
        throw std::invalid_argument("gaussian_filter: window longer than series");
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_filter: sigma must be > 0");
    if (passes < 0) throw std::invalid_argument("gaussian_filter: passes must be >= 0");
    if (passes == 0) return series;

    const int half = window / 2;
    Eigen::VectorXd kernel(window);
    for (int k = -half; k <= half; ++k)
        kernel[k + half] = std::exp(-0.5 * (k / sigma) * (k / sigma));

    TimeSeries out = series;
    const int n = series.length();
    for (int pass = 0; pass < passes; ++pass) {
        for (auto& col : out.columns) {
            Eigen::VectorXd filtered(n);
            for (int i = 0; i < n; ++i) {
                double acc = 0.0, norm = 0.0;
                const int lo = std::max(-half, -i);
                const int hi = std::min(half, n - 1 - i);
                for (int k = lo; k <= hi; ++k) {
                    acc += kernel[k + half] * col[i + k];
                    norm += kernel[k + half];
                }
                filtered[i] = acc / norm;
            }
            col = std::move(filtered);
        }
    }
    return out;
}

TimeSeries backward_euler_derivative(const TimeSeries& series, const std::string& column) {
    series.validate();
    const int n = series.length();
    if (n < 2) throw std::invalid_argument("backward_euler_derivative: need at least 2 samples");
    const Eigen::VectorXd& v = series.column(column);
    TimeSeries out;
    out.t.assign(series.t.begin() + 1, series.t.end());
    Eigen::VectorXd d(n - 1);
    for (int k = 1; k < n; ++k)
        d[k - 1] = (v[k] - v[k - 1]) / (series.t[k] - series.t[k - 1]);
    out.names = {"d" + column + "_dt"};
    out.columns = {std::move(d)};
    return out;
}

std::vector<int> find_peaks(const Eigen::VectorXd& values, int passes) {
    if (values.size() < 3) throw std::invalid_argument("find_peaks: need at least 3 samples");
    if (passes < 1) throw std::invalid_argument("find_peaks: passes must be >= 1");

    auto one_pass = [](const Eigen::VectorXd& v) {
        std::vector<int> idx;
        for (int k = 1; k + 1 < v.size(); ++k) {
            const bool is_max = v[k - 1] < v[k] && v[k] > v[k + 1];
            const bool is_min = v[k - 1] > v[k] && v[k] < v[k + 1];
            if (is_max || is_min) idx.push_back(k);
        }
        return idx;
    };

    std::vector<int> current(values.size());
    for (int k = 0; k < values.size(); ++k) current[k] = k;
    Eigen::VectorXd sub = values;
    for (int pass = 0; pass < passes; ++pass) {
        if (sub.size() < 3) return {};
        std::vector<int> local = one_pass(sub);
        std::vector<int> mapped(local.size());
        Eigen::VectorXd next(static_cast<Eigen::Index>(local.size()));
        for (std::size_t m = 0; m < local.size(); ++m) {
            mapped[m] = current[local[m]];
            next[static_cast<Eigen::Index>(m)] = sub[local[m]];
        }
        current = std::move(mapped);
        sub = std::move(next);
    }
    return current;
}

NormalizedData scale_and_normalize(const Eigen::MatrixXd& X, const Eigen::MatrixXd& y,
                                   ColumnNorm norm) {
    auto column_scale = [norm](const Eigen::VectorXd& col, const std::string& what, int c) {
        const double s = (norm == ColumnNorm::L2) ? col.norm() : col.cwiseAbs().maxCoeff();
        if (s == 0.0)
            throw std::invalid_argument("scale_and_normalize: zero " + what + " column " +
                                        std::to_string(c));
        return 1.0 / s;
    };
    NormalizedData out;
    out.pair.nx.resize(X.cols());
    out.pair.ny.resize(y.cols());
    out.X.resizeLike(X);
    out.y.resizeLike(y);
    for (int c = 0; c < X.cols(); ++c) {
        out.pair.nx[c] = column_scale(X.col(c), "X", c);
        out.X.col(c) = X.col(c) * out.pair.nx[c];
    }
    for (int c = 0; c < y.cols(); ++c) {
        out.pair.ny[c] = column_scale(y.col(c), "y", c);
        out.y.col(c) = y.col(c) * out.pair.ny[c];
    }
    return out;
}

} // namespace graphrom
