#include "graphrom/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "graphrom/detail/reduction.hpp"

namespace graphrom {

void SolverSpec::validate() const {
    if (lambda < 0.0 || !std::isfinite(lambda))
        throw std::invalid_argument("solver: lambda must be finite and >= 0");
    if (kind == SolverKind::OLS && lambda != 0.0)
        throw std::invalid_argument("solver: ols takes no lambda");
    if (lambda_cv) {
        if (kind == SolverKind::OLS)
            throw std::invalid_argument("solver: lambda=cv requires ridge or lasso");
        if (cv_grid.empty())
            throw std::invalid_argument("solver: lambda=cv requires a non-empty grid");
        for (double l : cv_grid)
            if (l < 0.0 || !std::isfinite(l))
                throw std::invalid_argument("solver: cv grid values must be finite and >= 0");
    }
}

void LossSpec::validate() const {
    if (w2 < 0.0 || w1 < 0.0 || winf < 0.0)
        throw std::invalid_argument("loss: weights must be >= 0");
    if (w2 == 0.0 && w1 == 0.0 && winf == 0.0)
        throw std::invalid_argument("loss: at least one weight must be > 0");
    if (peak_passes < 1) throw std::invalid_argument("loss: peak_passes must be >= 1");
}

namespace {

struct Svd {
    Eigen::MatrixXd U, V;
    Eigen::VectorXd sigma;
};

Svd thin_svd(const Eigen::MatrixXd& X) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
}

} // namespace

Eigen::VectorXd ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int* rank_out) {
    if (X.rows() != y.size()) throw std::invalid_argument("ols_fit: row count mismatch");
    const Svd s = thin_svd(X);
    const double cutoff = s.sigma.size() ? 1e-12 * s.sigma[0] : 0.0;
    Eigen::VectorXd uty = s.U.transpose() * y;
    int rank = 0;
    for (Eigen::Index k = 0; k < s.sigma.size(); ++k) {
        if (s.sigma[k] > cutoff) {
            uty[k] /= s.sigma[k];
            ++rank;
        } else {
            uty[k] = 0.0;
        }
    }
    if (rank_out) *rank_out = rank;
    return s.V * uty;
}

Eigen::VectorXd ridge_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda) {
    if (X.rows() != y.size()) throw std::invalid_argument("ridge_fit: row count mismatch");
    if (lambda < 0.0) throw std::invalid_argument("ridge_fit: lambda must be >= 0");
    if (lambda == 0.0) return ols_fit(X, y);
    const Svd s = thin_svd(X);
    Eigen::VectorXd uty = s.U.transpose() * y;
    for (Eigen::Index k = 0; k < s.sigma.size(); ++k)
        uty[k] *= s.sigma[k] / (s.sigma[k] * s.sigma[k] + lambda);
    return s.V * uty;
}

LassoResult lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda) {
    if (X.rows() != y.size()) throw std::invalid_argument("lasso_fit: row count mismatch");
    if (lambda < 0.0) throw std::invalid_argument("lasso_fit: lambda must be >= 0");
    const Eigen::Index P = X.cols();
    Eigen::VectorXd norm2(P);
    for (Eigen::Index j = 0; j < P; ++j) norm2[j] = X.col(j).squaredNorm();

    LassoResult res;
    res.coefficients = Eigen::VectorXd::Zero(P);
    Eigen::VectorXd r = y;  // residual y - X g
    const double thresh = lambda / 2.0;
    constexpr double tol = 1e-10;
    constexpr int max_sweeps = 100000;
    for (res.sweeps = 1; res.sweeps <= max_sweeps; ++res.sweeps) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < P; ++j) {
            if (norm2[j] == 0.0) continue;
            const double gj = res.coefficients[j];
            const double rho = X.col(j).dot(r) + norm2[j] * gj;
            double gnew = 0.0;
            if (rho > thresh)
                gnew = (rho - thresh) / norm2[j];
            else if (rho < -thresh)
                gnew = (rho + thresh) / norm2[j];
            if (gnew != gj) {
                r -= X.col(j) * (gnew - gj);
                res.coefficients[j] = gnew;
                max_change = std::max(max_change, std::abs(gnew - gj));
            }
        }
        if (max_change < tol) {
            res.converged = true;
            return res;
        }
    }
    res.sweeps = max_sweeps;
    res.converged = false;
    return res;
}

Eigen::VectorXd solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const SolverSpec& solver, double lambda) {
    switch (solver.kind) {
        case SolverKind::OLS: return ols_fit(X, y);
        case SolverKind::Ridge: return ridge_fit(X, y, lambda);
        case SolverKind::Lasso: return lasso_fit(X, y, lambda).coefficients;
    }
    throw std::logic_error("solve: unknown solver kind");
}

double weighted_loss(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat,
                     const LossSpec& spec, bool* empty_peaks_warning) {
    if (y.size() != yhat.size()) throw std::invalid_argument("weighted_loss: size mismatch");
    if (y.size() == 0) throw std::invalid_argument("weighted_loss: empty data");
    spec.validate();
    if (empty_peaks_warning) *empty_peaks_warning = false;

    const Eigen::Index n = y.size();
    std::vector<double> sq(static_cast<std::size_t>(n));
    double linf = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double e = y[k] - yhat[k];
        sq[static_cast<std::size_t>(k)] = e * e;
        linf = std::max(linf, std::abs(e));
    }
    const double l2 = std::sqrt(detail::pairwise_sum(sq) / static_cast<double>(n));

    double l1 = 0.0;
    if (spec.w1 > 0.0) {
        std::vector<int> peaks;
        if (n >= 3) peaks = find_peaks(y, spec.peak_passes);
        if (peaks.empty()) {
            if (empty_peaks_warning) *empty_peaks_warning = true;
        } else {
            std::vector<double> abse(peaks.size());
            for (std::size_t m = 0; m < peaks.size(); ++m)
                abse[m] = std::abs(y[peaks[m]] - yhat[peaks[m]]);
            l1 = detail::pairwise_sum(abse) / static_cast<double>(peaks.size());
        }
    }
    return spec.w2 * l2 + spec.w1 * l1 + spec.winf * linf;
}

CvResult loo_cross_validate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const SolverSpec& solver, const LossSpec& loss) {
    solver.validate();
    if (!solver.lambda_cv) throw std::invalid_argument("loo_cross_validate: solver has no cv grid");
    const Eigen::Index n = X.rows();
    if (n < 2) throw std::invalid_argument("loo_cross_validate: need at least 2 samples");

    CvResult result;
    result.best_lambda = solver.cv_grid.front();
    double best = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd Xf(n - 1, X.cols());
    Eigen::VectorXd yf(n - 1);
    for (double lambda : solver.cv_grid) {
        Eigen::VectorXd yhat(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            Xf.topRows(i) = X.topRows(i);
            Xf.bottomRows(n - 1 - i) = X.bottomRows(n - 1 - i);
            yf.head(i) = y.head(i);
            yf.tail(n - 1 - i) = y.tail(n - 1 - i);
            const Eigen::VectorXd g = solve(Xf, yf, solver, lambda);
            yhat[i] = X.row(i).dot(g);
        }
        const double score = weighted_loss(y, yhat, loss);
        result.table.push_back({lambda, score});
        if (score < best || (score == best && lambda > result.best_lambda)) {
            best = score;
            result.best_lambda = lambda;
        }
    }
    return result;
}

namespace {

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const std::vector<int>& cols) {
    Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = X.col(cols[c]);
    return out;
}

double rss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& g) {
    const Eigen::VectorXd r = y - X * g;
    std::vector<double> sq(static_cast<std::size_t>(r.size()));
    for (Eigen::Index k = 0; k < r.size(); ++k) sq[static_cast<std::size_t>(k)] = r[k] * r[k];
    return detail::pairwise_sum(sq);
}

} // namespace

StepwiseTrace stepwise_backward(OperatorBasis& basis, const Eigen::VectorXd& y,
                                const SolverSpec& solver, const LossSpec& loss,
                                const StepwiseStop& stop) {
    solver.validate();
    loss.validate();
    const Eigen::Index n = basis.X.rows();
    const int P = basis.columns();
    if (y.size() != n) throw std::invalid_argument("stepwise: target length mismatch");
    if (stop.min_terms < 1) throw std::invalid_argument("stepwise: min_terms must be >= 1");

    // Fixed columns carry unnormalized coefficient 1; the solver fits the free
    // columns against the residual target.
    Eigen::VectorXd y_fixed = Eigen::VectorXd::Zero(n);
    std::vector<int> free_cols;
    for (int c = 0; c < P; ++c) {
        if (basis.fixed[c])
            y_fixed += basis.X.col(c);
        else
            free_cols.push_back(c);
    }
    if (free_cols.empty()) throw std::invalid_argument("stepwise: no free columns to fit");
    const Eigen::VectorXd resid = y - y_fixed;

    basis.col_scale.resize(P);
    for (int c = 0; c < P; ++c) {
        const double s = basis.X.col(c).norm();
        basis.col_scale[c] = (s == 0.0) ? 1.0 : 1.0 / s;
        if (s == 0.0 && !basis.fixed[c])
            throw std::invalid_argument("stepwise: zero design column '" +
                                        basis.descriptors[c].name() + "'");
    }
    const double rnorm = resid.norm();
    basis.target_scale = (rnorm == 0.0) ? 1.0 : 1.0 / rnorm;

    Eigen::MatrixXd Xn(n, P);
    for (int c = 0; c < P; ++c) Xn.col(c) = basis.X.col(c) * basis.col_scale[c];
    const Eigen::VectorXd rn = resid * basis.target_scale;

    StepwiseTrace trace;
    std::vector<int> active = free_cols;
    int iteration = 0;
    while (true) {
        const Eigen::MatrixXd Xa = select_columns(Xn, active);

        double lambda = solver.lambda;
        if (solver.lambda_cv) lambda = loo_cross_validate(Xa, rn, solver, loss).best_lambda;

        int rank = 0;
        Eigen::VectorXd g;
        if (solver.kind == SolverKind::OLS)
            g = ols_fit(Xa, rn, &rank);
        else
            g = solve(Xa, rn, solver, lambda);
        trace.solver_rank = (solver.kind == SolverKind::OLS) ? rank : static_cast<int>(active.size());

        StepwiseRecord rec;
        rec.iteration = iteration;
        rec.active_terms = static_cast<int>(active.size());
        rec.lambda = lambda;
        rec.active = active;
        rec.coefficients = Eigen::VectorXd::Zero(P);
        for (std::size_t c = 0; c < active.size(); ++c)
            rec.coefficients[active[c]] = g[static_cast<Eigen::Index>(c)];
        for (int c = 0; c < P; ++c)
            if (basis.fixed[c]) rec.coefficients[c] = basis.target_scale / basis.col_scale[c];

        // losses in the unnormalized frame
        const Eigen::VectorXd yhat = predict_unnormalized(basis, rec, y_fixed);
        {
            LossSpec only2 = loss;
            only2.w1 = 0.0;
            only2.winf = 0.0;
            only2.w2 = 1.0;
            rec.loss_l2 = weighted_loss(y, yhat, only2);
            LossSpec only1 = loss;
            only1.w2 = 0.0;
            only1.winf = 0.0;
            only1.w1 = 1.0;
            rec.loss_l1 = weighted_loss(y, yhat, only1);
            rec.loss_total = weighted_loss(y, yhat, loss);
        }

        const double rss_with = rss(Xa, rn, g);
        const int p_active = static_cast<int>(active.size());
        const bool can_stop = p_active <= stop.min_terms;
        if (can_stop) {
            trace.records.push_back(std::move(rec));
            break;
        }

        const double denom = (n > p_active) ? rss_with / static_cast<double>(n - p_active) : 0.0;
        const bool fallback = !(denom > 0.0);
        rec.f_fallback = fallback;

        int worst = -1;
        double worst_score = std::numeric_limits<double>::infinity();
        std::string worst_name;
        for (std::size_t c = 0; c < active.size(); ++c) {
            std::vector<int> reduced = active;
            reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(c));
            const Eigen::MatrixXd Xr = select_columns(Xn, reduced);
            const Eigen::VectorXd gr = solve(Xr, rn, solver, lambda);
            double score;
            if (fallback) {
                StepwiseRecord tmp = rec;
                tmp.active = reduced;
                tmp.coefficients = Eigen::VectorXd::Zero(P);
                for (std::size_t m = 0; m < reduced.size(); ++m)
                    tmp.coefficients[reduced[m]] = gr[static_cast<Eigen::Index>(m)];
                for (int cc = 0; cc < P; ++cc)
                    if (basis.fixed[cc]) tmp.coefficients[cc] = basis.target_scale / basis.col_scale[cc];
                score = weighted_loss(y, predict_unnormalized(basis, tmp, y_fixed), loss) -
                        rec.loss_total;
            } else {
                score = (rss(Xr, rn, gr) - rss_with) / denom;
            }
            const std::string cname = basis.descriptors[active[c]].name();
            if (score < worst_score || (score == worst_score && cname > worst_name)) {
                worst_score = score;
                worst = static_cast<int>(c);
                worst_name = cname;
            }
        }

        if (!fallback && stop.f_threshold && worst_score >= *stop.f_threshold) {
            trace.records.push_back(std::move(rec));
            break;
        }

        rec.removed = worst_name;
        rec.f_statistic = worst_score;
        trace.records.push_back(std::move(rec));
        active.erase(active.begin() + worst);
        ++iteration;
    }

    const StepwiseRecord& last = trace.records.back();
    trace.final_active = last.active;
    trace.final_coefficients_unnormalized = Eigen::VectorXd::Zero(P);
    for (int c : last.active)
        trace.final_coefficients_unnormalized[c] =
            last.coefficients[c] * basis.col_scale[c] / basis.target_scale;
    for (int c = 0; c < P; ++c)
        if (basis.fixed[c]) trace.final_coefficients_unnormalized[c] = 1.0;
    return trace;
}

Eigen::VectorXd predict_unnormalized(const OperatorBasis& basis, const StepwiseRecord& record,
                                     const Eigen::VectorXd& y_fixed_part) {
    Eigen::VectorXd yhat = y_fixed_part;
    for (int c : record.active)
        yhat += basis.X.col(c) *
                (record.coefficients[c] * basis.col_scale[c] / basis.target_scale);
    return yhat;
}

} // namespace graphrom
