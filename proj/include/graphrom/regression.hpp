#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "graphrom/operator_basis.hpp"
#include "graphrom/preprocessing.hpp"

namespace graphrom {

enum class SolverKind { OLS, Ridge, Lasso };
enum class SolverBackend { LeastSquares, Svd, PseudoInverse };

struct SolverSpec {
    SolverKind kind = SolverKind::OLS;
    double lambda = 0.0;
    bool lambda_cv = false;            ///< pick lambda by leave-one-out CV
    std::vector<double> cv_grid;
    SolverBackend backend = SolverBackend::Svd;

    void validate() const;
};

/// Weighted multi-norm loss. L2 is the RMS over the full domain, L1 the mean
/// absolute error over the peak set of the data, Linf the max absolute error.
struct LossSpec {
    double w2 = 1.0;
    double w1 = 0.0;
    double winf = 0.0;
    int peak_passes = 1;

    void validate() const;
};

/// Minimum-norm least squares via SVD with singular-value cutoff
/// 1e-12 * sigma_max. Reports the effective rank through `rank_out`.
Eigen::VectorXd ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        int* rank_out = nullptr);

/// Ridge solution through SVD filter factors sigma/(sigma^2 + lambda);
/// lambda = 0 reproduces OLS.
Eigen::VectorXd ridge_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda);

struct LassoResult {
    Eigen::VectorXd coefficients;
    int sweeps = 0;
    bool converged = true;
};

/// Cyclic coordinate descent with soft-threshold updates on the objective
/// ||y - X g||^2 + lambda * ||g||_1.
LassoResult lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda);

Eigen::VectorXd solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const SolverSpec& solver, double lambda);

double weighted_loss(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat,
                     const LossSpec& spec, bool* empty_peaks_warning = nullptr);

struct CvEntry {
    double lambda = 0.0;
    double mean_loss = 0.0;
};

struct CvResult {
    double best_lambda = 0.0;
    std::vector<CvEntry> table;
};

/// Leave-one-out cross validation: the per-lambda score is the LossSpec
/// evaluated over the vector of held-out predictions assembled from all n
/// single-point folds. Ties break toward larger lambda.
CvResult loo_cross_validate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const SolverSpec& solver, const LossSpec& loss);

struct StepwiseRecord {
    int iteration = 0;
    int active_terms = 0;
    std::string removed;  ///< descriptor removed at the end of this iteration
    double f_statistic = 0.0;
    double loss_total = 0.0;
    double loss_l2 = 0.0;
    double loss_l1 = 0.0;
    double lambda = 0.0;
    bool f_fallback = false;  ///< loss-increase ranking used (degenerate F denominator)
    Eigen::VectorXd coefficients;  ///< normalized frame, full column layout
    std::vector<int> active;       ///< free columns fitted this iteration (before removal)
};

struct StepwiseStop {
    int min_terms = 1;
    std::optional<double> f_threshold;
};

struct StepwiseTrace {
    std::vector<StepwiseRecord> records;
    Eigen::VectorXd final_coefficients_unnormalized;  ///< full column layout
    std::vector<int> final_active;
    int solver_rank = 0;
};

/// Backwards stepwise regression: repeatedly refit, score every removable
/// active term with the nested-model F statistic, and drop the least
/// significant. Fixed basis columns are pinned to coefficient 1 in the
/// unnormalized frame and are never removal candidates.
StepwiseTrace stepwise_backward(OperatorBasis& basis, const Eigen::VectorXd& y,
                                const SolverSpec& solver, const LossSpec& loss,
                                const StepwiseStop& stop);

/// Predictions of a stepwise result on the basis it was fitted to, in the
/// unnormalized frame, using the coefficient snapshot of one trace record.
Eigen::VectorXd predict_unnormalized(const OperatorBasis& basis, const StepwiseRecord& record,
                                     const Eigen::VectorXd& y_fixed_part);

} // namespace graphrom
