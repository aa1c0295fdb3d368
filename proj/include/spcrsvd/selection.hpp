#pragma once

#include <optional>
#include <vector>

#include "spcrsvd/model.hpp"

namespace spcrsvd {

struct CvPlan {
    int K = 5;
    std::vector<double> grid_lambda_V;
    std::vector<double> grid_lambda_beta;
    std::vector<int> fold_assignment;  // per observation, in [0, K)
    std::uint64_t seed = 0;
};

/// Seeded shuffle into K folds whose sizes differ by at most one.
std::vector<int> make_fold_assignment(Eigen::Index n, int K, std::uint64_t seed);

/// 10 log-spaced values spanning [1e-3, 1e1] times max|X^T y| / n.
std::vector<double> default_lambda_grid(const Dataset& d, int count = 10);

/// Log-spaced lambda_V values spanning [1e-3, 1] times the full-shrinkage
/// point (rho1 + rho2) * max|V_svd|, where V_svd holds the top-k right
/// singular vectors. Values past that point zero the sparse loading copy
/// entirely while V stays orthonormal, so the consensus gap cannot close.
std::vector<double> loading_lambda_grid(const Dataset& d, int k, double rho1, double rho2,
                                        int count = 10);

struct CvResult {
    MatrixXd cv_surface;  // grid_lambda_V.size() x grid_lambda_beta.size()
    double best_lambda_V = 0.0;
    double best_lambda_beta = 0.0;
    SpcrsvdModel refit_model;
    CvPlan plan;
};

/// K-fold CV over the (lambda_V, lambda_beta) grid on raw (unpreprocessed)
/// data; fold preprocessing uses training-fold statistics only. Ties break
/// toward the smallest lambda_V, then smallest lambda_beta.
CvResult cross_validate(const MatrixXd& raw_X, const VectorXd& raw_y, bool standardize,
                        const FitConfig& base_cfg, const CvPlan& plan);

double mse(const VectorXd& y_true, const VectorXd& y_pred);

struct SupportRates {
    std::optional<double> tpr;  // empty when truth has no nonzeros
    std::optional<double> tnr;  // empty when truth has no zeros
};

/// Per-replicate support-recovery rates; |entry| <= zero_tol counts as zero.
SupportRates tpr_tnr(const VectorXd& estimated, const VectorXd& truth,
                     double zero_tol = 1e-8);

}  // namespace spcrsvd
