#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spcrsvd/kernels.hpp"

namespace spcrsvd {

enum class Algorithm { ADMM, LADMM };

/// Centered (optionally standardized) design matrix plus the transform
/// needed to apply the same preprocessing to new data.
struct Dataset {
    MatrixXd X;               // n x p, columns centered
    VectorXd y;               // n, not centered (intercept absorbs the mean)
    VectorXd column_means;    // p
    VectorXd column_scales;   // p, all 1 when standardize = false
    double y_mean = 0.0;
    bool standardized = false;
    std::vector<Eigen::Index> degenerate_columns;  // constant columns, scale left at 1

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index p() const { return X.cols(); }

    /// Applies the stored centering/scaling to new raw covariates.
    MatrixXd transform(const MatrixXd& raw) const;
};

struct FitConfig {
    int k = 1;
    double w = 0.1;
    double lambda_V = 0.0;
    double lambda_beta = 0.0;
    double rho1 = 1.0;
    double rho2 = 1.0;
    double rho3 = 1.0;  // beta-consensus penalty, ADMM only
    int max_iter = 2000;
    double tol_abs = 1e-5;
    double tol_rel = 1e-4;
    Algorithm algorithm = Algorithm::ADMM;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ConvergenceReport {
    int iterations = 0;
    std::vector<double> primal_residuals;
    std::vector<double> dual_residuals;
    std::vector<double> objective_trace;
    bool converged = false;
    int degenerate_iterates = 0;
};

/// Fitted SPCRsvd model. V is the orthonormal-column copy, V_sparse the
/// soft-thresholded copy V0, V_pred the copy inside the regression loss
/// (V1 for ADMM, V0 for LADMM) used for prediction.
struct SpcrsvdModel {
    Algorithm algorithm = Algorithm::ADMM;
    double intercept = 0.0;
    VectorXd beta;              // k
    VectorXd beta_sparse;       // k, soft-thresholded copy (bold beta_0)
    MatrixXd V;                 // p x k, orthonormal columns
    MatrixXd V_sparse;          // p x k
    MatrixXd V_pred;            // p x k
    MatrixXd Z;                 // n x k
    VectorXd composite_coefficients;  // p, = V_sparse * beta
    ConvergenceReport diagnostics;
};

/// Centers columns of raw_X (and scales to unit sample sd when standardize
/// is set); y is left uncentered. Constant columns get scale 1 and are
/// recorded as degenerate.
Dataset preprocess(const MatrixXd& raw_X, const VectorXd& raw_y, bool standardize);

/// Eq.-(6) objective at an arbitrary candidate point.
double objective(const Dataset& d, double intercept, const VectorXd& beta,
                 const MatrixXd& Z, const MatrixXd& V, const FitConfig& cfg);

/// Objective of a fitted model, evaluated at the sparse copies.
double model_objective(const Dataset& d, const SpcrsvdModel& m, const FitConfig& cfg);

/// intercept + X_new * V_pred * beta, after applying the stored transform.
VectorXd predict(const SpcrsvdModel& m, const MatrixXd& X_new_raw, const Dataset& d);

/// Dispatches to fit_admm / fit_ladmm by cfg.algorithm.
SpcrsvdModel fit(const Dataset& d, const FitConfig& cfg);

}  // namespace spcrsvd
