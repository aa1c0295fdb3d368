#include "spcrsvd/model.hpp"

#include <cmath>

#include "spcrsvd/admm.hpp"
#include "spcrsvd/ladmm.hpp"

namespace spcrsvd {

void FitConfig::validate() const {
    if (k < 1) throw DimensionMismatch("FitConfig: k must be >= 1");
    if (w < 0.0 || lambda_V < 0.0 || lambda_beta < 0.0)
        throw DimensionMismatch("FitConfig: w and lambdas must be nonnegative");
    if (rho1 <= 0.0 || rho2 <= 0.0 || rho3 <= 0.0)
        throw DimensionMismatch("FitConfig: penalty parameters must be positive");
    if (tol_abs <= 0.0 || tol_rel <= 0.0)
        throw DimensionMismatch("FitConfig: tolerances must be positive");
    if (max_iter < 1) throw DimensionMismatch("FitConfig: max_iter must be >= 1");
}

MatrixXd Dataset::transform(const MatrixXd& raw) const {
    if (raw.cols() != column_means.size())
        throw DimensionMismatch("Dataset::transform: column count mismatch");
    MatrixXd out = raw.rowwise() - column_means.transpose();
    out.array().rowwise() /= column_scales.transpose().array();
    return out;
}

Dataset preprocess(const MatrixXd& raw_X, const VectorXd& raw_y, bool standardize) {
    check_finite(raw_X, "preprocess X");
    check_finite(raw_y, "preprocess y");
    const Eigen::Index n = raw_X.rows();
    const Eigen::Index p = raw_X.cols();
    if (raw_y.size() != n) throw DimensionMismatch("preprocess: X and y row counts differ");
    if (n < 2 || p < 1) throw DimensionMismatch("preprocess: need n >= 2 and p >= 1");

    Dataset d;
    d.column_means = raw_X.colwise().mean();
    d.column_scales = VectorXd::Ones(p);
    d.standardized = standardize;
    MatrixXd centered = raw_X.rowwise() - d.column_means.transpose();
    for (Eigen::Index j = 0; j < p; ++j) {
        double ss = centered.col(j).squaredNorm();
        if (ss <= 0.0) {
            d.degenerate_columns.push_back(j);
            continue;
        }
        if (standardize) {
            double sd = std::sqrt(ss / double(n - 1));
            d.column_scales(j) = sd;
            centered.col(j) /= sd;
        }
    }
    d.X = std::move(centered);
    d.y = raw_y;
    d.y_mean = raw_y.mean();
    return d;
}

double objective(const Dataset& d, double intercept, const VectorXd& beta,
                 const MatrixXd& Z, const MatrixXd& V, const FitConfig& cfg) {
    const Eigen::Index n = d.n();
    if (V.rows() != d.p() || V.cols() != beta.size() || Z.rows() != n || Z.cols() != V.cols())
        throw DimensionMismatch("objective: candidate shapes inconsistent");
    VectorXd resid = d.y - VectorXd::Constant(n, intercept) - d.X * (V * beta);
    double reg = resid.squaredNorm() / double(n);
    double pca = cfg.w * (d.X - Z * V.transpose()).squaredNorm() / double(n);
    return reg + pca + cfg.lambda_V * V.cwiseAbs().sum() + cfg.lambda_beta * beta.cwiseAbs().sum();
}

double model_objective(const Dataset& d, const SpcrsvdModel& m, const FitConfig& cfg) {
    return objective(d, m.intercept, m.beta, m.Z, m.V_sparse, cfg);
}

VectorXd predict(const SpcrsvdModel& m, const MatrixXd& X_new_raw, const Dataset& d) {
    if (X_new_raw.cols() != m.V_pred.rows())
        throw DimensionMismatch("predict: covariate count mismatch");
    MatrixXd Xt = d.transform(X_new_raw);
    return VectorXd::Constant(Xt.rows(), m.intercept) + Xt * (m.V_pred * m.beta);
}

SpcrsvdModel fit(const Dataset& d, const FitConfig& cfg) {
    return cfg.algorithm == Algorithm::ADMM ? fit_admm(d, cfg) : fit_ladmm(d, cfg);
}

}  // namespace spcrsvd
