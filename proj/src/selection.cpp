#include "spcrsvd/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace spcrsvd {

std::vector<int> make_fold_assignment(Eigen::Index n, int K, std::uint64_t seed) {
    if (K < 2) throw FoldTooSmall("make_fold_assignment: need K >= 2");
    if (n < K) throw FoldTooSmall("make_fold_assignment: fewer observations than folds");
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> fold(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) fold[size_t(order[size_t(i)])] = int(i % K);
    return fold;
}

std::vector<double> default_lambda_grid(const Dataset& d, int count) {
    double scale = (d.X.transpose() * d.y).cwiseAbs().maxCoeff() / double(d.n());
    if (scale <= 0.0) scale = 1.0;
    std::vector<double> grid(static_cast<size_t>(count));
    const double lo = std::log10(1e-3), hi = std::log10(1e1);
    for (int i = 0; i < count; ++i) {
        double t = count == 1 ? lo : lo + (hi - lo) * double(i) / double(count - 1);
        grid[size_t(i)] = scale * std::pow(10.0, t);
    }
    return grid;
}

std::vector<double> loading_lambda_grid(const Dataset& d, int k, double rho1, double rho2,
                                        int count) {
    ThinSvd svd = thin_svd(d.X);
    if (svd.s.size() < k) throw RankDeficient("loading_lambda_grid: rank below k");
    double vmax = svd.Vt.topRows(k).cwiseAbs().maxCoeff();
    double scale = (rho1 + rho2) * vmax;
    if (scale <= 0.0) scale = 1.0;
    std::vector<double> grid(static_cast<size_t>(count));
    const double lo = std::log10(1e-3), hi = 0.0;
    for (int i = 0; i < count; ++i) {
        double t = count == 1 ? lo : lo + (hi - lo) * double(i) / double(count - 1);
        grid[static_cast<size_t>(i)] = scale * std::pow(10.0, t);
    }
    return grid;
}

static void split_fold(const MatrixXd& X, const VectorXd& y,
                       const std::vector<int>& fold, int hold,
                       MatrixXd& Xtr, VectorXd& ytr, MatrixXd& Xte, VectorXd& yte) {
    const Eigen::Index n = X.rows();
    Eigen::Index nte = 0;
    for (int f : fold) nte += (f == hold);
    Xtr.resize(n - nte, X.cols());
    ytr.resize(n - nte);
    Xte.resize(nte, X.cols());
    yte.resize(nte);
    Eigen::Index it = 0, ih = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (fold[size_t(i)] == hold) {
            Xte.row(ih) = X.row(i);
            yte(ih++) = y(i);
        } else {
            Xtr.row(it) = X.row(i);
            ytr(it++) = y(i);
        }
    }
}

CvResult cross_validate(const MatrixXd& raw_X, const VectorXd& raw_y, bool standardize,
                        const FitConfig& base_cfg, const CvPlan& plan) {
    if (plan.K < 2) throw FoldTooSmall("cross_validate: need K >= 2");
    if (plan.grid_lambda_V.empty() || plan.grid_lambda_beta.empty())
        throw DimensionMismatch("cross_validate: empty grid");
    if (Eigen::Index(plan.fold_assignment.size()) != raw_X.rows())
        throw DimensionMismatch("cross_validate: fold assignment length mismatch");

    const size_t nv = plan.grid_lambda_V.size();
    const size_t nb = plan.grid_lambda_beta.size();

    // Per-fold splits and training-fold preprocessing, computed once.
    std::vector<Dataset> train(size_t(plan.K));
    std::vector<MatrixXd> Xte(size_t(plan.K));
    std::vector<VectorXd> yte(size_t(plan.K));
    for (int f = 0; f < plan.K; ++f) {
        MatrixXd Xtr;
        VectorXd ytr;
        split_fold(raw_X, raw_y, plan.fold_assignment, f, Xtr, ytr, Xte[size_t(f)], yte[size_t(f)]);
        if (Xtr.rows() < base_cfg.k + 1)
            throw FoldTooSmall("cross_validate: training fold smaller than k + 1");
        if (Xte[size_t(f)].rows() == 0)
            throw FoldTooSmall("cross_validate: empty held-out fold");
        train[size_t(f)] = preprocess(Xtr, ytr, standardize);
    }

    CvResult result;
    result.plan = plan;
    result.cv_surface = MatrixXd::Zero(Eigen::Index(nv), Eigen::Index(nb));
    double best = std::numeric_limits<double>::infinity();
    size_t bi = 0, bj = 0;
    for (size_t i = 0; i < nv; ++i) {
        for (size_t j = 0; j < nb; ++j) {
            FitConfig cfg = base_cfg;
            cfg.lambda_V = plan.grid_lambda_V[i];
            cfg.lambda_beta = plan.grid_lambda_beta[j];
            double cv = 0.0;
            for (int f = 0; f < plan.K; ++f) {
                SpcrsvdModel m = fit(train[size_t(f)], cfg);
                VectorXd pred = predict(m, Xte[size_t(f)], train[size_t(f)]);
                // Eq.-(9) fold error, normalized by the held-out fold size.
                cv += (yte[size_t(f)] - pred).squaredNorm() / double(yte[size_t(f)].size());
            }
            cv /= double(plan.K);
            result.cv_surface(Eigen::Index(i), Eigen::Index(j)) = cv;
            // Strict < keeps the least-shrinkage pair among exact ties
            // (grids are scanned in increasing lambda order).
            if (cv < best) {
                best = cv;
                bi = i;
                bj = j;
            }
        }
    }

    result.best_lambda_V = plan.grid_lambda_V[bi];
    result.best_lambda_beta = plan.grid_lambda_beta[bj];
    FitConfig cfg = base_cfg;
    cfg.lambda_V = result.best_lambda_V;
    cfg.lambda_beta = result.best_lambda_beta;
    Dataset full = preprocess(raw_X, raw_y, standardize);
    result.refit_model = fit(full, cfg);
    return result;
}

double mse(const VectorXd& y_true, const VectorXd& y_pred) {
    if (y_true.size() != y_pred.size()) throw DimensionMismatch("mse: length mismatch");
    if (y_true.size() == 0) throw DimensionMismatch("mse: empty vectors");
    return (y_true - y_pred).squaredNorm() / double(y_true.size());
}

SupportRates tpr_tnr(const VectorXd& estimated, const VectorXd& truth, double zero_tol) {
    if (estimated.size() != truth.size()) throw DimensionMismatch("tpr_tnr: length mismatch");
    int tp = 0, pos = 0, tn = 0, neg = 0;
    for (Eigen::Index j = 0; j < truth.size(); ++j) {
        bool truth_nz = std::abs(truth(j)) > zero_tol;
        bool est_nz = std::abs(estimated(j)) > zero_tol;
        if (truth_nz) {
            ++pos;
            tp += est_nz;
        } else {
            ++neg;
            tn += !est_nz;
        }
    }
    SupportRates r;
    if (pos > 0) r.tpr = double(tp) / double(pos);
    if (neg > 0) r.tnr = double(tn) / double(neg);
    return r;
}

}  // namespace spcrsvd
