#include "spcrsvd/baselines.hpp"

#include <cmath>
#include <limits>

#include "spcrsvd/selection.hpp"

namespace spcrsvd {

BaselineModel fit_pcr(const Dataset& d, int k) {
    if (k < 1 || k > std::min(d.n() - 1, d.p()))
        throw DimensionMismatch("fit_pcr: invalid component count");
    ThinSvd svd = thin_svd(d.X);
    if (svd.s(k - 1) < kSingularValueCutoff)
        throw RankDeficient("fit_pcr: X has fewer than k nonzero singular values");
    MatrixXd W = svd.Vt.topRows(k).transpose();  // p x k
    MatrixXd T = d.X * W;                        // scores, column means zero
    VectorXd theta = solve_spd(T.transpose() * T, MatrixXd(T.transpose() * d.y));
    BaselineModel m;
    m.kind = BaselineKind::PCR;
    m.k = k;
    m.coefficients = W * theta;
    m.intercept = d.y.mean();  // X is centered
    return m;
}

BaselineModel fit_pls(const Dataset& d, int k) {
    if (k < 1 || k > std::min(d.n() - 1, d.p()))
        throw DimensionMismatch("fit_pls: invalid component count");
    const Eigen::Index p = d.p();
    MatrixXd Xd = d.X;
    VectorXd yc = d.y.array() - d.y.mean();

    MatrixXd W(p, k), P(p, k);
    VectorXd q(k);
    int used = 0;
    for (int j = 0; j < k; ++j) {
        VectorXd w = Xd.transpose() * yc;
        double wn = w.norm();
        if (wn < 1e-12) break;  // zero covariance, stop early
        w /= wn;
        VectorXd t = Xd * w;
        double tt = t.squaredNorm();
        if (tt < 1e-24) break;
        VectorXd pj = Xd.transpose() * t / tt;
        W.col(j) = w;
        P.col(j) = pj;
        q(j) = yc.dot(t) / tt;
        Xd -= t * pj.transpose();
        ++used;
    }

    BaselineModel m;
    m.kind = BaselineKind::PLS;
    m.k = used;
    m.stopped_early = used < k;
    m.intercept = d.y.mean();
    if (used == 0) {
        m.coefficients = VectorXd::Zero(p);
        return m;
    }
    MatrixXd Wu = W.leftCols(used), Pu = P.leftCols(used);
    // B = W (P^T W)^{-1} q maps the deflated-space weights back to X.
    MatrixXd PtW = Pu.transpose() * Wu;
    m.coefficients = Wu * PtW.colPivHouseholderQr().solve(VectorXd(q.head(used)));
    return m;
}

VectorXd predict_baseline(const BaselineModel& m, const MatrixXd& X_new_raw,
                          const Dataset& d) {
    MatrixXd Xt = d.transform(X_new_raw);
    return VectorXd::Constant(Xt.rows(), m.intercept) + Xt * m.coefficients;
}

int select_components_cv(const MatrixXd& raw_X, const VectorXd& raw_y, bool standardize,
                         BaselineKind kind, int k_max, int K, std::uint64_t seed) {
    std::vector<int> fold = make_fold_assignment(raw_X.rows(), K, seed);
    double best = std::numeric_limits<double>::infinity();
    int best_k = 1;
    for (int k = 1; k <= k_max; ++k) {
        double cv = 0.0;
        bool ok = true;
        for (int f = 0; f < K && ok; ++f) {
            std::vector<Eigen::Index> tr, te;
            for (Eigen::Index i = 0; i < raw_X.rows(); ++i)
                (fold[size_t(i)] == f ? te : tr).push_back(i);
            MatrixXd Xtr(tr.size(), raw_X.cols()), Xte(te.size(), raw_X.cols());
            VectorXd ytr(tr.size()), yte(te.size());
            for (size_t i = 0; i < tr.size(); ++i) {
                Xtr.row(Eigen::Index(i)) = raw_X.row(tr[i]);
                ytr(Eigen::Index(i)) = raw_y(tr[i]);
            }
            for (size_t i = 0; i < te.size(); ++i) {
                Xte.row(Eigen::Index(i)) = raw_X.row(te[i]);
                yte(Eigen::Index(i)) = raw_y(te[i]);
            }
            if (Eigen::Index(k) > std::min<Eigen::Index>(Xtr.rows() - 1, Xtr.cols())) {
                ok = false;
                break;
            }
            Dataset dtr = preprocess(Xtr, ytr, standardize);
            try {
                BaselineModel bm = kind == BaselineKind::PCR ? fit_pcr(dtr, k) : fit_pls(dtr, k);
                cv += mse(yte, predict_baseline(bm, Xte, dtr));
            } catch (const RankDeficient&) {
                ok = false;
            }
        }
        if (!ok) break;
        cv /= double(K);
        if (cv < best) {
            best = cv;
            best_k = k;
        }
    }
    return best_k;
}

}  // namespace spcrsvd
