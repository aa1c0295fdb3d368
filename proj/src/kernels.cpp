#include "spcrsvd/kernels.hpp"

#include <cmath>

namespace spcrsvd {

void check_finite(const MatrixXd& m, const char* what) {
    if (!m.allFinite()) throw NonFiniteInput(std::string(what) + ": non-finite entries");
}

void check_finite(const VectorXd& v, const char* what) {
    if (!v.allFinite()) throw NonFiniteInput(std::string(what) + ": non-finite entries");
}

MatrixXd soft_threshold(const MatrixXd& m, double lambda) {
    MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            out(i, j) = soft_threshold(m(i, j), lambda);
    return out;
}

ThinSvd thin_svd(const MatrixXd& m) {
    check_finite(m, "thin_svd input");
    Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    ThinSvd out;
    out.U = svd.matrixU();
    out.s = svd.singularValues();
    MatrixXd v = svd.matrixV();
    // Deterministic signs: largest-magnitude entry of each left vector positive.
    for (Eigen::Index j = 0; j < out.U.cols(); ++j) {
        Eigen::Index imax = 0;
        out.U.col(j).cwiseAbs().maxCoeff(&imax);
        if (out.U(imax, j) < 0.0) {
            out.U.col(j) = -out.U.col(j);
            v.col(j) = -v.col(j);
        }
    }
    out.Vt = v.transpose();
    return out;
}

MatrixXd procrustes_orthogonalize(const MatrixXd& m) {
    if (m.rows() < m.cols())
        throw DimensionMismatch("procrustes_orthogonalize: need rows >= cols");
    ThinSvd svd = thin_svd(m);
    if (svd.s.minCoeff() < kSingularValueCutoff)
        throw RankDeficient("procrustes_orthogonalize: rank-deficient argument");
    return svd.U * svd.Vt;
}

MatrixXd solve_spd(const MatrixXd& a, const MatrixXd& b) {
    if (a.rows() != a.cols() || a.rows() != b.rows())
        throw DimensionMismatch("solve_spd: shape mismatch");
    double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * (1.0 + a.cwiseAbs().maxCoeff()))
        throw NotPositiveDefinite("solve_spd: matrix not symmetric");
    Eigen::LLT<MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("solve_spd: Cholesky factorization failed");
    return llt.solve(b);
}

double max_eigenvalue_sym(const MatrixXd& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("max_eigenvalue_sym: not square");
    check_finite(a, "max_eigenvalue_sym input");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

}  // namespace spcrsvd
