#pragma once

#include <Eigen/Dense>

#include "spcrsvd/errors.hpp"

namespace spcrsvd {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Singular values below this are treated as zero for rank decisions.
inline constexpr double kSingularValueCutoff = 1e-12;

void check_finite(const MatrixXd& m, const char* what);
void check_finite(const VectorXd& v, const char* what);

/// S(x, lambda) = sign(x) * (|x| - lambda)_+, the prox of lambda*|.|.
inline double soft_threshold(double x, double lambda) {
    double a = std::abs(x) - lambda;
    if (a <= 0.0) return 0.0;
    return x > 0.0 ? a : -a;
}

/// Elementwise soft-threshold of a matrix.
MatrixXd soft_threshold(const MatrixXd& m, double lambda);

struct ThinSvd {
    MatrixXd U;   // m x r
    VectorXd s;   // r, nonincreasing
    MatrixXd Vt;  // r x q
};

/// Thin SVD with a deterministic sign convention: the largest-magnitude
/// entry of each left singular vector is made positive.
ThinSvd thin_svd(const MatrixXd& m);

/// Nearest orthonormal-column matrix P*Q^T from the thin SVD M = P*Omega*Q^T.
/// Throws RankDeficient when a singular value falls below the cutoff
/// (the rotation is not unique there).
MatrixXd procrustes_orthogonalize(const MatrixXd& m);

/// Solves A*X = B for symmetric positive definite A via Cholesky.
MatrixXd solve_spd(const MatrixXd& a, const MatrixXd& b);

/// Largest eigenvalue of a symmetric matrix.
double max_eigenvalue_sym(const MatrixXd& a);

}  // namespace spcrsvd
