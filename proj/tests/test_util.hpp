#pragma once

#include <random>

#include <Eigen/Dense>

#include "spcrsvd/model.hpp"

namespace testutil {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = gauss(rng);
    return m;
}

inline VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
    return v;
}

inline MatrixXd random_spd(Eigen::Index n, std::mt19937_64& rng) {
    MatrixXd g = random_matrix(n, n, rng);
    return g.transpose() * g + MatrixXd::Identity(n, n);
}

inline MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
    MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Orthonormal columns via Householder QR of a random matrix.
inline MatrixXd random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    MatrixXd m = random_matrix(rows, cols, rng);
    Eigen::HouseholderQR<MatrixXd> qr(m);
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(rows, cols);
    return q;
}

/// Wraps X and y in a Dataset without preprocessing (identity transform).
inline spcrsvd::Dataset make_dataset(const MatrixXd& x, const VectorXd& y) {
    spcrsvd::Dataset d;
    d.X = x;
    d.y = y;
    d.column_means = VectorXd::Zero(x.cols());
    d.column_scales = VectorXd::Ones(x.cols());
    d.y_mean = y.mean();
    return d;
}

}  // namespace testutil
