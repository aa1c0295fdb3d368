#include <doctest.h>

#include "spcrsvd/baselines.hpp"
#include "spcrsvd/kernels.hpp"
#include "test_util.hpp"

using namespace spcrsvd;
using testutil::random_matrix;
using testutil::random_vector;

namespace {

Dataset toy(Eigen::Index n, Eigen::Index p, std::uint64_t seed, VectorXd* truth = nullptr) {
    std::mt19937_64 rng(seed);
    MatrixXd x = random_matrix(n, p, rng);
    VectorXd b = random_vector(p, rng);
    VectorXd y = x * b + 0.1 * random_vector(n, rng);
    if (truth) *truth = b;
    return preprocess(x, y, false);
}

VectorXd ols(const Dataset& d) {
    return (d.X.transpose() * d.X).ldlt().solve(d.X.transpose() * d.y);
}

double rss(const Dataset& d, const BaselineModel& m) {
    VectorXd pred = VectorXd::Constant(d.n(), m.intercept) + d.X * m.coefficients;
    return (d.y - pred).squaredNorm();
}

}  // namespace

TEST_CASE("PCR with k = p reproduces OLS") {
    Dataset d = toy(40, 5, 61);
    BaselineModel m = fit_pcr(d, 5);
    CHECK((m.coefficients - ols(d)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(m.k == 5);
}

TEST_CASE("PCR on an orthogonal design keeps top-variance coordinates") {
    // Columns scaled so their sample variances are distinct; PCs align with
    // coordinates, so PCR-k equals OLS restricted to the k largest-variance
    // columns and zero elsewhere.
    std::mt19937_64 rng(67);
    const Eigen::Index n = 200, p = 4;
    // QR of [1 | G] makes columns 1..p orthonormal and exactly orthogonal to
    // the ones vector, i.e. exactly mean-centered.
    MatrixXd g(n, p + 1);
    g.col(0).setOnes();
    g.rightCols(p) = random_matrix(n, p, rng);
    Eigen::HouseholderQR<MatrixXd> qr(g);
    MatrixXd q = (qr.householderQ() * MatrixXd::Identity(n, p + 1)).rightCols(p);
    VectorXd scales(p);
    scales << 8, 4, 2, 1;
    MatrixXd x = q * scales.asDiagonal();
    VectorXd y = x.col(0) + 2.0 * x.col(2) + 0.01 * random_vector(n, rng);
    Dataset d = preprocess(x, y, false);

    BaselineModel m2 = fit_pcr(d, 2);
    // Top-2 PCs span columns 0 and 1; coefficient on columns 2, 3 must be ~0.
    CHECK(std::abs(m2.coefficients(2)) < 1e-8);
    CHECK(std::abs(m2.coefficients(3)) < 1e-8);
    // Retained coordinates carry their univariate regression coefficients.
    for (int j : {0, 1}) {
        double uni = d.X.col(j).dot(d.y) / d.X.col(j).squaredNorm();
        CHECK(std::abs(m2.coefficients(j) - uni) < 1e-8);
    }
}

TEST_CASE("PCR component count monotonically improves training RSS") {
    Dataset d = toy(60, 6, 71);
    double prev = d.y.squaredNorm();
    for (int k = 1; k <= 6; ++k) {
        double r = rss(d, fit_pcr(d, k));
        CHECK(r <= prev + 1e-9);
        prev = r;
    }
}

TEST_CASE("PLS saturation at k = p reproduces OLS") {
    Dataset d = toy(50, 4, 73);
    BaselineModel m = fit_pls(d, 4);
    CHECK_FALSE(m.stopped_early);
    CHECK((m.coefficients - ols(d)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("PLS with p = 1 is simple linear regression") {
    Dataset d = toy(30, 1, 79);
    BaselineModel m = fit_pls(d, 1);
    double slope = d.X.col(0).dot(d.y) / d.X.col(0).squaredNorm();
    CHECK(m.coefficients(0) == doctest::Approx(slope).epsilon(1e-12));
}

TEST_CASE("first PLS weight vector is proportional to X^T y") {
    Dataset d = toy(40, 5, 83);
    BaselineModel m1 = fit_pls(d, 1);
    // One-component PLS1: b = w (w^T X^T X w)^{-1} w^T X^T y with w ~ X^T y,
    // so the coefficient vector itself is proportional to X^T y.
    VectorXd xty = d.X.transpose() * d.y;
    VectorXd a = m1.coefficients / m1.coefficients.norm();
    VectorXd b = xty / xty.norm();
    CHECK(std::min((a - b).norm(), (a + b).norm()) < 1e-10);
}

TEST_CASE("PLS training RSS is monotone in k and never above PCR's") {
    Dataset d = toy(60, 6, 89);
    double prev = d.y.squaredNorm();
    for (int k = 1; k <= 6; ++k) {
        BaselineModel pls = fit_pls(d, k);
        double r = rss(d, pls);
        CHECK(r <= prev + 1e-9);
        // PLS components are chosen for covariance with y; with equal k the
        // training fit is at least as good as PCR's.
        CHECK(r <= rss(d, fit_pcr(d, k)) + 1e-9);
        prev = r;
    }
}

TEST_CASE("PLS stops early when the response is uncorrelated") {
    std::mt19937_64 rng(97);
    MatrixXd x = random_matrix(20, 3, rng);
    Dataset d = preprocess(x, VectorXd::Zero(20), false);
    BaselineModel m = fit_pls(d, 3);
    CHECK(m.stopped_early);
    CHECK(m.k < 3);
    CHECK(m.coefficients.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("baseline prediction at a zero raw row equals the full intercept") {
    std::mt19937_64 rng(101);
    MatrixXd x = random_matrix(30, 3, rng);
    VectorXd y = x * random_vector(3, rng) + VectorXd::Constant(30, 5.0);
    Dataset d = preprocess(x, y, true);
    for (BaselineKind kind : {BaselineKind::PCR, BaselineKind::PLS}) {
        BaselineModel m = kind == BaselineKind::PCR ? fit_pcr(d, 2) : fit_pls(d, 2);
        MatrixXd zero_row = MatrixXd::Zero(1, 3);
        VectorXd pred = predict_baseline(m, zero_row, d);
        // Transform maps the zero raw row to -means/scales; prediction is the
        // intercept plus the coefficient response to that shift.
        VectorXd shifted = (-d.column_means.array() / d.column_scales.array()).matrix();
        double expect = m.intercept + shifted.dot(m.coefficients);
        CHECK(pred(0) == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("baseline fit argument validation") {
    Dataset d = toy(20, 3, 103);
    CHECK_THROWS_AS(fit_pcr(d, 0), DimensionMismatch);
    CHECK_THROWS_AS(fit_pcr(d, 4), DimensionMismatch);
    CHECK_THROWS_AS(fit_pls(d, 0), DimensionMismatch);
    CHECK_THROWS_AS(fit_pls(d, 4), DimensionMismatch);
}

TEST_CASE("CV component selection recovers a low-rank truth") {
    // y depends only on the first principal direction, with strong noise on the
    // remaining coordinates; CV should avoid the saturated model.
    std::mt19937_64 rng(107);
    const Eigen::Index n = 120, p = 6;
    MatrixXd x = random_matrix(n, p, rng);
    x.col(0) *= 10.0;  // dominant variance direction
    VectorXd y = 3.0 * x.col(0) + random_vector(n, rng);
    int k_pcr = select_components_cv(x, y, false, BaselineKind::PCR, p, 5, 9);
    CHECK(k_pcr >= 1);
    CHECK(k_pcr <= int(p));
    int k_pls = select_components_cv(x, y, false, BaselineKind::PLS, p, 5, 9);
    CHECK(k_pls >= 1);
    CHECK(k_pls <= int(p));
    // Deterministic under a fixed seed.
    CHECK(select_components_cv(x, y, false, BaselineKind::PCR, p, 5, 9) == k_pcr);
}
