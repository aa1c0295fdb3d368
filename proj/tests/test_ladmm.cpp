#include <doctest.h>

#include "spcrsvd/admm.hpp"
#include "spcrsvd/ladmm.hpp"
#include "test_util.hpp"

using namespace spcrsvd;
using testutil::kron;
using testutil::make_dataset;
using testutil::random_matrix;
using testutil::random_orthonormal;
using testutil::random_vector;

namespace {

struct Fixture {
    Dataset d;
    FitConfig cfg;
    LadmmWork work;
    LadmmState s;

    Fixture(int n, int p, int k, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        d = preprocess(random_matrix(n, p, rng), random_vector(n, rng), false);
        cfg.k = k;
        cfg.w = 0.3;
        cfg.lambda_V = 0.2;
        cfg.lambda_beta = 0.1;
        work = LadmmWork::build(d);
        s = ladmm::initialize(d, cfg);
        s.beta = random_vector(k, rng);
        s.beta0_vec = random_vector(k, rng);
        s.lambda_vec = 0.1 * random_vector(k, rng);
        s.Lambda = 0.1 * random_matrix(p, k, rng);
        s.V0 = random_matrix(p, k, rng);
        s.intercept = 0.4;
        s.nu = std::max(s.beta.squaredNorm() * work.sigma_max_sq, kNuFloor);
    }
};

// First-order model of the regression loss around V0_tilde with curvature nu:
// f(t) + <grad f(t), V0 - t> + (nu/n) ||V0 - t||^2 plus the untouched terms.
double surrogate(const Fixture& f, const MatrixXd& v0, const MatrixXd& v0_tilde) {
    const double n = double(f.d.n());
    VectorXd ystar = f.d.y - VectorXd::Constant(f.d.n(), f.s.intercept);
    double f_tilde = (ystar - f.d.X * v0_tilde * f.s.beta).squaredNorm() / n;
    MatrixXd grad = (2.0 / n) * (f.work.XtX * v0_tilde * f.s.beta * f.s.beta.transpose()
                                 - f.d.X.transpose() * ystar * f.s.beta.transpose());
    MatrixXd delta = v0 - v0_tilde;
    return f_tilde + (grad.array() * delta.array()).sum() + (f.s.nu / n) * delta.squaredNorm()
         + 0.5 * f.cfg.rho1 * (v0 - f.s.V + f.s.Lambda).squaredNorm()
         + f.cfg.lambda_V * v0.cwiseAbs().sum();
}

// The true (unlinearized) V0 block objective.
double true_block(const Fixture& f, const MatrixXd& v0) {
    const double n = double(f.d.n());
    VectorXd ystar = f.d.y - VectorXd::Constant(f.d.n(), f.s.intercept);
    return (ystar - f.d.X * v0 * f.s.beta).squaredNorm() / n
         + 0.5 * f.cfg.rho1 * (v0 - f.s.V + f.s.Lambda).squaredNorm()
         + f.cfg.lambda_V * v0.cwiseAbs().sum();
}

}  // namespace

TEST_CASE("compute_nu basics") {
    std::mt19937_64 rng(151);
    MatrixXd x = random_matrix(10, 3, rng);
    Dataset d = make_dataset(x, random_vector(10, rng));

    CHECK(ladmm::compute_nu(VectorXd::Zero(2), d) == kNuFloor);

    // Unit beta: nu is the squared top singular value.
    ThinSvd svd = thin_svd(x);
    VectorXd e1 = VectorXd::Unit(2, 0);
    CHECK(ladmm::compute_nu(e1, d) == doctest::Approx(svd.s(0) * svd.s(0)));
}

TEST_CASE("compute_nu matches the materialized Kronecker eigenvalue") {
    std::mt19937_64 rng(157);
    MatrixXd x = random_matrix(9, 3, rng);
    Dataset d = make_dataset(x, random_vector(9, rng));
    VectorXd beta = random_vector(2, rng);
    MatrixXd xtx = x.transpose() * x;
    double direct = max_eigenvalue_sym(kron(beta * beta.transpose(), xtx));
    CHECK(ladmm::compute_nu(beta, d) == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("V update fixes orthonormal V0 when w = 0") {
    Fixture f(10, 5, 2, 163);
    std::mt19937_64 rng(164);
    f.cfg.w = 0.0;
    f.s.Lambda.setZero();
    f.s.V0 = random_orthonormal(5, 2, rng);
    MatrixXd v = ladmm::update_V(f.s, f.d, f.cfg);
    CHECK((v - f.s.V0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("V update output is orthonormal, k = 1 normalizes") {
    Fixture f2(12, 6, 1, 167);
    MatrixXd m = (f2.cfg.w / 12.0) * (f2.d.X.transpose() * f2.s.Z)
               + 0.5 * f2.cfg.rho1 * (f2.s.V0 + f2.s.Lambda);
    MatrixXd v = ladmm::update_V(f2.s, f2.d, f2.cfg);
    CHECK((v - m / m.norm()).cwiseAbs().maxCoeff() < 1e-10);

    Fixture f3(14, 6, 3, 173);
    MatrixXd v3 = ladmm::update_V(f3.s, f3.d, f3.cfg);
    CHECK((v3.transpose() * v3 - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("V0 update with beta = 0 is the exact prox up to the nu floor") {
    Fixture f(10, 4, 2, 179);
    f.s.beta.setZero();
    f.s.nu = kNuFloor;
    MatrixXd v0 = ladmm::update_V0(f.s, f.d, f.work, f.cfg);
    // Exact prox of lambda_V * |.|_1 against (rho1/2) ||V0 - V + Lambda||^2.
    MatrixXd target = f.s.V - f.s.Lambda;
    MatrixXd expected = soft_threshold(target, f.cfg.lambda_V / f.cfg.rho1);
    CHECK((v0 - expected).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("V0 update with lambda_V = 0 is the bare gradient step") {
    Fixture f(10, 4, 2, 181);
    f.cfg.lambda_V = 0.0;
    const double n = 10.0;
    VectorXd ystar = f.d.y - VectorXd::Constant(10, f.s.intercept);
    MatrixXd grad = (1.0 / n) * (f.d.X.transpose() * ystar * f.s.beta.transpose()
                                 - f.work.XtX * f.s.V0 * f.s.beta * f.s.beta.transpose())
                  + (f.s.nu / n) * f.s.V0
                  - 0.5 * f.cfg.rho1 * (f.s.Lambda - f.s.V);
    MatrixXd step = (2.0 * n / (2.0 * f.s.nu + n * f.cfg.rho1)) * grad;
    CHECK((ladmm::update_V0(f.s, f.d, f.work, f.cfg) - step).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("one linearized step decreases the majorizing surrogate") {
    for (std::uint64_t seed : {191u, 193u, 197u}) {
        Fixture f(12, 5, 2, seed);
        MatrixXd v0_old = f.s.V0;
        MatrixXd v0_new = ladmm::update_V0(f.s, f.d, f.work, f.cfg);
        CHECK(surrogate(f, v0_new, v0_old) <= surrogate(f, v0_old, v0_old) + 1e-10);
    }
}

TEST_CASE("surrogate majorizes the true loss with equality at the expansion point") {
    std::mt19937_64 rng(199);
    Fixture f(12, 5, 2, 199);
    MatrixXd v0_tilde = f.s.V0;
    CHECK(surrogate(f, v0_tilde, v0_tilde)
          == doctest::Approx(true_block(f, v0_tilde)).epsilon(1e-10));
    for (int t = 0; t < 20; ++t) {
        MatrixXd cand = v0_tilde + 0.3 * random_matrix(5, 2, rng);
        CHECK(true_block(f, cand) <= surrogate(f, cand, v0_tilde) + 1e-9);
    }
}

TEST_CASE("penalty-free full-rank fit reproduces OLS") {
    std::mt19937_64 rng(211);
    const int n = 50, p = 5;
    MatrixXd x = random_matrix(n, p, rng);
    VectorXd truth = random_vector(p, rng);
    VectorXd y = x * truth + 0.1 * random_vector(n, rng);
    Dataset d = preprocess(x, y, false);

    FitConfig cfg;
    cfg.k = p;
    cfg.w = 0.1;
    cfg.algorithm = Algorithm::LADMM;
    cfg.max_iter = 10000;
    SpcrsvdModel m = fit_ladmm(d, cfg);
    REQUIRE(m.diagnostics.converged);

    VectorXd ols = (d.X.transpose() * d.X).ldlt().solve(d.X.transpose() * d.y);
    CHECK((m.composite_coefficients - ols).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("ADMM and LADMM agree on the converged objective") {
    std::mt19937_64 rng(223);
    for (int t = 0; t < 10; ++t) {
        const int n = 30, p = 4, k = 2;
        MatrixXd x = random_matrix(n, p, rng);
        VectorXd y = x.col(0) - 0.5 * x.col(2) + 0.3 * random_vector(n, rng);
        Dataset d = preprocess(x, y, false);
        FitConfig cfg;
        cfg.k = k;
        cfg.w = 0.1;
        cfg.lambda_V = 0.05;
        cfg.lambda_beta = 0.02;
        cfg.max_iter = 5000;

        SpcrsvdModel ma = fit_admm(d, cfg);
        SpcrsvdModel ml = fit_ladmm(d, cfg);
        double oa = model_objective(d, ma, cfg);
        double ol = model_objective(d, ml, cfg);
        CHECK(std::abs(oa - ol) <= 0.05 * std::max(std::abs(oa), std::abs(ol)));
    }
}

TEST_CASE("fitted state meets the stopping rule and fixed-point check") {
    std::mt19937_64 rng(227);
    const int n = 40, p = 6, k = 2;
    MatrixXd x = random_matrix(n, p, rng);
    VectorXd y = x.col(0) + 0.5 * x.col(1) + 0.2 * random_vector(n, rng);
    Dataset d = preprocess(x, y, false);
    FitConfig cfg;
    cfg.k = k;
    cfg.w = 0.1;
    cfg.lambda_V = 0.05;
    cfg.lambda_beta = 0.02;
    cfg.algorithm = Algorithm::LADMM;
    cfg.max_iter = 10000;

    ConvergenceReport rep;
    LadmmState s = fit_ladmm_state(d, cfg, rep);
    REQUIRE(rep.converged);
    CHECK((s.V.transpose() * s.V - MatrixXd::Identity(k, k)).norm() < 1e-8);

    double eps_pri_V = std::sqrt(double(p * k)) * cfg.tol_abs
        + cfg.tol_rel * std::max(s.V.norm(), s.V0.norm());
    double eps_pri_b = std::sqrt(double(k)) * cfg.tol_abs
        + cfg.tol_rel * std::max(s.beta.norm(), s.beta0_vec.norm());
    CHECK((s.V0 - s.V).norm() <= eps_pri_V);
    CHECK((s.beta - s.beta0_vec).norm() <= eps_pri_b);

    LadmmState t = s;
    LadmmWork w = LadmmWork::build(d);
    ladmm::sweep(t, d, w, cfg);
    CHECK((t.V - s.V).norm() <= 10.0 * eps_pri_V);
    CHECK((t.V0 - s.V0).norm() <= 10.0 * eps_pri_V);
    CHECK((t.beta - s.beta).norm() <= 10.0 * eps_pri_b);
}
