#include "spcrsvd/ladmm.hpp"

#include <cmath>

namespace spcrsvd {

LadmmWork LadmmWork::build(const Dataset& d) {
    LadmmWork w;
    w.XtX = d.X.transpose() * d.X;
    w.Xty = d.X.transpose() * d.y;
    ThinSvd svd = thin_svd(d.X);
    w.sigma_max_sq = svd.s(0) * svd.s(0);
    return w;
}

namespace ladmm {

LadmmState initialize(const Dataset& d, const FitConfig& cfg) {
    cfg.validate();
    const Eigen::Index p = d.p();
    const int k = cfg.k;
    if (k > std::min(d.n(), p)) throw DimensionMismatch("initialize: k exceeds min(n, p)");
    ThinSvd svd = thin_svd(d.X);
    if (svd.s.size() < k || svd.s(k - 1) < kSingularValueCutoff)
        throw RankDeficient("initialize: X has fewer than k nonzero singular values");

    LadmmState s;
    s.V = svd.Vt.topRows(k).transpose();
    s.V0 = s.V;
    s.Z = d.X * s.V;
    s.beta = VectorXd::Zero(k);
    s.beta0_vec = VectorXd::Zero(k);
    s.intercept = d.y.mean();
    s.Lambda = MatrixXd::Zero(p, k);
    s.lambda_vec = VectorXd::Zero(k);
    s.nu = kNuFloor;
    return s;
}

double compute_nu(const VectorXd& beta, const Dataset& d) {
    ThinSvd svd = thin_svd(d.X);
    double nu = beta.squaredNorm() * svd.s(0) * svd.s(0);
    return std::max(nu, kNuFloor);
}

MatrixXd update_V(const LadmmState& s, const Dataset& d, const FitConfig& cfg) {
    // Constraint here is V0 - V + Lambda, hence the + sign.
    MatrixXd M = (cfg.w / double(d.n())) * (d.X.transpose() * s.Z)
               + 0.5 * cfg.rho1 * (s.V0 + s.Lambda);
    return procrustes_orthogonalize(M);
}

MatrixXd update_V0(const LadmmState& s, const Dataset& d, const LadmmWork& w,
                   const FitConfig& cfg) {
    const double n = double(d.n());
    VectorXd Xtystar = w.Xty - s.intercept * (d.X.colwise().sum().transpose());
    MatrixXd grad = (1.0 / n) * (Xtystar * s.beta.transpose()
                                 - w.XtX * s.V0 * (s.beta * s.beta.transpose()))
                  + (s.nu / n) * s.V0
                  - 0.5 * cfg.rho1 * (s.Lambda - s.V);
    const double scale = 2.0 * n / (2.0 * s.nu + n * cfg.rho1);
    return soft_threshold(MatrixXd(scale * grad),
                          n * cfg.lambda_V / (2.0 * s.nu + n * cfg.rho1));
}

VectorXd update_beta(const LadmmState& s, const Dataset& d, const FitConfig& cfg) {
    const double n = double(d.n());
    const Eigen::Index k = s.beta.size();
    MatrixXd XV0 = d.X * s.V0;
    MatrixXd A = (1.0 / n) * XV0.transpose() * XV0
               + 0.5 * cfg.rho2 * MatrixXd::Identity(k, k);
    VectorXd ystar = d.y - VectorXd::Constant(d.n(), s.intercept);
    VectorXd rhs = (1.0 / n) * XV0.transpose() * ystar
                 + 0.5 * cfg.rho2 * (s.beta0_vec - s.lambda_vec);
    return solve_spd(A, rhs);
}

VectorXd update_beta0_vec(const LadmmState& s, const FitConfig& cfg) {
    VectorXd out(s.beta.size());
    const double t = cfg.lambda_beta / cfg.rho2;
    for (Eigen::Index j = 0; j < out.size(); ++j)
        out(j) = soft_threshold(s.beta(j) + s.lambda_vec(j), t);
    return out;
}

double update_intercept(const LadmmState& s, const Dataset& d) {
    return (d.y - d.X * (s.V0 * s.beta)).mean();
}

void update_duals(LadmmState& s) {
    s.Lambda += s.V0 - s.V;
    s.lambda_vec += s.beta - s.beta0_vec;
}

void sweep(LadmmState& s, const Dataset& d, const LadmmWork& w, const FitConfig& cfg) {
    try {
        s.V = update_V(s, d, cfg);
    } catch (const RankDeficient&) {
        ++s.degenerate_iterates;
    }
    s.nu = std::max(s.beta.squaredNorm() * w.sigma_max_sq, kNuFloor);
    s.V0 = update_V0(s, d, w, cfg);
    s.Z = d.X * s.V;
    s.beta = update_beta(s, d, cfg);
    s.beta0_vec = update_beta0_vec(s, cfg);
    s.intercept = update_intercept(s, d);
    update_duals(s);
    ++s.iter;
}

}  // namespace ladmm

LadmmState fit_ladmm_state(const Dataset& d, const FitConfig& cfg, ConvergenceReport& report) {
    LadmmState s = ladmm::initialize(d, cfg);
    LadmmWork w = LadmmWork::build(d);
    const double spk = std::sqrt(double(d.p()) * cfg.k);
    const double sk = std::sqrt(double(cfg.k));

    report = ConvergenceReport{};
    for (int it = 0; it < cfg.max_iter; ++it) {
        MatrixXd V0_prev = s.V0;
        VectorXd b0_prev = s.beta0_vec;
        ladmm::sweep(s, d, w, cfg);

        double r1 = (s.V0 - s.V).norm();
        double rb = (s.beta - s.beta0_vec).norm();
        double s1 = cfg.rho1 * (s.V0 - V0_prev).norm();
        double sb = cfg.rho2 * (s.beta0_vec - b0_prev).norm();

        double eps_pri_V = spk * cfg.tol_abs
            + cfg.tol_rel * std::max(s.V.norm(), s.V0.norm());
        double eps_pri_b = sk * cfg.tol_abs
            + cfg.tol_rel * std::max(s.beta.norm(), s.beta0_vec.norm());
        double eps_dual_1 = spk * cfg.tol_abs + cfg.tol_rel * cfg.rho1 * s.Lambda.norm();
        double eps_dual_b = sk * cfg.tol_abs + cfg.tol_rel * cfg.rho2 * s.lambda_vec.norm();

        report.primal_residuals.push_back(std::sqrt(r1 * r1 + rb * rb));
        report.dual_residuals.push_back(std::sqrt(s1 * s1 + sb * sb));
        report.objective_trace.push_back(
            objective(d, s.intercept, s.beta, s.Z, s.V0, cfg));
        report.iterations = it + 1;

        if (r1 <= eps_pri_V && rb <= eps_pri_b && s1 <= eps_dual_1 && sb <= eps_dual_b) {
            report.converged = true;
            break;
        }
    }
    report.degenerate_iterates = s.degenerate_iterates;
    return s;
}

SpcrsvdModel fit_ladmm(const Dataset& d, const FitConfig& cfg) {
    ConvergenceReport report;
    LadmmState s = fit_ladmm_state(d, cfg, report);
    SpcrsvdModel m;
    m.algorithm = Algorithm::LADMM;
    m.intercept = s.intercept;
    m.beta = s.beta;
    m.beta_sparse = s.beta0_vec;
    m.V = s.V;
    m.V_sparse = s.V0;
    m.V_pred = s.V0;  // the copy inside the regression loss
    m.Z = s.Z;
    m.composite_coefficients = s.V0 * s.beta;
    m.diagnostics = std::move(report);
    return m;
}

}  // namespace spcrsvd
