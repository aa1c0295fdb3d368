#include "spcrsvd/admm.hpp"

#include <cmath>

namespace spcrsvd {

AdmmWork AdmmWork::build(const Dataset& d) {
    AdmmWork w;
    w.XtX = d.X.transpose() * d.X;
    w.Xty = d.X.transpose() * d.y;
    return w;
}

namespace admm {

AdmmState initialize(const Dataset& d, const FitConfig& cfg) {
    cfg.validate();
    const Eigen::Index n = d.n(), p = d.p();
    const int k = cfg.k;
    if (k > std::min(n, p)) throw DimensionMismatch("initialize: k exceeds min(n, p)");
    ThinSvd svd = thin_svd(d.X);
    if (svd.s.size() < k || svd.s(k - 1) < kSingularValueCutoff)
        throw RankDeficient("initialize: X has fewer than k nonzero singular values");

    AdmmState s;
    s.V = svd.Vt.topRows(k).transpose();
    s.V0 = s.V;
    s.V1 = s.V;
    s.Z = d.X * s.V;
    s.beta = VectorXd::Zero(k);
    s.beta0_vec = VectorXd::Zero(k);
    s.intercept = d.y.mean();
    s.Lambda1 = MatrixXd::Zero(p, k);
    s.Lambda2 = MatrixXd::Zero(p, k);
    s.lambda3 = VectorXd::Zero(k);
    return s;
}

// Orthonormal k x k matrix whose first column is q (Householder reflection).
static MatrixXd basis_with_first_column(const VectorXd& q) {
    const Eigen::Index k = q.size();
    VectorXd u = VectorXd::Unit(k, 0) - q;
    double un = u.norm();
    if (un < 1e-14) return MatrixXd::Identity(k, k);
    u /= un;
    return MatrixXd::Identity(k, k) - 2.0 * u * u.transpose();
}

MatrixXd update_V1(const AdmmState& s, const Dataset& d, const AdmmWork& w,
                   const FitConfig& cfg) {
    const double n = double(d.n());
    VectorXd Xtystar = w.Xty - s.intercept * (d.X.colwise().sum().transpose());
    MatrixXd R = (1.0 / n) * Xtystar * s.beta.transpose()
               + 0.5 * cfg.rho2 * (s.V0 - s.Lambda2);
    const double b2 = s.beta.squaredNorm();
    if (b2 == 0.0) return (2.0 / cfg.rho2) * R;

    // In the eigenbasis of beta beta^T the system decouples columnwise:
    // one column sees (b2/n) X^T X + (rho2/2) I, the rest are pure scaling.
    MatrixXd Q = basis_with_first_column(s.beta / std::sqrt(b2));
    MatrixXd Rt = R * Q;
    MatrixXd Vt(Rt.rows(), Rt.cols());
    MatrixXd A = (b2 / n) * w.XtX
               + 0.5 * cfg.rho2 * MatrixXd::Identity(d.p(), d.p());
    Vt.col(0) = solve_spd(A, Rt.col(0));
    if (Rt.cols() > 1)
        Vt.rightCols(Rt.cols() - 1) = (2.0 / cfg.rho2) * Rt.rightCols(Rt.cols() - 1);
    return Vt * Q.transpose();
}

MatrixXd update_V(const AdmmState& s, const Dataset& d, const FitConfig& cfg) {
    MatrixXd M = (cfg.w / double(d.n())) * (d.X.transpose() * s.Z)
               + 0.5 * cfg.rho1 * (s.V0 - s.Lambda1);
    return procrustes_orthogonalize(M);
}

MatrixXd update_V0(const AdmmState& s, const FitConfig& cfg) {
    const double denom = cfg.rho1 + cfg.rho2;
    MatrixXd blend = (cfg.rho1 * (s.V + s.Lambda1) + cfg.rho2 * (s.V1 + s.Lambda2)) / denom;
    return soft_threshold(blend, cfg.lambda_V / denom);
}

MatrixXd update_Z(const AdmmState& s, const Dataset& d) {
    return d.X * s.V;
}

VectorXd update_beta(const AdmmState& s, const Dataset& d, const AdmmWork& w,
                     const FitConfig& cfg) {
    const double n = double(d.n());
    const Eigen::Index k = s.beta.size();
    MatrixXd XV1 = d.X * s.V1;
    MatrixXd A = (1.0 / n) * XV1.transpose() * XV1
               + 0.5 * cfg.rho3 * MatrixXd::Identity(k, k);
    VectorXd ystar = d.y - VectorXd::Constant(d.n(), s.intercept);
    VectorXd rhs = (1.0 / n) * XV1.transpose() * ystar
                 + 0.5 * cfg.rho3 * (s.beta0_vec - s.lambda3);
    return solve_spd(A, rhs);
}

VectorXd update_beta0_vec(const AdmmState& s, const FitConfig& cfg) {
    VectorXd out(s.beta.size());
    const double t = cfg.lambda_beta / cfg.rho3;
    for (Eigen::Index j = 0; j < out.size(); ++j)
        out(j) = soft_threshold(s.beta(j) + s.lambda3(j), t);
    return out;
}

double update_intercept(const AdmmState& s, const Dataset& d) {
    return (d.y - d.X * (s.V1 * s.beta)).mean();
}

void update_duals(AdmmState& s) {
    s.Lambda1 += s.V - s.V0;
    s.Lambda2 += s.V1 - s.V0;
    s.lambda3 += s.beta - s.beta0_vec;
}

void sweep(AdmmState& s, const Dataset& d, const AdmmWork& w, const FitConfig& cfg) {
    s.V1 = update_V1(s, d, w, cfg);
    try {
        s.V = update_V(s, d, cfg);
    } catch (const RankDeficient&) {
        ++s.degenerate_iterates;  // keep previous V
    }
    s.V0 = update_V0(s, cfg);
    s.Z = update_Z(s, d);
    s.beta = update_beta(s, d, w, cfg);
    s.beta0_vec = update_beta0_vec(s, cfg);
    s.intercept = update_intercept(s, d);
    update_duals(s);
    ++s.iter;
}

}  // namespace admm

AdmmState fit_admm_state(const Dataset& d, const FitConfig& cfg, ConvergenceReport& report) {
    AdmmState s = admm::initialize(d, cfg);
    AdmmWork w = AdmmWork::build(d);
    const double spk = std::sqrt(double(d.p()) * cfg.k);
    const double sk = std::sqrt(double(cfg.k));

    report = ConvergenceReport{};
    for (int it = 0; it < cfg.max_iter; ++it) {
        MatrixXd V0_prev = s.V0;
        VectorXd b0_prev = s.beta0_vec;
        admm::sweep(s, d, w, cfg);

        double r1 = (s.V - s.V0).norm();
        double r2 = (s.V1 - s.V0).norm();
        double rb = (s.beta - s.beta0_vec).norm();
        double s1 = cfg.rho1 * (s.V0 - V0_prev).norm();
        double s2 = cfg.rho2 * (s.V0 - V0_prev).norm();
        double sb = cfg.rho3 * (s.beta0_vec - b0_prev).norm();

        double eps_pri_V = spk * cfg.tol_abs
            + cfg.tol_rel * std::max({s.V.norm(), s.V0.norm(), s.V1.norm()});
        double eps_pri_b = sk * cfg.tol_abs
            + cfg.tol_rel * std::max(s.beta.norm(), s.beta0_vec.norm());
        double eps_dual_1 = spk * cfg.tol_abs + cfg.tol_rel * cfg.rho1 * s.Lambda1.norm();
        double eps_dual_2 = spk * cfg.tol_abs + cfg.tol_rel * cfg.rho2 * s.Lambda2.norm();
        double eps_dual_b = sk * cfg.tol_abs + cfg.tol_rel * cfg.rho3 * s.lambda3.norm();

        report.primal_residuals.push_back(std::sqrt(r1 * r1 + r2 * r2 + rb * rb));
        report.dual_residuals.push_back(std::sqrt(s1 * s1 + s2 * s2 + sb * sb));
        report.objective_trace.push_back(
            objective(d, s.intercept, s.beta, s.Z, s.V0, cfg));
        report.iterations = it + 1;

        if (r1 <= eps_pri_V && r2 <= eps_pri_V && rb <= eps_pri_b &&
            s1 <= eps_dual_1 && s2 <= eps_dual_2 && sb <= eps_dual_b) {
            report.converged = true;
            break;
        }
    }
    report.degenerate_iterates = s.degenerate_iterates;
    return s;
}

SpcrsvdModel fit_admm(const Dataset& d, const FitConfig& cfg) {
    ConvergenceReport report;
    AdmmState s = fit_admm_state(d, cfg, report);
    SpcrsvdModel m;
    m.algorithm = Algorithm::ADMM;
    m.intercept = s.intercept;
    m.beta = s.beta;
    m.beta_sparse = s.beta0_vec;
    m.V = s.V;
    m.V_sparse = s.V0;
    m.V_pred = s.V1;
    m.Z = s.Z;
    m.composite_coefficients = s.V0 * s.beta;
    m.diagnostics = std::move(report);
    return m;
}

}  // namespace spcrsvd
