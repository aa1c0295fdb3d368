#pragma once

#include "spcrsvd/model.hpp"

namespace spcrsvd {

/// Two-copy consensus state: V = V0 (loadings) and beta = beta0_vec.
/// The V0 subproblem is solved by a Taylor-linearized proximal step with
/// majorization constant nu.
struct LadmmState {
    MatrixXd V;          // p x k, orthonormal columns
    MatrixXd V0;         // p x k, sparse copy (also inside the regression loss)
    MatrixXd Z;          // n x k
    VectorXd beta;       // k
    VectorXd beta0_vec;  // k
    double intercept = 0.0;
    MatrixXd Lambda;     // p x k
    VectorXd lambda_vec; // k
    double nu = 0.0;
    int iter = 0;
    int degenerate_iterates = 0;
};

struct LadmmWork {
    MatrixXd XtX;
    VectorXd Xty;
    double sigma_max_sq = 0.0;  // largest squared singular value of X

    static LadmmWork build(const Dataset& d);
};

/// nu floor used when beta = 0 (the step matrix limit is well defined).
inline constexpr double kNuFloor = 1e-8;

namespace ladmm {

LadmmState initialize(const Dataset& d, const FitConfig& cfg);

/// max-eig(beta beta^T kron X^T X) = ||beta||^2 * sigma_max(X)^2, floored.
double compute_nu(const VectorXd& beta, const Dataset& d);

/// Procrustes rotation of (w/n) X^T Z + (rho1/2)(V0 + Lambda).
MatrixXd update_V(const LadmmState& s, const Dataset& d, const FitConfig& cfg);

/// Linearized proximal step: soft-threshold of the gradient-step matrix at
/// n*lambda_V / (2 nu + n rho1).
MatrixXd update_V0(const LadmmState& s, const Dataset& d, const LadmmWork& w,
                   const FitConfig& cfg);

VectorXd update_beta(const LadmmState& s, const Dataset& d, const FitConfig& cfg);

VectorXd update_beta0_vec(const LadmmState& s, const FitConfig& cfg);

double update_intercept(const LadmmState& s, const Dataset& d);

void update_duals(LadmmState& s);

/// One full sweep (Appendix-B order: V, V0, Z, beta, beta0_vec, intercept, duals).
void sweep(LadmmState& s, const Dataset& d, const LadmmWork& w, const FitConfig& cfg);

}  // namespace ladmm

LadmmState fit_ladmm_state(const Dataset& d, const FitConfig& cfg, ConvergenceReport& report);

SpcrsvdModel fit_ladmm(const Dataset& d, const FitConfig& cfg);

}  // namespace spcrsvd
