#pragma once

#include "spcrsvd/model.hpp"

namespace spcrsvd {

/// Primal copies and scaled duals of the three-copy consensus problem:
/// V = V0 = V1 (loadings) and beta = beta0_vec (regression weights).
struct AdmmState {
    MatrixXd V;           // p x k, orthonormal columns
    MatrixXd V0;          // p x k, sparse copy
    MatrixXd V1;          // p x k, regression-loss copy
    MatrixXd Z;           // n x k
    VectorXd beta;        // k
    VectorXd beta0_vec;   // k, sparse copy
    double intercept = 0.0;
    MatrixXd Lambda1;     // p x k
    MatrixXd Lambda2;     // p x k
    VectorXd lambda3;     // k
    int iter = 0;
    int degenerate_iterates = 0;
};

/// Per-fit precomputations shared by the block updates.
struct AdmmWork {
    MatrixXd XtX;  // p x p
    VectorXd Xty;  // p

    static AdmmWork build(const Dataset& d);
};

namespace admm {

/// SVD warm start: V = V0 = V1 = top-k right singular vectors of X,
/// Z = X V, beta = 0, intercept = mean(y), duals = 0.
AdmmState initialize(const Dataset& d, const FitConfig& cfg);

/// Exact minimizer of (1/n)||y* - X V1 beta||^2 + (rho2/2)||V1 - V0 + Lambda2||_F^2.
/// The rank-one structure of beta beta^T reduces the Kronecker system to a
/// single p x p SPD solve plus scaled copies.
MatrixXd update_V1(const AdmmState& s, const Dataset& d, const AdmmWork& w,
                   const FitConfig& cfg);

/// Procrustes rotation of (w/n) X^T Z + (rho1/2)(V0 - Lambda1).
MatrixXd update_V(const AdmmState& s, const Dataset& d, const FitConfig& cfg);

/// Soft-threshold of the rho-weighted blend of (V + Lambda1) and (V1 + Lambda2).
MatrixXd update_V0(const AdmmState& s, const FitConfig& cfg);

MatrixXd update_Z(const AdmmState& s, const Dataset& d);

/// Exact minimizer of (1/n)||y* - X V1 beta||^2 + (rho3/2)||beta - beta0_vec + lambda3||^2.
VectorXd update_beta(const AdmmState& s, const Dataset& d, const AdmmWork& w,
                     const FitConfig& cfg);

VectorXd update_beta0_vec(const AdmmState& s, const FitConfig& cfg);

double update_intercept(const AdmmState& s, const Dataset& d);

/// Dual ascent on all three consensus gaps, in place.
void update_duals(AdmmState& s);

/// One full sweep (Steps 4-11). A rank-deficient Procrustes argument keeps
/// the previous V and bumps degenerate_iterates.
void sweep(AdmmState& s, const Dataset& d, const AdmmWork& w, const FitConfig& cfg);

}  // namespace admm

/// Runs the sweep to convergence and returns the final state (duals included).
AdmmState fit_admm_state(const Dataset& d, const FitConfig& cfg, ConvergenceReport& report);

SpcrsvdModel fit_admm(const Dataset& d, const FitConfig& cfg);

}  // namespace spcrsvd
