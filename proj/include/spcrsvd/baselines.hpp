#pragma once

#include "spcrsvd/model.hpp"

namespace spcrsvd {

enum class BaselineKind { PCR, PLS };

struct BaselineModel {
    BaselineKind kind = BaselineKind::PCR;
    int k = 0;                 // components actually used
    double intercept = 0.0;
    VectorXd coefficients;     // p, on the (preprocessed) covariates
    bool stopped_early = false;  // PLS hit zero covariance before k components
};

/// Top-k principal component scores of X regressed on y, mapped back to
/// per-covariate coefficients.
BaselineModel fit_pcr(const Dataset& d, int k);

/// Univariate-response NIPALS (PLS1), X deflated after each component.
/// Stops early with a diagnostic when X^T y vanishes.
BaselineModel fit_pls(const Dataset& d, int k);

VectorXd predict_baseline(const BaselineModel& m, const MatrixXd& X_new_raw,
                          const Dataset& d);

/// Component count minimizing K-fold CV prediction error over 1..k_max.
int select_components_cv(const MatrixXd& raw_X, const VectorXd& raw_y, bool standardize,
                         BaselineKind kind, int k_max, int K, std::uint64_t seed);

}  // namespace spcrsvd
