#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spcrsvd/model.hpp"

namespace spcrsvd {

/// One of the five Monte Carlo generative designs.
struct SimDesign {
    int case_id = 1;
    Eigen::Index p = 10;
    double sigma = 1.0;
    MatrixXd Sigma;   // p x p covariance of the covariates
    VectorXd zeta;    // p, effective composite coefficients (case multipliers folded in)
};

/// Builds the design for case_id in 1..5.
SimDesign make_design(int case_id, double sigma);

struct SimSample {
    MatrixXd X;  // raw (uncentered) covariates
    VectorXd y;
};

/// X ~ N(0, Sigma) via Cholesky, y = zeta^T x + N(0, sigma^2).
SimSample generate(const SimDesign& design, Eigen::Index n, std::uint64_t seed);

enum class Method { SpcrsvdAdmm, SpcrsvdLadmm, PCR, PLS, OracleTruth };

std::string method_name(Method m);

struct SimConfig {
    Eigen::Index n = 50;        // training-set size
    int k = 1;
    double w = 0.1;
    int reps = 20;
    Eigen::Index n_test = 1000;
    int cv_folds = 5;           // SPCRsvd lambda selection
    int baseline_cv_folds = 10; // baseline component-count selection, capped at k
    int grid_size = 5;          // per lambda axis
    std::uint64_t seed = 1;
};

struct ReplicateRecord {
    int rep = 0;
    Method method = Method::SpcrsvdAdmm;
    double mse = 0.0;
    std::optional<double> tpr;
    std::optional<double> tnr;
    bool converged = true;
};

struct MethodSummary {
    Method method = Method::SpcrsvdAdmm;
    double mean_mse = 0.0;
    double sd_mse = 0.0;
    std::optional<double> mean_tpr, sd_tpr;
    std::optional<double> mean_tnr, sd_tnr;
    int reps = 0;
};

struct ExperimentReport {
    SimDesign design;
    SimConfig config;
    std::vector<ReplicateRecord> records;
    std::vector<MethodSummary> summaries;
    std::vector<std::string> warnings;
};

/// Runs reps independent replicates of every method, each with a fresh
/// train/test pair and per-method CV tuning; deterministic in config.seed.
ExperimentReport run_experiment(const SimDesign& design,
                                const std::vector<Method>& methods,
                                const SimConfig& config);

/// One row per (replicate, method): case,sigma,n,k,method,rep,mse,tpr,tnr.
void write_replicates_csv(const ExperimentReport& report, std::ostream& os);

/// Benchmark-table summary: mean (sd) per method.
void write_summary_table(const ExperimentReport& report, std::ostream& os);

}  // namespace spcrsvd
