#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spcrsvd/baselines.hpp"
#include "spcrsvd/csv.hpp"
#include "spcrsvd/model_io.hpp"
#include "spcrsvd/selection.hpp"
#include "spcrsvd/sim.hpp"

namespace {

constexpr int kExitParseError = 2;
constexpr int kExitDimensionMismatch = 3;
constexpr int kExitNotConverged = 4;

struct CommonOpts {
    std::string input;
    std::string target;
    std::vector<std::string> drop;
    std::string out;
    int k = 1;
    double w = 0.1;
    double lambda_V = 0.0;
    double lambda_beta = 0.0;
    std::string algorithm = "admm";
    bool standardize = false;
    std::uint64_t seed = 0;
};

spcrsvd::FitConfig make_config(const CommonOpts& o) {
    spcrsvd::FitConfig cfg;
    cfg.k = o.k;
    cfg.w = o.w;
    cfg.lambda_V = o.lambda_V;
    cfg.lambda_beta = o.lambda_beta;
    cfg.seed = o.seed;
    if (o.algorithm == "admm")
        cfg.algorithm = spcrsvd::Algorithm::ADMM;
    else if (o.algorithm == "ladmm")
        cfg.algorithm = spcrsvd::Algorithm::LADMM;
    else
        throw spcrsvd::DimensionMismatch("unknown algorithm: " + o.algorithm);
    return cfg;
}

void add_data_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--input", o.input, "input CSV (header row required)")->required();
    cmd->add_option("--target", o.target, "response column name")->required();
    cmd->add_option("--drop", o.drop, "columns to exclude from the covariates");
    cmd->add_flag("--standardize", o.standardize, "scale covariates to unit sd");
}

void add_model_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--k", o.k, "number of components");
    cmd->add_option("--w", o.w, "PCA-loss weight");
    cmd->add_option("--algorithm", o.algorithm, "admm or ladmm")
        ->check(CLI::IsMember({"admm", "ladmm"}));
    cmd->add_option("--seed", o.seed, "random seed");
}

int nonzeros(const spcrsvd::MatrixXd& m) {
    int c = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) c += m(i, j) != 0.0;
    return c;
}

void save_fitted(const std::string& path, const spcrsvd::SpcrsvdModel& model,
                 const spcrsvd::Dataset& d, const spcrsvd::FitConfig& cfg) {
    spcrsvd::ModelFile mf;
    mf.model = model;
    mf.config = cfg;
    mf.column_means = d.column_means;
    mf.column_scales = d.column_scales;
    mf.standardized = d.standardized;
    mf.y_mean = d.y_mean;
    spcrsvd::save_model(path, mf);
}

int cmd_fit(const CommonOpts& o) {
    spcrsvd::CsvTable table = spcrsvd::read_csv(o.input);
    spcrsvd::MatrixXd X;
    spcrsvd::VectorXd y;
    std::vector<std::string> names;
    spcrsvd::split_target(table, o.target, o.drop, X, y, names);
    spcrsvd::FitConfig cfg = make_config(o);
    spcrsvd::Dataset d = spcrsvd::preprocess(X, y, o.standardize);
    spcrsvd::SpcrsvdModel model = spcrsvd::fit(d, cfg);

    if (!o.out.empty()) save_fitted(o.out, model, d, cfg);

    char buf[160];
    std::snprintf(buf, sizeof buf, "objective %.17g\niterations %d\nconverged %d\n",
                  spcrsvd::model_objective(d, model, cfg),
                  model.diagnostics.iterations, int(model.diagnostics.converged));
    std::cout << buf;
    int bnz = 0;
    for (Eigen::Index j = 0; j < model.beta_sparse.size(); ++j)
        bnz += model.beta_sparse(j) != 0.0;
    std::cout << "nonzeros_V0 " << nonzeros(model.V_sparse) << '\n'
              << "nonzeros_beta0 " << bnz << '\n';
    return model.diagnostics.converged ? 0 : kExitNotConverged;
}

int cmd_predict(const std::string& model_path, const CommonOpts& o) {
    spcrsvd::ModelFile mf = spcrsvd::load_model(model_path);
    spcrsvd::CsvTable table = spcrsvd::read_csv(o.input);
    spcrsvd::MatrixXd X;
    spcrsvd::VectorXd y;
    std::vector<std::string> names;
    bool have_target =
        std::find(table.columns.begin(), table.columns.end(), o.target) != table.columns.end();
    if (have_target) {
        spcrsvd::split_target(table, o.target, o.drop, X, y, names);
    } else {
        X = table.values;
        names = table.columns;
    }
    spcrsvd::Dataset d = mf.transform_dataset();
    spcrsvd::VectorXd pred = spcrsvd::predict(mf.model, X, d);

    std::ostream* os = &std::cout;
    std::ofstream fout;
    if (!o.out.empty()) {
        fout.open(o.out);
        if (!fout) throw spcrsvd::ParseError("cannot open for writing: " + o.out);
        os = &fout;
    }
    *os << "prediction\n";
    char buf[40];
    for (Eigen::Index i = 0; i < pred.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g\n", pred(i));
        *os << buf;
    }
    if (have_target) {
        std::snprintf(buf, sizeof buf, "%.17g", spcrsvd::mse(y, pred));
        std::cout << "mse " << buf << '\n';
    }
    return 0;
}

int cmd_cv(const CommonOpts& o, int folds, const std::vector<double>& grid,
           const std::string& surface_path) {
    spcrsvd::CsvTable table = spcrsvd::read_csv(o.input);
    spcrsvd::MatrixXd X;
    spcrsvd::VectorXd y;
    std::vector<std::string> names;
    spcrsvd::split_target(table, o.target, o.drop, X, y, names);
    spcrsvd::FitConfig cfg = make_config(o);

    spcrsvd::CvPlan plan;
    plan.K = folds;
    plan.seed = o.seed;
    plan.fold_assignment = spcrsvd::make_fold_assignment(X.rows(), folds, o.seed);
    if (grid.empty()) {
        spcrsvd::Dataset d = spcrsvd::preprocess(X, y, o.standardize);
        plan.grid_lambda_V = spcrsvd::default_lambda_grid(d);
    } else {
        plan.grid_lambda_V = grid;
    }
    plan.grid_lambda_beta = plan.grid_lambda_V;

    spcrsvd::CvResult cv = spcrsvd::cross_validate(X, y, o.standardize, cfg, plan);

    char buf[120];
    std::snprintf(buf, sizeof buf, "best_lambda_v %.17g\nbest_lambda_beta %.17g\n",
                  cv.best_lambda_V, cv.best_lambda_beta);
    std::cout << buf;

    if (!surface_path.empty()) {
        std::ofstream sf(surface_path);
        if (!sf) throw spcrsvd::ParseError("cannot open for writing: " + surface_path);
        sf << "lambda_v,lambda_beta,cv\n";
        for (Eigen::Index i = 0; i < cv.cv_surface.rows(); ++i)
            for (Eigen::Index j = 0; j < cv.cv_surface.cols(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n",
                              plan.grid_lambda_V[size_t(i)], plan.grid_lambda_beta[size_t(j)],
                              cv.cv_surface(i, j));
                sf << buf;
            }
    }

    if (!o.out.empty()) {
        spcrsvd::FitConfig best = cfg;
        best.lambda_V = cv.best_lambda_V;
        best.lambda_beta = cv.best_lambda_beta;
        spcrsvd::Dataset d = spcrsvd::preprocess(X, y, o.standardize);
        save_fitted(o.out, cv.refit_model, d, best);
    }
    return cv.refit_model.diagnostics.converged ? 0 : kExitNotConverged;
}

int cmd_simulate(int case_id, double sigma, int n, int reps, const CommonOpts& o,
                 int n_test, const std::string& out_prefix) {
    spcrsvd::SimDesign design = spcrsvd::make_design(case_id, sigma);
    spcrsvd::SimConfig sc;
    sc.n = n;
    sc.k = o.k;
    sc.w = o.w;
    sc.reps = reps;
    sc.n_test = n_test;
    sc.seed = o.seed;
    std::vector<spcrsvd::Method> methods{
        spcrsvd::Method::SpcrsvdAdmm, spcrsvd::Method::SpcrsvdLadmm,
        spcrsvd::Method::PCR, spcrsvd::Method::PLS};
    spcrsvd::ExperimentReport report = spcrsvd::run_experiment(design, methods, sc);

    if (!out_prefix.empty()) {
        std::ofstream rf(out_prefix + "_replicates.csv");
        if (!rf) throw spcrsvd::ParseError("cannot open for writing: " + out_prefix);
        spcrsvd::write_replicates_csv(report, rf);
        std::ofstream tf(out_prefix + "_summary.txt");
        spcrsvd::write_summary_table(report, tf);
    }
    spcrsvd::write_summary_table(report, std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SPCRsvd: sparse principal component regression (SVD loss)"};
    app.require_subcommand(1);

    CommonOpts o;

    CLI::App* fit = app.add_subcommand("fit", "fit a model on CSV data");
    add_data_flags(fit, o);
    add_model_flags(fit, o);
    fit->add_option("--lambda-v", o.lambda_V, "loading-matrix lasso weight");
    fit->add_option("--lambda-beta", o.lambda_beta, "coefficient lasso weight");
    fit->add_option("--out", o.out, "model file to write");

    std::string model_path;
    CLI::App* pred = app.add_subcommand("predict", "predict from a saved model");
    pred->add_option("--model", model_path, "saved model file")->required();
    pred->add_option("--input", o.input, "input CSV")->required();
    pred->add_option("--target", o.target, "response column (optional, enables MSE)");
    pred->add_option("--drop", o.drop, "columns to exclude");
    pred->add_option("--out", o.out, "predictions CSV to write");

    int folds = 5;
    std::vector<double> grid;
    std::string surface_path;
    CLI::App* cv = app.add_subcommand("cv", "cross-validate the lambda grid and refit");
    add_data_flags(cv, o);
    add_model_flags(cv, o);
    cv->add_option("--folds", folds, "number of CV folds");
    cv->add_option("--grid", grid, "lambda values for both axes")->delimiter(',');
    cv->add_option("--surface", surface_path, "CV-surface CSV to write");
    cv->add_option("--out", o.out, "refit model file to write");

    int case_id = 1, n = 50, reps = 20, n_test = 1000;
    double sigma = 1.0;
    std::string out_prefix;
    CLI::App* sim = app.add_subcommand("simulate", "run a Monte Carlo benchmark case");
    sim->add_option("--case", case_id, "design case, 1..5")->check(CLI::Range(1, 5));
    sim->add_option("--sigma", sigma, "noise standard deviation");
    sim->add_option("--n", n, "training-set size");
    sim->add_option("--reps", reps, "number of replicates");
    sim->add_option("--n-test", n_test, "test-set size");
    sim->add_option("--k", o.k, "number of components");
    sim->add_option("--w", o.w, "PCA-loss weight");
    sim->add_option("--seed", o.seed, "master seed");
    sim->add_option("--out", out_prefix, "output file prefix");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return cmd_fit(o);
        if (pred->parsed()) return cmd_predict(model_path, o);
        if (cv->parsed()) return cmd_cv(o, folds, grid, surface_path);
        if (sim->parsed()) return cmd_simulate(case_id, sigma, n, reps, o, n_test, out_prefix);
    } catch (const spcrsvd::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParseError;
    } catch (const spcrsvd::DimensionMismatch& e) {
        std::cerr << "dimension mismatch: " << e.what() << '\n';
        return kExitDimensionMismatch;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
