#include "spcrsvd/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace spcrsvd {

namespace {

constexpr const char* kMagic = "spcrsvd-model-v1";

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_vector(std::ostream& os, const char* name, const VectorXd& v) {
    os << "vector " << name << ' ' << v.size() << '\n';
    for (Eigen::Index i = 0; i < v.size(); ++i)
        os << fmt(v(i)) << (i + 1 < v.size() ? ' ' : '\n');
    if (v.size() == 0) os << '\n';
}

void write_matrix(std::ostream& os, const char* name, const MatrixXd& m) {
    os << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            os << fmt(m(i, j)) << (j + 1 < m.cols() ? ' ' : '\n');
}

VectorXd read_vector(std::istream& in, const std::string& expect) {
    std::string kw, name;
    Eigen::Index len = 0;
    if (!(in >> kw >> name >> len) || kw != "vector" || name != expect)
        throw ParseError("model file: expected vector " + expect);
    VectorXd v(len);
    for (Eigen::Index i = 0; i < len; ++i)
        if (!(in >> v(i))) throw ParseError("model file: truncated vector " + expect);
    return v;
}

MatrixXd read_matrix(std::istream& in, const std::string& expect) {
    std::string kw, name;
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> kw >> name >> rows >> cols) || kw != "matrix" || name != expect)
        throw ParseError("model file: expected matrix " + expect);
    MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            if (!(in >> m(i, j))) throw ParseError("model file: truncated matrix " + expect);
    return m;
}

}  // namespace

Dataset ModelFile::transform_dataset() const {
    Dataset d;
    d.column_means = column_means;
    d.column_scales = column_scales;
    d.standardized = standardized;
    d.y_mean = y_mean;
    return d;
}

void save_model(const std::string& path, const ModelFile& mf) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open for writing: " + path);
    os << kMagic << '\n';
    os << "algorithm " << (mf.model.algorithm == Algorithm::ADMM ? "admm" : "ladmm") << '\n';
    os << "k " << mf.config.k << '\n';
    os << "w " << fmt(mf.config.w) << '\n';
    os << "lambda_v " << fmt(mf.config.lambda_V) << '\n';
    os << "lambda_beta " << fmt(mf.config.lambda_beta) << '\n';
    os << "rho " << fmt(mf.config.rho1) << ' ' << fmt(mf.config.rho2) << ' '
       << fmt(mf.config.rho3) << '\n';
    os << "max_iter " << mf.config.max_iter << '\n';
    os << "tol " << fmt(mf.config.tol_abs) << ' ' << fmt(mf.config.tol_rel) << '\n';
    os << "seed " << mf.config.seed << '\n';
    os << "standardized " << (mf.standardized ? 1 : 0) << '\n';
    os << "y_mean " << fmt(mf.y_mean) << '\n';
    os << "intercept " << fmt(mf.model.intercept) << '\n';
    os << "iterations " << mf.model.diagnostics.iterations << '\n';
    os << "converged " << (mf.model.diagnostics.converged ? 1 : 0) << '\n';
    os << "degenerate_iterates " << mf.model.diagnostics.degenerate_iterates << '\n';
    write_vector(os, "column_means", mf.column_means);
    write_vector(os, "column_scales", mf.column_scales);
    write_vector(os, "beta", mf.model.beta);
    write_vector(os, "beta_sparse", mf.model.beta_sparse);
    write_vector(os, "composite", mf.model.composite_coefficients);
    write_matrix(os, "V", mf.model.V);
    write_matrix(os, "V_sparse", mf.model.V_sparse);
    write_matrix(os, "V_pred", mf.model.V_pred);
    write_matrix(os, "Z", mf.model.Z);
    if (!os) throw ParseError("write failed: " + path);
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file: " + path);
    std::string magic;
    std::getline(in, magic);
    if (magic != kMagic) throw ParseError("model file: unrecognized header");

    ModelFile mf;
    auto expect_key = [&](const char* key) {
        std::string k;
        if (!(in >> k) || k != key)
            throw ParseError(std::string("model file: expected key ") + key);
    };
    std::string alg;
    expect_key("algorithm");
    in >> alg;
    if (alg == "admm")
        mf.model.algorithm = mf.config.algorithm = Algorithm::ADMM;
    else if (alg == "ladmm")
        mf.model.algorithm = mf.config.algorithm = Algorithm::LADMM;
    else
        throw ParseError("model file: unknown algorithm " + alg);
    expect_key("k");
    in >> mf.config.k;
    expect_key("w");
    in >> mf.config.w;
    expect_key("lambda_v");
    in >> mf.config.lambda_V;
    expect_key("lambda_beta");
    in >> mf.config.lambda_beta;
    expect_key("rho");
    in >> mf.config.rho1 >> mf.config.rho2 >> mf.config.rho3;
    expect_key("max_iter");
    in >> mf.config.max_iter;
    expect_key("tol");
    in >> mf.config.tol_abs >> mf.config.tol_rel;
    expect_key("seed");
    in >> mf.config.seed;
    int flag = 0;
    expect_key("standardized");
    in >> flag;
    mf.standardized = flag != 0;
    expect_key("y_mean");
    in >> mf.y_mean;
    expect_key("intercept");
    in >> mf.model.intercept;
    expect_key("iterations");
    in >> mf.model.diagnostics.iterations;
    expect_key("converged");
    in >> flag;
    mf.model.diagnostics.converged = flag != 0;
    expect_key("degenerate_iterates");
    in >> mf.model.diagnostics.degenerate_iterates;
    if (!in) throw ParseError("model file: malformed scalar section");

    mf.column_means = read_vector(in, "column_means");
    mf.column_scales = read_vector(in, "column_scales");
    mf.model.beta = read_vector(in, "beta");
    mf.model.beta_sparse = read_vector(in, "beta_sparse");
    mf.model.composite_coefficients = read_vector(in, "composite");
    mf.model.V = read_matrix(in, "V");
    mf.model.V_sparse = read_matrix(in, "V_sparse");
    mf.model.V_pred = read_matrix(in, "V_pred");
    mf.model.Z = read_matrix(in, "Z");
    return mf;
}

}  // namespace spcrsvd
