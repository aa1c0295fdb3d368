#include "spcrsvd/csv.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace spcrsvd {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");

    CsvTable table;
    for (const std::string& h : split_line(line)) table.columns.push_back(trim(h));
    if (table.columns.empty()) throw ParseError(path + ": empty header");

    std::vector<std::vector<double>> rows;
    int lineno = 1;  // data rows counted from 1
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != table.columns.size()) {
            std::ostringstream msg;
            msg << path << ": row " << lineno << ": expected " << table.columns.size()
                << " cells, got " << cells.size();
            throw ParseError(msg.str());
        }
        std::vector<double> row(cells.size());
        for (size_t j = 0; j < cells.size(); ++j) {
            std::string c = trim(cells[j]);
            char* end = nullptr;
            row[j] = std::strtod(c.c_str(), &end);
            if (c.empty() || end != c.c_str() + c.size()) {
                std::ostringstream msg;
                msg << path << ": row " << lineno << ", column \"" << table.columns[j]
                    << "\": malformed numeric cell \"" << c << "\"";
                throw ParseError(msg.str());
            }
        }
        rows.push_back(std::move(row));
        ++lineno;
    }

    table.values.resize(Eigen::Index(rows.size()), Eigen::Index(table.columns.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j)
            table.values(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
    return table;
}

void split_target(const CsvTable& table, const std::string& target,
                  const std::vector<std::string>& drop,
                  MatrixXd& X, VectorXd& y, std::vector<std::string>& covariate_names) {
    auto idx_of = [&](const std::string& name) -> Eigen::Index {
        auto it = std::find(table.columns.begin(), table.columns.end(), name);
        if (it == table.columns.end())
            throw ParseError("column not found: " + name);
        return Eigen::Index(it - table.columns.begin());
    };
    Eigen::Index ty = idx_of(target);
    std::vector<Eigen::Index> dropped{ty};
    for (const std::string& name : drop) dropped.push_back(idx_of(name));

    covariate_names.clear();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < Eigen::Index(table.columns.size()); ++j) {
        if (std::find(dropped.begin(), dropped.end(), j) != dropped.end()) continue;
        keep.push_back(j);
        covariate_names.push_back(table.columns[size_t(j)]);
    }
    if (keep.empty()) throw ParseError("no covariate columns remain");

    X.resize(table.values.rows(), Eigen::Index(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) X.col(Eigen::Index(j)) = table.values.col(keep[j]);
    y = table.values.col(ty);
}

}  // namespace spcrsvd
