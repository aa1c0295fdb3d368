#pragma once

#include <string>
#include <vector>

#include "spcrsvd/kernels.hpp"

namespace spcrsvd {

struct CsvTable {
    std::vector<std::string> columns;
    MatrixXd values;  // rows x columns
};

/// Reads a comma-separated file with a mandatory header row. Malformed
/// numeric cells raise ParseError naming the data row and column.
CsvTable read_csv(const std::string& path);

/// Splits a table into a target column y and the remaining covariates,
/// minus any columns listed in drop.
void split_target(const CsvTable& table, const std::string& target,
                  const std::vector<std::string>& drop,
                  MatrixXd& X, VectorXd& y, std::vector<std::string>& covariate_names);

}  // namespace spcrsvd
