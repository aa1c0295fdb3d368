#pragma once

#include <string>

#include "spcrsvd/model.hpp"

namespace spcrsvd {

/// Serialized model plus the preprocessing transform and the FitConfig that
/// produced it. Text format, 17 significant digits, bit-exact round trip.
struct ModelFile {
    SpcrsvdModel model;
    FitConfig config;
    VectorXd column_means;
    VectorXd column_scales;
    bool standardized = false;
    double y_mean = 0.0;

    /// Dataset carrying only the transform, for predict() on new data.
    Dataset transform_dataset() const;
};

void save_model(const std::string& path, const ModelFile& mf);

ModelFile load_model(const std::string& path);

}  // namespace spcrsvd
