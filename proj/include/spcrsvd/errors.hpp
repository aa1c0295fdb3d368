#pragma once

#include <stdexcept>
#include <string>

namespace spcrsvd {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RankDeficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonFiniteInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct FoldTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// CSV / model-file ingestion failure; carries a human-readable location.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace spcrsvd
