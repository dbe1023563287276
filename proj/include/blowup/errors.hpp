#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

struct DivergentLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPolynomialResidue : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DecompositionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IdentityFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExtrapolationUnstable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace blowup
