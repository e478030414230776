#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lavlab/trajectory.hpp"

namespace lavlab {

/// A closed-form absolutely continuous function with its derivative. The
/// derivative may be unbounded at the endpoints (sqrt t, t^{1/3}); it is only
/// evaluated at interior points.
struct ExactFunction {
    std::string name;
    ScalarFunction value;
    ScalarFunction derivative;
};

using ExactParams = std::map<std::string, double, std::less<>>;

/// Named functions: identity, sqrt, cuberoot, tent, catenary (alpha, beta).
[[nodiscard]] ExactFunction exact_function(std::string_view name, const ExactParams& params = {});
[[nodiscard]] std::vector<std::string_view> exact_function_names();

/// t -> cosh(alpha t + beta) / alpha. Throws when alpha == 0.
[[nodiscard]] ExactFunction catenary(double alpha, double beta);

}  // namespace lavlab
