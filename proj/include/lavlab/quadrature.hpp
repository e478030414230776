#pragma once

#include <vector>

namespace lavlab {

/// Gauss-Legendre rule on the reference interval [-1, 1].
struct GaussLegendreRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Returns the cached rule with `order` points (order >= 1). Thread-safe;
/// the reference stays valid for the lifetime of the program.
[[nodiscard]] const GaussLegendreRule& gauss_legendre(int order);

}  // namespace lavlab
