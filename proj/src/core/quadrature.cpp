#include "lavlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "lavlab/errors.hpp"

namespace lavlab {
namespace {

// Legendre P_n and P_n' at x by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
    double p_prev = 1.0;
    double p = x;
    for (int k = 2; k <= n; ++k) {
        const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = p_next;
    }
    if (n == 0) return {1.0, 0.0};
    const double dp = n * (x * p - p_prev) / (x * x - 1.0);
    return {p, dp};
}

std::unique_ptr<GaussLegendreRule> build_rule(int order) {
    auto rule = std::make_unique<GaussLegendreRule>();
    rule->order = order;
    rule->nodes.resize(order);
    rule->weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, d] = legendre_with_derivative(order, x);
            dp = d;
            const double dx = p / d;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        dp = legendre_with_derivative(order, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // ascending order: negative nodes first
        rule->nodes[i] = -x;
        rule->nodes[order - 1 - i] = x;
        rule->weights[i] = w;
        rule->weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) rule->nodes[order / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
    if (order < 1 || order > 256) {
        throw Error(ErrorKind::argument, "quadrature order must lie in [1, 256]");
    }
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    const std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = build_rule(order);
    return *slot;
}

}  // namespace lavlab
