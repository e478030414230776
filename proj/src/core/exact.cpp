#include "lavlab/exact.hpp"

#include <cmath>
#include <string>

#include "lavlab/errors.hpp"

namespace lavlab {
namespace {

double param(const ExactParams& params, std::string_view key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

std::size_t index_param(const ExactParams& params, std::string_view name) {
    const double n = param(params, "n", 0.0);
    if (!(n >= 1.0) || n != std::floor(n)) {
        throw Error(ErrorKind::argument,
                    std::string(name) + " needs an integer parameter n >= 1");
    }
    return static_cast<std::size_t>(n);
}

constexpr std::string_view names[] = {
    "identity", "sqrt", "cuberoot", "tent", "catenary",
    "sqrt_ramp", "mollified_tent", "sawtooth", "mania_truncation",
};

}  // namespace

std::vector<std::string_view> exact_function_names() { return {std::begin(names), std::end(names)}; }

ExactFunction catenary(double alpha, double beta) {
    if (alpha == 0.0 || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw Error(ErrorKind::argument, "catenary needs a finite alpha != 0");
    }
    return {"catenary",
            [alpha, beta](double t) { return std::cosh(alpha * t + beta) / alpha; },
            [alpha, beta](double t) { return std::sinh(alpha * t + beta); }};
}

ExactFunction exact_function(std::string_view name, const ExactParams& params) {
    if (name == "identity") {
        return {"identity", [](double t) { return t; }, [](double) { return 1.0; }};
    }
    if (name == "sqrt") {
        return {"sqrt", [](double t) { return std::sqrt(t); },
                [](double t) { return 0.5 / std::sqrt(t); }};
    }
    if (name == "cuberoot") {
        return {"cuberoot", [](double t) { return std::cbrt(t); },
                [](double t) {
                    const double c = std::cbrt(t);
                    return 1.0 / (3.0 * c * c);
                }};
    }
    if (name == "tent") {
        return {"tent", [](double t) { return t <= 0.5 ? t : 1.0 - t; },
                [](double t) { return t < 0.5 ? 1.0 : -1.0; }};
    }
    if (name == "catenary") {
        return catenary(param(params, "alpha", 1.0), param(params, "beta", 0.0));
    }
    if (name == "sqrt_ramp") {
        const double n = static_cast<double>(index_param(params, name));
        const double root = std::sqrt(n);
        return {"sqrt_ramp",
                [n, root](double t) { return t <= 1.0 / n ? t * root : std::sqrt(t); },
                [n, root](double t) { return t < 1.0 / n ? root : 0.5 / std::sqrt(t); }};
    }
    if (name == "mollified_tent") {
        const double n = static_cast<double>(index_param(params, name));
        const double lo = 0.5 - 1.0 / n;
        const double hi = 0.5 + 1.0 / n;
        const double top = 0.5 - 0.5 / n;
        return {"mollified_tent",
                [=](double t) {
                    if (t <= lo) return t;
                    if (t >= hi) return 1.0 - t;
                    const double s = t - 0.5;
                    return top - 0.5 * n * s * s;
                },
                [=](double t) {
                    if (t <= lo) return 1.0;
                    if (t >= hi) return -1.0;
                    return -n * (t - 0.5);
                }};
    }
    if (name == "sawtooth") {
        const double n = static_cast<double>(index_param(params, name));
        const double tooth = 1.0 / n;
        return {"sawtooth",
                [=](double t) {
                    const double phase = t - tooth * std::floor(t / tooth);
                    return phase <= 0.5 * tooth ? phase : tooth - phase;
                },
                [=](double t) {
                    const double phase = t - tooth * std::floor(t / tooth);
                    return phase < 0.5 * tooth ? 1.0 : -1.0;
                }};
    }
    if (name == "mania_truncation") {
        const double n = static_cast<double>(index_param(params, name));
        const double cut = 1.0 / (n + 1.0);
        const double level = std::cbrt(cut);
        return {"mania_truncation",
                [=](double t) { return t <= cut ? level : std::cbrt(t); },
                [=](double t) {
                    if (t < cut) return 0.0;
                    const double c = std::cbrt(t);
                    return 1.0 / (3.0 * c * c);
                }};
    }
    std::string valid;
    for (const auto id : names) {
        if (!valid.empty()) valid += ", ";
        valid += id;
    }
    throw Error(ErrorKind::lookup, "unknown exact function '" + std::string(name) +
                                       "'; valid names: " + valid);
}

}  // namespace lavlab
