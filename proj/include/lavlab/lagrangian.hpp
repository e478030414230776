#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace lavlab {

struct Partials {
    double t = 0.0;
    double y = 0.0;
    double v = 0.0;
};

struct LagrangianFlags {
    bool autonomous = false;
    bool convex_in_v = false;
    /// May return +inf (e.g. 1/(2y) at y = 0).
    bool extended = false;
};

/// Integrand L(t, y, v) >= 0 of an integral functional, possibly +inf.
class Lagrangian {
public:
    using Evaluator = std::function<double(double t, double y, double v)>;
    using PartialsEvaluator = std::function<Partials(double t, double y, double v)>;

    Lagrangian(std::string id, Evaluator eval, std::optional<PartialsEvaluator> partials,
               LagrangianFlags flags);

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] const LagrangianFlags& flags() const noexcept { return flags_; }
    [[nodiscard]] bool autonomous() const noexcept { return flags_.autonomous; }
    [[nodiscard]] bool convex_in_v() const noexcept { return flags_.convex_in_v; }
    [[nodiscard]] bool extended() const noexcept { return flags_.extended; }
    [[nodiscard]] bool has_exact_partials() const noexcept { return partials_.has_value(); }

    [[nodiscard]] double operator()(double t, double y, double v) const { return eval_(t, y, v); }

    /// Exact partials when the entry provides them, central differences otherwise.
    /// Throws singular_point when L is infinite at the point.
    [[nodiscard]] Partials partials(double t, double y, double v) const;

    /// Central differences with step eps^{1/3} max(1, |coordinate|).
    [[nodiscard]] Partials finite_difference_partials(double t, double y, double v) const;

private:
    std::string id_;
    Evaluator eval_;
    std::optional<PartialsEvaluator> partials_;
    LagrangianFlags flags_;
};

/// Parameters of parametrised catalog entries.
struct CatalogParams {
    /// Starting height A of the brachistochrone; L = +inf for y >= A.
    double brachistochrone_height = 1.0;
};

[[nodiscard]] std::span<const std::string_view> catalog_ids();

/// Throws lookup error (listing the valid ids) for an unknown id.
[[nodiscard]] Lagrangian catalog(std::string_view id, const CatalogParams& params = {});

struct Rational {
    std::int64_t numerator = 0;
    std::int64_t denominator = 1;

    [[nodiscard]] double value() const noexcept {
        return static_cast<double>(numerator) / static_cast<double>(denominator);
    }
};

/// Parses "p", "p/q" or "-p/q".
[[nodiscard]] Rational parse_rational(std::string_view text);

struct Monomial {
    Rational coefficient;
    int t_power = 0;
    int y_power = 0;
    int v_power = 0;
};

/// Sum of monomials with exact partials. Autonomy is detected from the
/// exponents; convexity in v must be declared and is then probed.
[[nodiscard]] Lagrangian polynomial_lagrangian(std::string id, std::vector<Monomial> terms,
                                               bool convex_in_v = false);

/// User-defined Lagrangian from a JSON description:
///   "mania"                                catalog id
///   {"id": "brachistochrone", "A": 2}      parametrised catalog entry
///   {"polynomial": [{"coef": "1/2", "t": 0, "y": 1, "v": 2}, ...],
///    "catalog": [{"id": "quartic", "scale": "3"}], "convex_in_v": true}
[[nodiscard]] Lagrangian lagrangian_from_json(const nlohmann::json& description);

/// Midpoint convexity of v -> L(t, y, v): the grid is refined with the
/// midpoint of each consecutive pair and every consecutive triple is checked
/// against its secant within 1e-12 * scale.
[[nodiscard]] bool convexity_probe(const Lagrangian& lagrangian, double y,
                                   std::span<const double> v_grid, double t = 0.0);

}  // namespace lavlab
