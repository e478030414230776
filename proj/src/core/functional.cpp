#include "lavlab/functional.hpp"

#include <cmath>
#include <limits>

#include "lavlab/errors.hpp"
#include "lavlab/quadrature.hpp"

namespace lavlab {
namespace {

// Sum of w * L over the rule mapped onto [t0, t1]; any non-finite or huge
// sample makes the whole cell infinite. `along` gets the time and the
// reference coordinate s in (0, 1), so interpolation need not recover s
// from t - t0 (which loses digits on narrow cells far from 0).
template <class Along>
ExtendedReal integrate_cell(const Lagrangian& lagrangian, double t0, double t1, int order,
                            Along along) {
    const auto& rule = gauss_legendre(order);
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    double sum = 0.0;
    for (int q = 0; q < rule.order; ++q) {
        const double t = mid + half * rule.nodes[q];
        const auto [y, v] = along(t, 0.5 * (1.0 + rule.nodes[q]));
        const double value = lagrangian(t, y, v);
        if (!(value <= infinity_threshold)) return ExtendedReal::infinity();
        sum += rule.weights[q] * value;
    }
    return ExtendedReal(half * sum);
}

double difference(ExtendedReal lhs, ExtendedReal rhs) {
    if (lhs.is_finite() && rhs.is_finite()) return std::abs(lhs.value() - rhs.value());
    if (!lhs.is_finite() && !rhs.is_finite()) return 0.0;
    return std::numeric_limits<double>::infinity();
}

void check_order(int order) {
    if (order < 1) throw Error(ErrorKind::argument, "quadrature order must be >= 1");
}

}  // namespace

ExtendedReal cell_energy(const Lagrangian& lagrangian, double t0, double t1, double y0, double y1,
                         int order) {
    const double slope = (y1 - y0) / (t1 - t0);
    return integrate_cell(lagrangian, t0, t1, order,
                          [&](double, double s) { return std::pair{y0 + s * (y1 - y0), slope}; });
}

EnergyReport energy(const Lagrangian& lagrangian, const Trajectory& y, EnergyOptions options) {
    check_order(options.order);
    EnergyReport report;
    report.quadrature_order = options.order;
    report.per_cell.reserve(y.cell_count());
    const auto nodes = y.mesh().nodes();
    const auto values = y.values();
    for (std::size_t i = 0; i < y.cell_count(); ++i) {
        const ExtendedReal cell =
            cell_energy(lagrangian, nodes[i], nodes[i + 1], values[i], values[i + 1], options.order);
        report.per_cell.push_back(cell);
        report.value += cell;
    }
    if (options.estimate_error) {
        const auto fine = energy(lagrangian, bisected(y), {.order = options.order});
        report.refinement_error_estimate = difference(report.value, fine.value);
    }
    return report;
}

EnergyReport energy_exact(const Lagrangian& lagrangian, const ExactFunction& y, const Mesh& mesh,
                          EnergyOptions options) {
    check_order(options.order);
    EnergyReport report;
    report.quadrature_order = options.order;
    report.per_cell.reserve(mesh.cell_count());
    const auto nodes = mesh.nodes();
    for (std::size_t i = 0; i < mesh.cell_count(); ++i) {
        const ExtendedReal cell = integrate_cell(lagrangian, nodes[i], nodes[i + 1], options.order,
                                                 [&](double t, double) { return std::pair{y.value(t), y.derivative(t)}; });
        report.per_cell.push_back(cell);
        report.value += cell;
    }
    if (options.estimate_error) {
        const auto fine = energy_exact(lagrangian, y, bisected(mesh), {.order = options.order});
        report.refinement_error_estimate = difference(report.value, fine.value);
    }
    return report;
}

ConvergedEnergy energy_converged(const Lagrangian& lagrangian, const ExactFunction& y,
                                 std::span<const Mesh> mesh_family, int order, double tol) {
    if (mesh_family.empty()) throw Error(ErrorKind::argument, "energy_converged needs at least one mesh");
    ConvergedEnergy result;
    for (const auto& mesh : mesh_family) {
        const auto report = energy_exact(lagrangian, y, mesh, {.order = order, .estimate_error = true});
        const double estimate = *report.refinement_error_estimate;
        result.history.push_back({mesh.cell_count(), report.value, estimate});
        result.value = report.value;
        result.cells = mesh.cell_count();
        result.error_estimate = estimate;
        if (estimate <= tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace lavlab
