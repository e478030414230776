#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lavlab/exact.hpp"
#include "lavlab/extended_real.hpp"
#include "lavlab/lagrangian.hpp"
#include "lavlab/trajectory.hpp"

namespace lavlab {

inline constexpr int default_quadrature_order = 5;

struct EnergyOptions {
    int order = default_quadrature_order;
    /// Also evaluate on the once-bisected mesh and report the difference.
    bool estimate_error = false;
};

/// F(y) = sum of per-cell Gauss-Legendre contributions.
struct EnergyReport {
    ExtendedReal value;
    std::vector<ExtendedReal> per_cell;
    std::optional<double> refinement_error_estimate;
    int quadrature_order = default_quadrature_order;
};

/// Contribution of one cell [t0, t1] of a piecewise-linear function with
/// nodal values y0, y1. Samples are taken at interior Gauss points only.
[[nodiscard]] ExtendedReal cell_energy(const Lagrangian& lagrangian, double t0, double t1,
                                       double y0, double y1, int order);

[[nodiscard]] EnergyReport energy(const Lagrangian& lagrangian, const Trajectory& y,
                                  EnergyOptions options = {});

/// F evaluated along a closed-form function (value and derivative at the Gauss
/// points of every cell) instead of along its interpolant.
[[nodiscard]] EnergyReport energy_exact(const Lagrangian& lagrangian, const ExactFunction& y,
                                        const Mesh& mesh, EnergyOptions options = {});

struct ConvergenceStep {
    std::size_t cells = 0;
    ExtendedReal value;
    double error_estimate = 0.0;
};

struct ConvergedEnergy {
    ExtendedReal value;
    bool converged = false;
    std::size_t cells = 0;
    double error_estimate = 0.0;
    std::vector<ConvergenceStep> history;
};

/// Walks the mesh family and returns the first exact-function energy whose
/// bisection estimate is <= tol; otherwise the last one, marked not converged.
[[nodiscard]] ConvergedEnergy energy_converged(const Lagrangian& lagrangian, const ExactFunction& y,
                                               std::span<const Mesh> mesh_family, int order,
                                               double tol);

}  // namespace lavlab
