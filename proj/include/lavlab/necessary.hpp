#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lavlab/exact.hpp"
#include "lavlab/lagrangian.hpp"
#include "lavlab/trajectory.hpp"

namespace lavlab {

struct ResidualSample {
    double t = 0.0;
    double residual = 0.0;
};

struct ResidualReport {
    std::vector<ResidualSample> samples;
    double max_abs = 0.0;
    std::size_t mesh_resolution = 0;
    /// Sample locations dropped because L or its partials were singular there.
    std::vector<double> skipped;
    /// Du Bois-Reymond only: the mean of L - y' L_v (the constant c).
    std::optional<double> constant;
};

/// Staggered Euler-Lagrange residual at interior nodes:
///   L_y(t_i, y_i, (d_{i-1} + d_i) / 2) - (L_v|_{i+1/2} - L_v|_{i-1/2}) / Delta_i
/// with L_v at cell midpoints and Delta_i the distance between the midpoints.
/// Requires at least three cells.
[[nodiscard]] ResidualReport euler_lagrange_residual(const Lagrangian& lagrangian,
                                                     const Trajectory& y);

/// Deviation of E_i = L - d_i L_v (cell midpoints) from its mean. Autonomous
/// Lagrangians only.
[[nodiscard]] ResidualReport du_bois_reymond_residual(const Lagrangian& lagrangian,
                                                      const Trajectory& y);

struct CatenaryFit {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Shallowest catenary (smallest alpha > 0) through (a, A) and (b, B), by a
/// scan and bisection on alpha. Throws when no catenary connects the points.
[[nodiscard]] CatenaryFit fit_catenary(double a, double A, double b, double B);

}  // namespace lavlab
