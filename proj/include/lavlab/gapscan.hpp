#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lavlab/exact.hpp"
#include "lavlab/extended_real.hpp"
#include "lavlab/functional.hpp"
#include "lavlab/lagrangian.hpp"
#include "lavlab/repar.hpp"
#include "lavlab/trajectory.hpp"

namespace lavlab {

inline constexpr std::uint64_t default_seed = 0x4C41565245ULL;

// ---------------------------------------------------------------------------
// Minimizing sequences of the classical examples, as piecewise-linear
// trajectories on [0, 1].
// ---------------------------------------------------------------------------

/// t sqrt(n) on [0, 1/n], sqrt t after; `cells` graded cells resolve sqrt t.
[[nodiscard]] Trajectory sqrt_ramp_sequence(std::size_t n, std::size_t cells = 2048);

/// Tent min(t, 1 - t) with the kink replaced by a parabola on
/// [1/2 - 1/n, 1/2 + 1/n]; |y'| <= 1.
[[nodiscard]] Trajectory mollified_tent_sequence(std::size_t n, std::size_t cells = 2048);

/// Sawtooth with n teeth, slopes +-1, |y| <= 1/(2n); 2n cells.
[[nodiscard]] Trajectory sawtooth_sequence(std::size_t n);

/// t^{1/3} truncated to the constant (n+1)^{-1/3} on [0, 1/(n+1)]. One cell
/// carries the constant part; `cells` cells graded with `power` toward the
/// truncation point carry t^{1/3}.
[[nodiscard]] Trajectory mania_truncation_sequence(std::size_t n, std::size_t cells = 4096,
                                                   double power = 3.0);

// ---------------------------------------------------------------------------
// Bounded-slope minimization
// ---------------------------------------------------------------------------

/// Prescribed end value and optional start value.
struct Boundary {
    std::optional<double> start;
    double end = 0.0;
};

struct MinimizeOptions {
    std::size_t restarts = 8;
    std::uint64_t seed = default_seed;
    int order = default_quadrature_order;
    std::size_t max_iterations = 2000;
    /// Additional feasible starting points (projected before use).
    std::vector<Trajectory> warm_starts;
};

struct BoundedMinimum {
    Trajectory trajectory;
    double energy = 0.0;
    std::size_t iterations = 0;
};

/// Slope projection onto [-M, M]: sequential clipping from the anchored end,
/// then (two endpoints) a uniform slope correction on the unclipped cells to
/// restore the far endpoint. Returns nothing when the correction would leave
/// the box.
[[nodiscard]] std::optional<std::vector<double>> project_slopes(const Mesh& mesh,
                                                                std::span<const double> values,
                                                                double bound,
                                                                const Boundary& boundary);

/// Projected gradient descent with central-difference gradients and
/// backtracking, from the straight line, warm starts and seeded random
/// starts; returns the best. Every returned slope lies in [-M, M].
[[nodiscard]] BoundedMinimum minimize_bounded(const Lagrangian& lagrangian, const Mesh& mesh,
                                              double bound, const Boundary& boundary,
                                              const MinimizeOptions& options = {});

struct GapRow {
    std::size_t cells = 0;
    double bound = 0.0;
    double best_energy = 0.0;
    std::size_t iterations = 0;
};

struct GapReport {
    std::vector<GapRow> rows;
    double floor_estimate = 0.0;
    ExtendedReal reference_energy;
    double gap_estimate = 0.0;
    bool reference_converged = false;
};

struct ScanOptions {
    std::size_t restarts = 8;
    std::uint64_t seed = default_seed;
    int order = default_quadrature_order;
    std::size_t max_iterations = 2000;
    unsigned threads = 1;
};

/// Mania's problem with y(0) = 0, y(1) = 1 over uniform meshes and slope
/// bounds. For each mesh the bounds are run in increasing order, each warm
/// started from the previous best, so best_energy is non-increasing in M.
[[nodiscard]] GapReport mania_two_endpoint_scan(std::span<const std::size_t> n_grid,
                                                std::span<const double> bound_grid,
                                                const ScanOptions& options = {});

struct TruncationEnergy {
    std::size_t n = 0;
    ExtendedReal energy;
};

[[nodiscard]] std::vector<TruncationEnergy> mania_one_endpoint_truncations(
    std::span<const std::size_t> n_grid, std::size_t cells = 4096, double power = 3.0,
    int order = default_quadrature_order);

/// Lower bound on the energy of (y' - 1/(2y))^2 over [c, b]:
///   -ln|y(b)| + ln|y(c)| + (ln|y(b)| - ln|y(c)|)^2 / (4 C^2 (b - c)).
/// Throws domain error when y vanishes somewhere on [c, b]; C must bound the
/// slopes of y there.
[[nodiscard]] double halfinverse_lower_bound(const Trajectory& y, double c, double b,
                                             double lipschitz);

/// Samples y_exact on the mesh and sweeps reparametrize over k_grid.
[[nodiscard]] ThresholdReport avoidance_demo(const Lagrangian& lagrangian,
                                             const ExactFunction& y_exact, const Mesh& mesh,
                                             std::span<const double> k_grid,
                                             int order = default_quadrature_order,
                                             unsigned threads = 1);

}  // namespace lavlab
