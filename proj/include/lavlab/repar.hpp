#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lavlab/extended_real.hpp"
#include "lavlab/functional.hpp"
#include "lavlab/lagrangian.hpp"
#include "lavlab/trajectory.hpp"

namespace lavlab {

/// Part of the acceleration set inside one cell of the input mesh: the
/// leftmost `fraction` of that cell.
struct AccelerationPiece {
    std::size_t cell = 0;
    double fraction = 1.0;
};

/// Classification of the cells driving the time change.
///
/// `trajectory` is the input, possibly with one extra node where the last
/// acceleration cell was split; all cell indices and `speeds` refer to it.
struct ReparPlan {
    double k = 0.0;
    double lambda = 0.0;
    Trajectory trajectory;
    std::vector<std::size_t> fast_cells;   ///< |d_i| >= k
    std::vector<std::size_t> slow_cells;   ///< |d_i| <= lambda
    std::vector<std::size_t> accel_cells;  ///< chosen inside slow_cells
    std::vector<AccelerationPiece> accel_pieces;
    double measure_fast = 0.0;
    double measure_slow = 0.0;
    double measure_accel = 0.0;
    /// Integral over the fast set of (|y'| / k - 1).
    double deficit = 0.0;
    std::vector<double> speeds;
    bool completed = false;
};

/// Smallest integer lambda >= 1 whose slow set covers at least half of [a, b].
[[nodiscard]] double choose_slow_level(const Trajectory& y);

/// Fast set, slow set and deficit; no acceleration set yet. Requires k > lambda.
[[nodiscard]] ReparPlan classify_cells(const Trajectory& y, double k, double lambda);

/// Smallest k for which 2 * deficit(k) <= |slow set|.
[[nodiscard]] double minimal_feasible_k(const Trajectory& y, double lambda);

/// Greedy left-to-right acceleration set of measure exactly 2 * deficit,
/// splitting the last chosen cell. Throws InfeasibleError carrying
/// minimal_feasible_k when the slow set is too small.
[[nodiscard]] ReparPlan select_acceleration_set(ReparPlan plan);

/// phi(t) = a + integral of the plan speeds; the last neutral cell absorbs
/// rounding so that phi(b) = b.
[[nodiscard]] MonotoneMap build_time_change(const ReparPlan& plan);

struct ReparResult {
    Trajectory reparametrized;
    ReparPlan plan;
    double lip_before = 0.0;
    double lip_after = 0.0;
    ExtendedReal energy_before;
    ExtendedReal energy_after;

    [[nodiscard]] double gap() const noexcept {
        return energy_after.value() - energy_before.value();
    }
};

/// Lipschitz reparametrization with |y_k'| <= 2k and the same boundary values.
/// Requires an autonomous Lagrangian and finite F(y).
[[nodiscard]] ReparResult reparametrize(const Lagrangian& lagrangian, const Trajectory& y, double k,
                                        int order = default_quadrature_order);

/// F(y_k) recomputed on the plan's cells: untouched cells, the accelerated
/// set (1/2) int L(y, 2y'), and the slowed set int L(y, y'/v) v.
struct EnergySplit {
    ExtendedReal untouched;
    ExtendedReal accelerated;
    ExtendedReal slowed;

    [[nodiscard]] ExtendedReal total() const { return untouched + accelerated + slowed; }
};

[[nodiscard]] EnergySplit energy_split(const Lagrangian& lagrangian, const ReparPlan& plan,
                                       int order = default_quadrature_order);

struct ThresholdRow {
    double k = 0.0;
    bool feasible = false;
    std::string note;
    double measure_fast = 0.0;
    double measure_accel = 0.0;
    double deficit = 0.0;
    /// Infeasible rows: the smallest k for which the construction fits.
    std::optional<double> minimal_k;
    double lip_after = 0.0;
    ExtendedReal energy_before;
    ExtendedReal energy_after;
    double gap = 0.0;
    /// F(y_k) <= F(y) + 1/k
    bool bound_holds = false;
};

struct ThresholdReport {
    /// Smallest grid k from which the bound holds at every larger grid k.
    std::optional<double> k_threshold;
    double lambda = 0.0;
    double lip_before = 0.0;
    std::vector<ThresholdRow> rows;
};

/// One reparametrization per grid k (sorted ascending); rows for k <= lambda
/// or an infeasible acceleration set are kept and marked infeasible. Needs
/// only autonomy; k_threshold is filled in either way.
[[nodiscard]] ThresholdReport sweep_reparametrize(const Lagrangian& lagrangian,
                                                  const Trajectory& y,
                                                  std::span<const double> k_grid,
                                                  int order = default_quadrature_order,
                                                  unsigned threads = 1);

/// Sweeps the (sorted) k grid. Requires an autonomous, convex-in-v Lagrangian.
/// A grid without a threshold yields an empty k_threshold, not an exception.
[[nodiscard]] ThresholdReport find_threshold_k(const Lagrangian& lagrangian, const Trajectory& y,
                                               std::span<const double> k_grid,
                                               int order = default_quadrature_order,
                                               unsigned threads = 1);

/// P(w) = L(t, y, w) - w L_v(t, y, w): intercept of the tangent at w with the
/// vertical axis.
[[nodiscard]] double tangent_intercept(const Lagrangian& lagrangian, double t, double y, double w);

struct InterceptProfile {
    std::vector<double> w;
    std::vector<double> p;
    bool nondecreasing_on_negative = true;
    bool nonincreasing_on_positive = true;
};

/// P on a sorted grid with monotonicity checks at tolerance 1e-10 * scale.
[[nodiscard]] InterceptProfile tangent_intercepts(const Lagrangian& lagrangian, double y,
                                                  std::span<const double> w_grid, double t = 0.0);

}  // namespace lavlab
