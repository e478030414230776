#include "lavlab/repar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lavlab/errors.hpp"
#include "lavlab/quadrature.hpp"
#include "parallel.hpp"

namespace lavlab {
namespace {

// Sub-pieces narrower than this (relative to b - a) are not split off.
constexpr double min_piece_fraction = 2.5e-13;
constexpr double measure_tolerance = 1e-12;

std::string number(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

double cell_width_sum(const Mesh& mesh, const std::vector<std::size_t>& cells) {
    double sum = 0.0;
    for (const auto c : cells) sum += mesh.width(c);
    return sum;
}

// Integral over one cell of L(y, d / v) v, i.e. the contribution of the
// image cell after the time change with speed v.
ExtendedReal stretched_cell(const Lagrangian& lagrangian, const Trajectory& y, std::size_t cell,
                            double speed, int order) {
    const auto& rule = gauss_legendre(order);
    const auto nodes = y.mesh().nodes();
    const auto values = y.values();
    const double t0 = nodes[cell];
    const double t1 = nodes[cell + 1];
    const double d = y.slope(cell);
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    double sum = 0.0;
    for (int q = 0; q < rule.order; ++q) {
        const double t = mid + half * rule.nodes[q];
        const double s = 0.5 * (1.0 + rule.nodes[q]);
        const double value = lagrangian(t, values[cell] + s * (values[cell + 1] - values[cell]), d / speed);
        if (!(value <= infinity_threshold)) return ExtendedReal::infinity();
        sum += rule.weights[q] * value;
    }
    return ExtendedReal(half * sum * speed);
}

}  // namespace

double choose_slow_level(const Trajectory& y) {
    const auto& mesh = y.mesh();
    std::vector<std::pair<double, double>> cells;  // (|d|, width)
    cells.reserve(y.cell_count());
    for (std::size_t i = 0; i < y.cell_count(); ++i) cells.emplace_back(std::abs(y.slope(i)), mesh.width(i));
    std::sort(cells.begin(), cells.end());
    const double half = 0.5 * mesh.length();
    double covered = 0.0;
    double level = cells.back().first;
    for (const auto& [slope, width] : cells) {
        covered += width;
        if (covered >= half) {
            level = slope;
            break;
        }
    }
    return std::max(1.0, std::ceil(level));
}

ReparPlan classify_cells(const Trajectory& y, double k, double lambda) {
    if (!(k > lambda)) {
        throw Error(ErrorKind::argument,
                    "slope threshold k = " + number(k) + " must exceed the slow level lambda = " + number(lambda));
    }
    ReparPlan plan{.k = k, .lambda = lambda, .trajectory = y, .fast_cells = {}, .slow_cells = {},
                   .accel_cells = {}, .accel_pieces = {}, .speeds = {}};
    const auto& mesh = y.mesh();
    for (std::size_t i = 0; i < y.cell_count(); ++i) {
        const double d = std::abs(y.slope(i));
        const double h = mesh.width(i);
        if (d >= k) {
            plan.fast_cells.push_back(i);
            plan.measure_fast += h;
            plan.deficit += h * (d / k - 1.0);
        }
        if (d <= lambda) {
            plan.slow_cells.push_back(i);
            plan.measure_slow += h;
        }
    }
    return plan;
}

double minimal_feasible_k(const Trajectory& y, double lambda) {
    const auto& mesh = y.mesh();
    double slow = 0.0;
    std::vector<std::pair<double, double>> cells;  // (|d|, width), steepest first
    for (std::size_t i = 0; i < y.cell_count(); ++i) {
        const double d = std::abs(y.slope(i));
        if (d <= lambda) slow += mesh.width(i);
        cells.emplace_back(d, mesh.width(i));
    }
    std::sort(cells.begin(), cells.end(), std::greater<>());
    // With the j steepest cells fast, 2 deficit(k) <= |slow| reads
    // k >= A_j / (B_j + |slow| / 2); deficit is continuous and decreasing in k.
    double weighted = 0.0;
    double widths = 0.0;
    double answer = cells.front().first;
    for (std::size_t j = 0; j < cells.size(); ++j) {
        weighted += cells[j].first * cells[j].second;
        widths += cells[j].second;
        const double next = j + 1 < cells.size() ? cells[j + 1].first : 0.0;
        const double candidate = weighted / (widths + 0.5 * slow);
        if (next <= 0.0 || candidate > next) {
            answer = candidate;
            break;
        }
    }
    return std::max(answer, lambda);
}

ReparPlan select_acceleration_set(ReparPlan plan) {
    const Mesh& mesh = plan.trajectory.mesh();
    const double length = mesh.length();
    const double need = 2.0 * plan.deficit;
    if (need > plan.measure_slow + measure_tolerance * length) {
        const double k_min = minimal_feasible_k(plan.trajectory, plan.lambda);
        throw InfeasibleError("acceleration set needs measure " + number(need) + " but the slow set has only " +
                                  number(plan.measure_slow) + "; use k >= " + number(k_min),
                              k_min);
    }

    const double min_piece = min_piece_fraction * length;
    double remaining = need;
    std::optional<std::pair<std::size_t, double>> split;  // (cell, accelerated width)
    for (const auto c : plan.slow_cells) {
        if (remaining <= 0.0) break;
        const double w = mesh.width(c);
        if (w <= remaining) {
            plan.accel_cells.push_back(c);
            remaining -= w;
            continue;
        }
        if (remaining < min_piece) break;
        plan.accel_cells.push_back(c);
        if (w - remaining >= min_piece) split.emplace(c, remaining);
        remaining = 0.0;
        break;
    }

    if (split) {
        const auto [cell, width] = *split;
        const double t_split = mesh.nodes()[cell] + width;
        plan.trajectory = with_node(plan.trajectory, t_split);
        auto shift = [cell](std::vector<std::size_t>& cells) {
            for (auto& c : cells) {
                if (c > cell) ++c;
            }
        };
        shift(plan.fast_cells);
        shift(plan.slow_cells);
        const auto pos = std::upper_bound(plan.slow_cells.begin(), plan.slow_cells.end(), cell);
        plan.slow_cells.insert(pos, cell + 1);
    }

    const Mesh& out = plan.trajectory.mesh();
    for (const auto c : plan.accel_cells) {
        const double fraction = split && split->first == c ? out.width(c) / (out.width(c) + out.width(c + 1)) : 1.0;
        plan.accel_pieces.push_back({c, fraction});
    }
    plan.measure_accel = cell_width_sum(out, plan.accel_cells);

    plan.speeds.assign(plan.trajectory.cell_count(), 1.0);
    for (const auto c : plan.fast_cells) plan.speeds[c] = std::abs(plan.trajectory.slope(c)) / plan.k;
    for (const auto c : plan.accel_cells) plan.speeds[c] = 0.5;
    plan.completed = true;
    return plan;
}

MonotoneMap build_time_change(const ReparPlan& plan) {
    if (!plan.completed) throw Error(ErrorKind::contract, "time change needs a completed plan");
    const Mesh& mesh = plan.trajectory.mesh();
    std::vector<double> speeds = plan.speeds;
    std::vector<bool> driven(speeds.size(), false);
    for (const auto c : plan.fast_cells) driven[c] = true;
    for (const auto c : plan.accel_cells) driven[c] = true;

    double defect = 0.0;
    for (std::size_t i = 0; i < speeds.size(); ++i) defect += (speeds[i] - 1.0) * mesh.width(i);
    if (defect != 0.0) {
        for (std::size_t i = speeds.size(); i-- > 0;) {
            if (driven[i]) continue;
            const double adjusted = 1.0 - defect / mesh.width(i);
            if (adjusted > 0.0) speeds[i] = adjusted;
            break;
        }
    }
    MonotoneMap phi(mesh, std::move(speeds));
    if (!phi.endpoint_exact()) {
        throw Error(ErrorKind::internal, "time change misses the endpoint by " + number(phi.endpoint_defect()));
    }
    return phi;
}

ReparResult reparametrize(const Lagrangian& lagrangian, const Trajectory& y, double k, int order) {
    if (!lagrangian.autonomous()) {
        throw Error(ErrorKind::unsupported,
                    "reparametrization needs an autonomous Lagrangian; " + lagrangian.id() + " depends on t");
    }
    const auto before = energy(lagrangian, y, {.order = order}).value;
    if (!before.is_finite()) {
        throw Error(ErrorKind::domain, "reparametrization needs finite energy; F(y) = +inf for " + lagrangian.id());
    }
    ReparPlan plan = select_acceleration_set(classify_cells(y, k, choose_slow_level(y)));
    const MonotoneMap phi = build_time_change(plan);
    Trajectory yk = push_through_inverse(plan.trajectory, phi);
    const double lip_after = yk.lipschitz_constant();
    const auto after = energy(lagrangian, yk, {.order = order}).value;
    return {.reparametrized = std::move(yk),
            .plan = std::move(plan),
            .lip_before = y.lipschitz_constant(),
            .lip_after = lip_after,
            .energy_before = before,
            .energy_after = after};
}

EnergySplit energy_split(const Lagrangian& lagrangian, const ReparPlan& plan, int order) {
    if (!plan.completed) throw Error(ErrorKind::contract, "energy split needs a completed plan");
    const MonotoneMap phi = build_time_change(plan);
    const auto speeds = phi.speeds();
    std::vector<int> role(speeds.size(), 0);
    for (const auto c : plan.accel_cells) role[c] = 1;
    for (const auto c : plan.fast_cells) role[c] = 2;
    EnergySplit split;
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        const ExtendedReal part = stretched_cell(lagrangian, plan.trajectory, i, speeds[i], order);
        if (role[i] == 1) {
            split.accelerated += part;
        } else if (role[i] == 2) {
            split.slowed += part;
        } else {
            split.untouched += part;
        }
    }
    return split;
}

ThresholdReport sweep_reparametrize(const Lagrangian& lagrangian, const Trajectory& y,
                                    std::span<const double> k_grid, int order, unsigned threads) {
    if (!lagrangian.autonomous()) {
        throw Error(ErrorKind::unsupported,
                    "reparametrization needs an autonomous Lagrangian; " + lagrangian.id() + " depends on t");
    }
    if (k_grid.empty()) throw Error(ErrorKind::argument, "k grid is empty");
    std::vector<double> grid(k_grid.begin(), k_grid.end());
    std::sort(grid.begin(), grid.end());

    ThresholdReport report;
    report.lambda = choose_slow_level(y);
    report.lip_before = y.lipschitz_constant();
    report.rows.resize(grid.size());
    detail::parallel_for(grid.size(), threads, [&](std::size_t i) {
        ThresholdRow& row = report.rows[i];
        row.k = grid[i];
        try {
            const auto result = reparametrize(lagrangian, y, row.k, order);
            row.feasible = true;
            row.measure_fast = result.plan.measure_fast;
            row.measure_accel = result.plan.measure_accel;
            row.deficit = result.plan.deficit;
            row.lip_after = result.lip_after;
            row.energy_before = result.energy_before;
            row.energy_after = result.energy_after;
            row.gap = result.gap();
            row.bound_holds = result.energy_after.is_finite() &&
                              result.energy_after.value() <= result.energy_before.value() + 1.0 / row.k;
        } catch (const InfeasibleError& e) {
            row.note = e.what();
            row.minimal_k = e.minimal_k();
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::argument) throw;
            row.note = e.what();
        }
    });

    for (std::size_t i = report.rows.size(); i-- > 0;) {
        if (!report.rows[i].bound_holds) break;
        report.k_threshold = report.rows[i].k;
    }
    return report;
}

ThresholdReport find_threshold_k(const Lagrangian& lagrangian, const Trajectory& y,
                                 std::span<const double> k_grid, int order, unsigned threads) {
    if (!lagrangian.autonomous() || !lagrangian.convex_in_v()) {
        throw Error(ErrorKind::contract,
                    "threshold search needs an autonomous, convex-in-v Lagrangian; " + lagrangian.id() + " is not");
    }
    return sweep_reparametrize(lagrangian, y, k_grid, order, threads);
}

double tangent_intercept(const Lagrangian& lagrangian, double t, double y, double w) {
    const double value = lagrangian(t, y, w);
    return value - w * lagrangian.partials(t, y, w).v;
}

InterceptProfile tangent_intercepts(const Lagrangian& lagrangian, double y, std::span<const double> w_grid,
                                    double t) {
    InterceptProfile profile;
    profile.w.assign(w_grid.begin(), w_grid.end());
    std::sort(profile.w.begin(), profile.w.end());
    double scale = 1.0;
    for (const double w : profile.w) {
        profile.p.push_back(tangent_intercept(lagrangian, t, y, w));
        scale = std::max(scale, std::abs(profile.p.back()));
    }
    const double tol = 1e-10 * scale;
    for (std::size_t i = 0; i + 1 < profile.w.size(); ++i) {
        if (profile.w[i + 1] <= 0.0 && profile.p[i + 1] < profile.p[i] - tol) {
            profile.nondecreasing_on_negative = false;
        }
        if (profile.w[i] >= 0.0 && profile.p[i + 1] > profile.p[i] + tol) {
            profile.nonincreasing_on_positive = false;
        }
    }
    return profile;
}

}  // namespace lavlab
