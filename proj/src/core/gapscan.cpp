#include "lavlab/gapscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "lavlab/errors.hpp"
#include "parallel.hpp"

namespace lavlab {
namespace {

constexpr double clip_margin = 1.0 - 1e-12;

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

Trajectory sample_exact(std::string_view name, std::size_t n, const Mesh& mesh) {
    const auto f = exact_function(name, {{"n", static_cast<double>(n)}});
    return sample(f.value, mesh);
}

std::vector<double> graded_tail(double from, double to, std::size_t cells, double power) {
    const Mesh tail = graded_mesh(from, to, cells, power);
    return {tail.nodes().begin(), tail.nodes().end()};
}

// Energy bookkeeping for the descent: per-cell contributions of the current
// iterate so a nodal perturbation only re-evaluates two cells.
struct Objective {
    const Lagrangian& lagrangian;
    std::span<const double> nodes;
    int order;

    double cell(std::span<const double> y, std::size_t i) const {
        const auto e = cell_energy(lagrangian, nodes[i], nodes[i + 1], y[i], y[i + 1], order);
        return e.is_finite() ? e.value() : std::numeric_limits<double>::infinity();
    }
    double total(std::span<const double> y) const {
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) sum += cell(y, i);
        return sum;
    }
};

struct Descent {
    std::vector<double> values;
    double energy = 0.0;
    std::size_t iterations = 0;
};

Descent descend(const Objective& objective, const Mesh& mesh, std::vector<double> values, double bound,
                const Boundary& boundary, std::size_t max_iterations) {
    const std::size_t n = mesh.cell_count();
    const std::size_t first = boundary.start ? 1 : 0;
    const std::size_t last = n - 1;  // node n is always fixed
    double current = objective.total(values);
    std::vector<double> grad(n + 1, 0.0);
    std::vector<double> previous_grad(n + 1, 0.0);
    std::vector<double> previous_values;
    std::vector<double> trial(values.size());

    auto gradient = [&] {
        double norm2 = 0.0;
        for (std::size_t j = first; j <= last; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(values[j]));
            const double saved = values[j];
            auto local = [&] {
                double e = objective.cell(values, j);
                if (j > 0) e += objective.cell(values, j - 1);
                return e;
            };
            values[j] = saved + h;
            const double up = local();
            values[j] = saved - h;
            const double down = local();
            values[j] = saved;
            grad[j] = std::isfinite(up) && std::isfinite(down) ? (up - down) / (2.0 * h) : 0.0;
            norm2 += grad[j] * grad[j];
        }
        return norm2;
    };

    double step = 1e-3;
    std::size_t it = 0;
    std::size_t stalls = 0;
    for (; it < max_iterations; ++it) {
        const double grad_norm2 = gradient();
        if (!(grad_norm2 > 0.0)) break;
        if (!previous_values.empty()) {
            // Barzilai-Borwein trial step from the last displacement.
            double ss = 0.0;
            double sy = 0.0;
            for (std::size_t j = first; j <= last; ++j) {
                const double s = values[j] - previous_values[j];
                ss += s * s;
                sy += s * (grad[j] - previous_grad[j]);
            }
            step = sy > 0.0 ? std::clamp(ss / sy, 1e-14, 1e6) : std::min(4.0 * step, 1e6);
        }

        bool accepted = false;
        double next = current;
        double trial_step = step;
        for (int halving = 0; halving <= 40; ++halving) {
            for (std::size_t j = 0; j < values.size(); ++j) trial[j] = values[j];
            for (std::size_t j = first; j <= last; ++j) trial[j] -= trial_step * grad[j];
            auto projected = project_slopes(mesh, trial, bound, boundary);
            if (projected) {
                double decrease = 0.0;
                for (std::size_t j = 0; j < values.size(); ++j) decrease += grad[j] * (values[j] - (*projected)[j]);
                const double e = objective.total(*projected);
                if (e <= current - 1e-4 * decrease && e < current) {
                    trial = std::move(*projected);
                    next = e;
                    accepted = true;
                    break;
                }
            }
            trial_step *= 0.5;
        }
        if (!accepted) break;
        const double gain = current - next;
        previous_values = values;
        previous_grad = grad;
        values.swap(trial);
        current = next;
        stalls = gain <= 1e-14 * std::max(current, 1e-300) ? stalls + 1 : 0;
        if (stalls >= 5) break;
    }
    return {std::move(values), current, it};
}

bool within_bound(const Mesh& mesh, std::span<const double> values, double bound) {
    for (std::size_t i = 0; i < mesh.cell_count(); ++i) {
        if (!(std::abs((values[i + 1] - values[i]) / mesh.width(i)) <= bound)) return false;
    }
    return true;
}

}  // namespace

Trajectory sqrt_ramp_sequence(std::size_t n, std::size_t cells) {
    if (n < 1 || cells < 2) throw Error(ErrorKind::argument, "sqrt_ramp_sequence needs n >= 1 and cells >= 2");
    const double cut = 1.0 / static_cast<double>(n);
    std::vector<double> nodes{0.0};
    if (n == 1) {
        nodes = graded_tail(0.0, 1.0, 1, 1.0);
    } else {
        const auto tail = graded_tail(cut, 1.0, cells - 1, 2.0);
        nodes.insert(nodes.end(), tail.begin(), tail.end());
    }
    return sample_exact("sqrt_ramp", n, Mesh(std::move(nodes)));
}

Trajectory mollified_tent_sequence(std::size_t n, std::size_t cells) {
    if (n < 2 || cells < 1) throw Error(ErrorKind::argument, "mollified_tent_sequence needs n >= 2 and cells >= 1");
    const double width = 1.0 / static_cast<double>(n);
    const double lo = 0.5 - width;
    const double hi = 0.5 + width;
    std::vector<double> nodes;
    if (lo > 0.0) nodes.push_back(0.0);
    const auto middle = graded_tail(lo, hi, cells, 1.0);
    nodes.insert(nodes.end(), middle.begin(), middle.end());
    if (hi < 1.0) nodes.push_back(1.0);
    return sample_exact("mollified_tent", n, Mesh(std::move(nodes)));
}

Trajectory sawtooth_sequence(std::size_t n) {
    if (n < 1) throw Error(ErrorKind::argument, "sawtooth_sequence needs n >= 1");
    const Mesh mesh = graded_mesh(0.0, 1.0, 2 * n);
    std::vector<double> values(2 * n + 1, 0.0);
    for (std::size_t i = 1; i < values.size(); i += 2) values[i] = 0.5 / static_cast<double>(n);
    return Trajectory(mesh, std::move(values));
}

Trajectory mania_truncation_sequence(std::size_t n, std::size_t cells, double power) {
    if (n < 1 || cells < 1) throw Error(ErrorKind::argument, "mania_truncation_sequence needs n >= 1 and cells >= 1");
    const double cut = 1.0 / (static_cast<double>(n) + 1.0);
    std::vector<double> nodes{0.0};
    const auto tail = graded_tail(cut, 1.0, cells, power);
    nodes.insert(nodes.end(), tail.begin(), tail.end());
    return sample_exact("mania_truncation", n, Mesh(std::move(nodes)));
}

std::optional<std::vector<double>> project_slopes(const Mesh& mesh, std::span<const double> values, double bound,
                                                  const Boundary& boundary) {
    if (values.size() != mesh.node_count()) throw Error(ErrorKind::argument, "projection needs one value per node");
    if (!(bound > 0.0)) throw Error(ErrorKind::argument, "slope bound must be positive");
    const std::size_t n = mesh.cell_count();
    const bool already = within_bound(mesh, values, bound) && values[n] == boundary.end &&
                         (!boundary.start || values[0] == *boundary.start);
    if (already) return std::vector<double>(values.begin(), values.end());

    const double limit = bound * clip_margin;
    std::vector<double> slopes(n);
    for (std::size_t i = 0; i < n; ++i) slopes[i] = (values[i + 1] - values[i]) / mesh.width(i);
    std::vector<double> out(n + 1);

    if (!boundary.start) {
        // Only the final value is prescribed: clip from the right, anchored at B.
        out[n] = boundary.end;
        for (std::size_t i = n; i-- > 0;) {
            out[i] = out[i + 1] - std::clamp(slopes[i], -limit, limit) * mesh.width(i);
        }
        return out;
    }

    const double start = *boundary.start;
    std::vector<bool> clipped(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(slopes[i]) > limit) {
            slopes[i] = std::clamp(slopes[i], -limit, limit);
            clipped[i] = true;
        }
    }
    // Spread the endpoint defect uniformly over the free cells; cells pushed
    // past the bound are clipped and the rest re-corrected.
    for (std::size_t round = 0; round <= n; ++round) {
        double reach = start;
        double free_width = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            reach += slopes[i] * mesh.width(i);
            if (!clipped[i]) free_width += mesh.width(i);
        }
        const double defect = boundary.end - reach;
        if (std::abs(defect) <= 1e-15 * std::max(1.0, std::abs(boundary.end))) break;
        if (free_width <= 0.0) return std::nullopt;
        const double shift = defect / free_width;
        bool overflow = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (clipped[i]) continue;
            slopes[i] += shift;
            if (std::abs(slopes[i]) > limit) {
                slopes[i] = std::clamp(slopes[i], -limit, limit);
                clipped[i] = true;
                overflow = true;
            }
        }
        if (!overflow) break;
    }
    out[0] = start;
    for (std::size_t i = 0; i < n; ++i) out[i + 1] = out[i] + slopes[i] * mesh.width(i);
    out[n] = boundary.end;
    if (!within_bound(mesh, out, bound)) return std::nullopt;
    return out;
}

BoundedMinimum minimize_bounded(const Lagrangian& lagrangian, const Mesh& mesh, double bound,
                                const Boundary& boundary, const MinimizeOptions& options) {
    if (!(bound > 0.0) || !std::isfinite(bound)) throw Error(ErrorKind::argument, "slope bound must be finite and > 0");
    const std::size_t n = mesh.cell_count();
    const double a = mesh.a();
    const double length = mesh.length();
    if (boundary.start && !(bound > std::abs(boundary.end - *boundary.start) / length)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "slope bound " << bound << " cannot connect the boundary values (needs > "
            << std::abs(boundary.end - *boundary.start) / length << ")";
        throw Error(ErrorKind::argument, msg.str());
    }
    const auto nodes = mesh.nodes();
    const Objective objective{lagrangian, nodes, options.order};
    const double start_value = boundary.start.value_or(boundary.end);

    std::vector<std::vector<double>> starts;
    {
        std::vector<double> line(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            line[i] = start_value + (boundary.end - start_value) * (nodes[i] - a) / length;
        }
        line[n] = boundary.end;
        starts.push_back(std::move(line));
    }
    for (const auto& warm : options.warm_starts) {
        if (!(warm.mesh() == mesh)) throw Error(ErrorKind::argument, "warm start must live on the minimization mesh");
        starts.emplace_back(warm.values().begin(), warm.values().end());
    }
    std::uint64_t state = options.seed;
    for (std::size_t r = 0; r < options.restarts; ++r) {
        std::mt19937_64 gen(splitmix64(state));
        const double power = 0.2 + 1.6 * unit(gen);
        const double roughness = unit(gen);
        std::vector<double> shape(n + 1);
        double walk = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            const double s = (nodes[i] - a) / length;
            if (i > 0) walk += (2.0 * unit(gen) - 1.0) * roughness * bound * mesh.width(i - 1);
            shape[i] = start_value + (boundary.end - start_value) * std::pow(s, power) + walk;
        }
        starts.push_back(std::move(shape));
    }

    std::optional<BoundedMinimum> best;
    std::size_t total_iterations = 0;
    for (auto& start : starts) {
        auto projected = project_slopes(mesh, start, bound, boundary);
        if (!projected) continue;
        auto run = descend(objective, mesh, std::move(*projected), bound, boundary, options.max_iterations);
        total_iterations += run.iterations;
        if (!best || run.energy < best->energy) {
            best = BoundedMinimum{Trajectory(mesh, std::move(run.values)), run.energy, 0};
        }
    }
    if (!best) throw Error(ErrorKind::internal, "no feasible starting point survived projection");
    best->iterations = total_iterations;
    if (!within_bound(mesh, best->trajectory.values(), bound)) {
        throw Error(ErrorKind::internal, "bounded minimizer left the slope box");
    }
    return *best;
}

GapReport mania_two_endpoint_scan(std::span<const std::size_t> n_grid, std::span<const double> bound_grid,
                                  const ScanOptions& options) {
    if (n_grid.empty() || bound_grid.empty()) throw Error(ErrorKind::argument, "gap scan needs non-empty n and M grids");
    std::vector<double> bounds(bound_grid.begin(), bound_grid.end());
    std::sort(bounds.begin(), bounds.end());
    const Lagrangian mania = catalog("mania");
    const Boundary boundary{0.0, 1.0};

    GapReport report;
    report.rows.resize(n_grid.size() * bounds.size());
    detail::parallel_for(n_grid.size(), options.threads, [&](std::size_t ni) {
        const std::size_t cells = n_grid[ni];
        if (cells < 1) throw Error(ErrorKind::argument, "mesh size must be >= 1");
        const Mesh mesh = graded_mesh(0.0, 1.0, cells);
        std::optional<Trajectory> previous;
        for (std::size_t mi = 0; mi < bounds.size(); ++mi) {
            MinimizeOptions opts{.restarts = options.restarts,
                                 .seed = options.seed ^ (0x9E3779B97F4A7C15ULL * (cells + 1)) ^ mi,
                                 .order = options.order,
                                 .max_iterations = options.max_iterations,
                                 .warm_starts = {}};
            if (previous) opts.warm_starts.push_back(*previous);
            auto result = minimize_bounded(mania, mesh, bounds[mi], boundary, opts);
            report.rows[ni * bounds.size() + mi] = {cells, bounds[mi], result.energy, result.iterations};
            previous = std::move(result.trajectory);
        }
    });

    report.floor_estimate = std::numeric_limits<double>::infinity();
    for (const auto& row : report.rows) report.floor_estimate = std::min(report.floor_estimate, row.best_energy);

    std::vector<Mesh> family;
    for (std::size_t cells = 64; cells <= 4096; cells *= 2) family.push_back(graded_mesh(0.0, 1.0, cells, 3.0));
    const auto reference = energy_converged(mania, exact_function("cuberoot"), family, options.order, 1e-8);
    report.reference_energy = reference.value;
    report.reference_converged = reference.converged;
    report.gap_estimate = report.floor_estimate - reference.value.value();
    return report;
}

std::vector<TruncationEnergy> mania_one_endpoint_truncations(std::span<const std::size_t> n_grid, std::size_t cells,
                                                             double power, int order) {
    const Lagrangian mania = catalog("mania");
    std::vector<TruncationEnergy> out;
    out.reserve(n_grid.size());
    for (const auto n : n_grid) {
        out.push_back({n, energy(mania, mania_truncation_sequence(n, cells, power), {.order = order}).value});
    }
    return out;
}

double halfinverse_lower_bound(const Trajectory& y, double c, double b, double lipschitz) {
    const auto& mesh = y.mesh();
    if (!(c < b) || c < mesh.a() || b > mesh.b()) {
        throw Error(ErrorKind::argument, "lower-bound interval must satisfy a <= c < b <= mesh end");
    }
    if (!(lipschitz > 0.0)) throw Error(ErrorKind::argument, "Lipschitz constant must be positive");
    const auto nodes = mesh.nodes();
    const auto values = y.values();
    std::vector<double> along{y.eval(c)};
    double steepest = 0.0;
    for (std::size_t i = 0; i < y.cell_count(); ++i) {
        if (nodes[i + 1] <= c || nodes[i] >= b) continue;
        steepest = std::max(steepest, std::abs(y.slope(i)));
        if (nodes[i + 1] < b) along.push_back(values[i + 1]);
    }
    along.push_back(y.eval(b));
    for (std::size_t i = 0; i < along.size(); ++i) {
        if (along[i] == 0.0 || (i > 0 && (along[i] > 0.0) != (along[i - 1] > 0.0))) {
            throw Error(ErrorKind::domain, "trajectory vanishes inside the lower-bound interval");
        }
    }
    if (lipschitz < steepest * (1.0 - 1e-12)) {
        throw Error(ErrorKind::argument, "C must bound |y'| on the interval");
    }
    const double log_c = std::log(std::abs(along.front()));
    const double log_b = std::log(std::abs(along.back()));
    const double spread = log_b - log_c;
    return -log_b + log_c + spread * spread / (4.0 * lipschitz * lipschitz * (b - c));
}

ThresholdReport avoidance_demo(const Lagrangian& lagrangian, const ExactFunction& y_exact, const Mesh& mesh,
                               std::span<const double> k_grid, int order, unsigned threads) {
    return find_threshold_k(lagrangian, sample(y_exact.value, mesh), k_grid, order, threads);
}

}  // namespace lavlab
