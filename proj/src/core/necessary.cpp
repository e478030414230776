#include "lavlab/necessary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lavlab/errors.hpp"

namespace lavlab {
namespace {

void finish(ResidualReport& report) {
    report.max_abs = 0.0;
    for (const auto& s : report.samples) report.max_abs = std::max(report.max_abs, std::abs(s.residual));
}

}  // namespace

ResidualReport euler_lagrange_residual(const Lagrangian& lagrangian, const Trajectory& y) {
    if (y.cell_count() < 3) throw Error(ErrorKind::argument, "Euler-Lagrange residual needs at least three cells");
    const auto nodes = y.mesh().nodes();
    const auto values = y.values();
    const std::size_t cells = y.cell_count();

    // L_v at cell midpoints, NaN where singular.
    std::vector<double> flux(cells, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < cells; ++i) {
        const double tm = 0.5 * (nodes[i] + nodes[i + 1]);
        const double ym = 0.5 * (values[i] + values[i + 1]);
        try {
            flux[i] = lagrangian.partials(tm, ym, y.slope(i)).v;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::singular_point) throw;
        }
    }

    ResidualReport report;
    report.mesh_resolution = cells;
    for (std::size_t i = 1; i < cells; ++i) {
        const double t = nodes[i];
        if (std::isnan(flux[i - 1]) || std::isnan(flux[i])) {
            report.skipped.push_back(t);
            continue;
        }
        const double mean_slope = 0.5 * (y.slope(i - 1) + y.slope(i));
        const double spacing = 0.5 * (nodes[i + 1] - nodes[i - 1]);
        try {
            const double ly = lagrangian.partials(t, values[i], mean_slope).y;
            report.samples.push_back({t, ly - (flux[i] - flux[i - 1]) / spacing});
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::singular_point) throw;
            report.skipped.push_back(t);
        }
    }
    finish(report);
    return report;
}

ResidualReport du_bois_reymond_residual(const Lagrangian& lagrangian, const Trajectory& y) {
    if (!lagrangian.autonomous()) {
        throw Error(ErrorKind::unsupported,
                    "Du Bois-Reymond check covers autonomous Lagrangians only; " + lagrangian.id() + " depends on t");
    }
    const auto nodes = y.mesh().nodes();
    const auto values = y.values();
    ResidualReport report;
    report.mesh_resolution = y.cell_count();
    for (std::size_t i = 0; i < y.cell_count(); ++i) {
        const double tm = 0.5 * (nodes[i] + nodes[i + 1]);
        const double ym = 0.5 * (values[i] + values[i + 1]);
        const double d = y.slope(i);
        try {
            const double e = lagrangian(tm, ym, d) - d * lagrangian.partials(tm, ym, d).v;
            report.samples.push_back({tm, e});
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::singular_point) throw;
            report.skipped.push_back(tm);
        }
    }
    if (!report.samples.empty()) {
        double sum = 0.0;
        for (const auto& s : report.samples) sum += s.residual;
        const double mean = sum / static_cast<double>(report.samples.size());
        for (auto& s : report.samples) s.residual -= mean;
        report.constant = mean;
    }
    finish(report);
    return report;
}

CatenaryFit fit_catenary(double a, double A, double b, double B) {
    if (!(a < b)) throw Error(ErrorKind::argument, "catenary fit needs a < b");
    if (!(A > 0.0) || !(B > 0.0)) {
        throw Error(ErrorKind::domain, "a catenary with alpha > 0 is positive; both end values must be > 0");
    }
    // From the left condition, alpha a + beta = +-acosh(alpha A), which needs
    // alpha >= 1/A; the right condition is then a scalar equation in alpha.
    auto beta_of = [&](double alpha, int branch) { return branch * std::acosh(std::max(1.0, alpha * A)) - alpha * a; };
    auto mismatch = [&](double alpha, int branch) { return std::cosh(alpha * b + beta_of(alpha, branch)) / alpha - B; };

    const double lo = 1.0 / A;
    const double hi = 1e4 * (1.0 / A + 1.0 / B + 1.0 / (b - a));
    const int steps = 4000;
    const double ratio = std::pow(hi / lo, 1.0 / steps);

    std::optional<CatenaryFit> best;
    for (const int branch : {-1, 1}) {
        double x0 = lo;
        double f0 = mismatch(x0, branch);
        for (int s = 1; s <= steps; ++s) {
            const double x1 = lo * std::pow(ratio, s);
            const double f1 = mismatch(x1, branch);
            if (!std::isfinite(f1)) break;
            if (f0 == 0.0 || f0 * f1 < 0.0) {
                double left = x0;
                double right = x1;
                double f_left = f0;
                if (f0 != 0.0) {
                    for (int it = 0; it < 200; ++it) {
                        const double middle = 0.5 * (left + right);
                        const double fm = mismatch(middle, branch);
                        if (fm == 0.0) {
                            left = right = middle;
                            break;
                        }
                        if ((fm < 0.0) == (f_left < 0.0)) {
                            left = middle;
                            f_left = fm;
                        } else {
                            right = middle;
                        }
                    }
                }
                const double alpha = 0.5 * (left + right);
                if (!best || alpha < best->alpha) best = CatenaryFit{alpha, beta_of(alpha, branch)};
                break;
            }
            x0 = x1;
            f0 = f1;
        }
    }
    if (!best) throw Error(ErrorKind::domain, "no catenary connects the two boundary points");
    return *best;
}

}  // namespace lavlab
