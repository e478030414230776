#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "lavlab/errors.hpp"
#include "lavlab/exact.hpp"
#include "lavlab/functional.hpp"
#include "lavlab/gapscan.hpp"
#include "oracles.hpp"

using namespace lavlab;

namespace {

Lagrangian v_squared() {
    return polynomial_lagrangian("v2", {{.coefficient = {1, 1}, .v_power = 2}}, true);
}

std::vector<Mesh> family(std::size_t from, std::size_t to, double power) {
    std::vector<Mesh> out;
    for (std::size_t n = from; n <= to; n *= 2) out.push_back(graded_mesh(0.0, 1.0, n, power));
    return out;
}

Trajectory random_trajectory(oracle::Rng& rng, std::size_t cells) {
    std::vector<double> t{0.0};
    std::vector<double> y{rng.uniform(-1.0, 1.0)};
    for (std::size_t i = 0; i < cells; ++i) {
        t.push_back(t.back() + rng.log_uniform(1e-2, 1.0));
        y.push_back(y.back() + rng.uniform(-3.0, 3.0) * (t.back() - t[t.size() - 2]));
    }
    return Trajectory(Mesh(t), y);
}

// Integrand with every term taken in absolute value; the floating-point
// error of a quadrature sum is relative to this, not to the (possibly
// cancelling) integrand itself.
Lagrangian majorant(const std::string& id) {
    Lagrangian::Evaluator f;
    if (id == "sqrt_chain") f = [](double, double y, double v) { return std::pow(2.0 * std::abs(y * v) + 1.0, 2); };
    if (id == "quartic") f = [](double, double, double v) { return std::pow(v * v + 1.0, 2); };
    if (id == "quartic_plus_square") f = [](double, double y, double v) { return std::pow(v * v + 1.0, 2) + y * y; };
    if (id == "mania") {
        f = [](double t, double y, double v) { return std::pow(std::abs(y * y * y) + std::abs(t), 2) * std::pow(v, 6); };
    }
    return Lagrangian(id + "_majorant", f, std::nullopt, {});
}

}  // namespace

TEST_CASE("v^2 on the identity is exactly 1 for every order") {
    const Trajectory y = sample(exact_function("identity").value, graded_mesh(0.0, 1.0, 7, 2.0));
    for (int order = 1; order <= 12; ++order) {
        const auto report = energy(v_squared(), y, {.order = order});
        CHECK(report.value.value() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(report.per_cell.size() == 7);
        CHECK(report.quadrature_order == order);
    }
    CHECK_THROWS_AS(energy(v_squared(), y, {.order = 0}), Error);
}

TEST_CASE("sawtooth under the quartic plus square is 1/(12 n^2)") {
    for (std::size_t n : {1, 3, 10, 100, 1000}) {
        const Trajectory y = sawtooth_sequence(n);
        for (int order : {2, 5, 8}) {
            const double value = energy(catalog("quartic_plus_square"), y, {.order = order}).value.value();
            CHECK(std::abs(value - oracle::sawtooth_square_energy(n)) <= 1e-10);
            CHECK(value <= 1.0 / (4.0 * n * n));
        }
    }
}

TEST_CASE("classical minimizing sequences stay under their bounds") {
    for (std::size_t n : {10, 100, 1000}) {
        const double dn = static_cast<double>(n);
        const double chain = energy(catalog("sqrt_chain"), sqrt_ramp_sequence(n)).value.value();
        CHECK(chain <= 3.0 / dn);
        // the ramp alone contributes 1/(3n); the graded tail adds little
        CHECK(chain >= oracle::ramp_segment_energy(dn) * (1 - 1e-9));
        const double tent = energy(catalog("quartic"), mollified_tent_sequence(n)).value.value();
        CHECK(tent <= 2.0 / dn);
    }
}

TEST_CASE("value is the extended sum of the cells") {
    const Trajectory y(Mesh({0.0, 0.5, 1.0}), {0.0, 0.0, 1.0});
    const auto report = energy(catalog("half_inverse"), y);
    // y = 0 on the whole first cell
    CHECK_FALSE(report.per_cell[0].is_finite());
    CHECK(report.per_cell[1].is_finite());
    CHECK_FALSE(report.value.is_finite());
    const Trajectory pos(Mesh({0.0, 0.5, 1.0}), {1.0, 2.0, 1.5});
    const auto ok = energy(catalog("half_inverse"), pos);
    CHECK(ok.value.value() == doctest::Approx(ok.per_cell[0].value() + ok.per_cell[1].value()));
}

TEST_CASE("chord of t^(1/3) on the first graded cell has energy 8/(105 h)") {
    for (std::size_t n : {16, 64, 256, 1024}) {
        const Mesh m = graded_mesh(0.0, 1.0, n, 3.0);
        const Trajectory y = sample(exact_function("cuberoot").value, m);
        const auto report = energy(catalog("mania"), y);
        const double h = m.nodes()[1];
        CHECK(report.per_cell[0].value() == doctest::Approx(oracle::mania_first_chord_energy(h)).epsilon(1e-10));
        // the interpolants diverge while the exact function has zero energy
        CHECK(report.value.value() >= oracle::mania_first_chord_energy(h));
    }
}

TEST_CASE("energy along exact minimizers converges to zero") {
    const auto meshes = family(64, 4096, 3.0);
    const auto mania = energy_converged(catalog("mania"), exact_function("cuberoot"), meshes, 5, 1e-8);
    // oracle: adaptive Simpson of the integrand along t^(1/3) on [1e-12, 1]
    const Lagrangian L = catalog("mania");
    const double reference = oracle::adaptive_simpson(
        [&](double t) { return L(t, std::cbrt(t), 1.0 / (3.0 * std::cbrt(t * t))); }, 1e-12, 1.0, 1e-14);
    CHECK(mania.value.value() <= 1e-3);
    CHECK(std::abs(mania.value.value() - reference) <= 1e-3);
    CHECK(mania.converged);

    const auto meshes2 = family(64, 4096, 2.0);
    const auto chain = energy_converged(catalog("sqrt_chain"), exact_function("sqrt"), meshes2, 5, 1e-8);
    CHECK(chain.value.value() <= 1e-10);
    const auto half = energy_converged(catalog("half_inverse"), exact_function("sqrt"), meshes2, 5, 1e-8);
    CHECK(half.value.value() <= 1e-10);
    CHECK(half.history.front().cells == 64);
}

TEST_CASE("energy_converged reports non-convergence on a diverging family") {
    // the interpolant family is not exact; use the closed form of a
    // function whose energy is infinite: half_inverse along y = t
    const ExactFunction line = exact_function("identity");
    const auto meshes = family(8, 256, 1.0);
    const auto result = energy_converged(catalog("half_inverse"), line, meshes, 5, 1e-8);
    CHECK_FALSE(result.converged);
    CHECK(result.history.size() == meshes.size());
    CHECK(result.history.back().value > result.history.front().value);
    const std::vector<Mesh> none;
    CHECK_THROWS_AS(energy_converged(catalog("mania"), line, none, 5, 1e-8), Error);
}

TEST_CASE("property: energies are non-negative") {
    oracle::Rng rng(31);
    for (std::string_view id : catalog_ids()) {
        for (int i = 0; i < 30; ++i) {
            const Trajectory y = random_trajectory(rng, rng.index(1, 40));
            CHECK(energy(catalog(id), y).value.value() >= 0.0);
        }
    }
}

TEST_CASE("property: doubling the order is exact for polynomial integrands") {
    // sqrt_chain, quartic, quartic_plus_square and mania are polynomials of
    // degree <= 6 in t along a linear cell; order 5 integrates degree 9
    oracle::Rng rng(32);
    for (const char* id : {"sqrt_chain", "quartic", "quartic_plus_square", "mania"}) {
        const Lagrangian L = catalog(id);
        for (int i = 0; i < 100; ++i) {
            const double t0 = rng.uniform(0.0, 1.0);
            const double t1 = t0 + rng.log_uniform(1e-3, 1.0);
            const double y0 = rng.uniform(-1.5, 1.5);
            const double y1 = rng.uniform(-1.5, 1.5);
            const double lo = cell_energy(L, t0, t1, y0, y1, 5).value();
            const double hi = cell_energy(L, t0, t1, y0, y1, 10).value();
            const double scale = cell_energy(majorant(id), t0, t1, y0, y1, 10).value();
            INFO(id, " t0=", t0, " t1=", t1, " y0=", y0, " y1=", y1, " lo=", lo, " hi=", hi);
            CHECK(std::abs(lo - hi) <= 1e-13 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("property: splitting a cell leaves the energy unchanged") {
    oracle::Rng rng(33);
    for (const char* id : {"sqrt_chain", "quartic_plus_square", "mania"}) {
        const Lagrangian L = catalog(id);
        for (int i = 0; i < 100; ++i) {
            const Trajectory y = random_trajectory(rng, rng.index(1, 20));
            const std::size_t cell = rng.index(0, y.cell_count() - 1);
            const double t = y.mesh().nodes()[cell] + rng.uniform(0.05, 0.95) * y.mesh().width(cell);
            const double whole = energy(L, y).value.value();
            const double split = energy(L, with_node(y, t)).value.value();
            const double scale = energy(majorant(id), y).value.value();
            CHECK(std::abs(whole - split) <= 1e-12 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("adaptive oracle agrees with Gauss-Legendre on smooth cells") {
    oracle::Rng rng(34);
    const Lagrangian L = catalog("surface_of_revolution");
    for (int i = 0; i < 20; ++i) {
        const Trajectory raw = random_trajectory(rng, 5);
        // keep y away from the kink of |y|
        std::vector<double> lifted(raw.values().begin(), raw.values().end());
        for (double& x : lifted) x += 20.0;
        const Trajectory y(raw.mesh(), lifted);
        const auto fine = bisected(bisected(bisected(bisected(y))));
        const double got = energy(L, fine, {.order = 12}).value.value();
        std::vector<double> t(y.mesh().nodes().begin(), y.mesh().nodes().end());
        std::vector<double> v(y.values().begin(), y.values().end());
        const double want = oracle::piecewise_linear_energy(
            [&](double s, double a, double b) { return L(s, a, b); }, t, v, 1e-13);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
}
