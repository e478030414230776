// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance [--criterion N]... [--cli PATH]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lavlab/errors.hpp"
#include "lavlab/exact.hpp"
#include "lavlab/functional.hpp"
#include "lavlab/gapscan.hpp"
#include "lavlab/necessary.hpp"
#include "lavlab/repar.hpp"
#include "oracles.hpp"

using namespace lavlab;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::string cli_path;

// 1. Explicit minimizing sequences against their closed-form bounds.
void minimizing_sequences(Outcome& out) {
    double slowest = 0.0;
    for (std::size_t n : {10, 100, 1000}) {
        const double dn = static_cast<double>(n);
        auto timed = [&](auto&& f) {
            const auto start = Clock::now();
            const double v = f();
            slowest = std::max(slowest, seconds_since(start));
            return v;
        };
        const double chain = timed([&] { return energy(catalog("sqrt_chain"), sqrt_ramp_sequence(n)).value.value(); });
        const double tent = timed([&] { return energy(catalog("quartic"), mollified_tent_sequence(n)).value.value(); });
        const double saw = timed([&] { return energy(catalog("quartic_plus_square"), sawtooth_sequence(n)).value.value(); });
        out.require(chain <= 3.0 / dn, "sqrt_chain n=" + std::to_string(n) + " above 3/n");
        out.require(tent <= 2.0 / dn, "quartic n=" + std::to_string(n) + " above 2/n");
        out.require(saw <= 1.0 / (4.0 * dn * dn), "sawtooth n=" + std::to_string(n) + " above 1/(2n)^2");
        out.require(std::abs(saw - oracle::sawtooth_square_energy(dn)) <= 1e-10,
                    "sawtooth n=" + std::to_string(n) + " off 1/(12n^2)");
        out.detail << " n=" << n << ": n*F_chain=" << g(chain * dn) << " n*F_tent=" << g(tent * dn)
                   << " 12n^2*F_saw=" << g(saw * 12 * dn * dn) << ";";
    }
    out.require(slowest < 1.0, "an evaluation took >= 1 s");
    out.detail << " slowest " << g(slowest) << " s";
}

// 2. Known minimizers have (numerically) zero energy.
void known_minimizers(Outcome& out) {
    const auto start = Clock::now();
    std::vector<Mesh> family;
    for (std::size_t n = 64; n <= (1u << 14); n *= 2) family.push_back(graded_mesh(0.0, 1.0, n, 3.0));
    const auto mania = energy_converged(catalog("mania"), exact_function("cuberoot"), family, 5, 1e-8);
    const auto half = energy_converged(catalog("half_inverse"), exact_function("sqrt"), family, 5, 1e-8);
    const double elapsed = seconds_since(start);
    out.require(mania.value.value() <= 1e-3, "mania on t^(1/3) above 1e-3");
    out.require(half.value.value() <= 1e-3, "half_inverse on sqrt t above 1e-3");
    out.require(elapsed < 10.0, "runtime >= 10 s");
    out.detail << " F_mania=" << g(mania.value.value()) << " (n=" << mania.cells << ")"
               << " F_half=" << g(half.value.value()) << " (n=" << half.cells << ") " << g(elapsed) << " s";
}

// Random trajectory families for criterion 3.
Trajectory random_walk(oracle::Rng& rng) {
    const std::size_t n = rng.index(2, 300);
    std::vector<double> t{rng.uniform(-1.0, 1.0)};
    std::vector<double> y{rng.uniform(-1.0, 1.0)};
    for (std::size_t i = 0; i < n; ++i) {
        const double h = rng.log_uniform(1e-4, 1.0);
        const double d = rng.unit() < 0.2 ? rng.sign() * rng.log_uniform(2.0, 1e3) : rng.uniform(-1.0, 1.0);
        t.push_back(t.back() + h);
        y.push_back(y.back() + d * h);
    }
    return Trajectory(Mesh(t), y);
}

// 3. Reparametrization contracts over a randomized suite.
void repar_contracts(Outcome& out) {
    oracle::Rng rng(0x5EED0003);
    const char* gentle[] = {"sqrt_chain", "quartic", "quartic_plus_square", "surface_of_revolution"};
    int identity_checked = 0;
    int infeasible_retries = 0;
    double worst_lip = -1e300;
    double worst_measure = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        Trajectory y = random_walk(rng);
        const char* id = gentle[rng.index(0, 3)];
        const int family = trial % 5;
        if (family == 0) {
            y = sample(exact_function("sqrt").value, graded_mesh(0.0, 1.0, rng.index(64, 4096), rng.uniform(1.0, 3.0)));
            if (rng.unit() < 0.5) id = "half_inverse";
        } else if (family == 1) {
            y = sample(exact_function("cuberoot").value, graded_mesh(0.0, 1.0, rng.index(64, 4096), 3.0));
        }
        const Lagrangian L = catalog(id);
        const double lambda = choose_slow_level(y);
        double k = lambda + rng.log_uniform(0.5, 100.0);
        ReparResult r = [&] {
            try {
                return reparametrize(L, y, k);
            } catch (const InfeasibleError& e) {
                ++infeasible_retries;
                k = std::max(k, e.minimal_k()) * (1.0 + 1e-9);
                return reparametrize(L, y, k);
            }
        }();
        const double len = y.mesh().length();
        worst_lip = std::max(worst_lip, r.lip_after - 2.0 * k);
        worst_measure = std::max(worst_measure, std::abs(r.plan.measure_accel - 2.0 * r.plan.deficit) / len);
        out.require(r.energy_before.is_finite(), "trial " + std::to_string(trial) + " has infinite energy");
        out.require(r.lip_after <= 2.0 * k + 1e-9, "Lipschitz law, trial " + std::to_string(trial));
        out.require(r.reparametrized.front() == y.front() && r.reparametrized.back() == y.back() &&
                        r.reparametrized.mesh().a() == y.mesh().a() && r.reparametrized.mesh().b() == y.mesh().b(),
                    "boundary law, trial " + std::to_string(trial));
        out.require(std::abs(r.plan.measure_accel - 2.0 * r.plan.deficit) <= 1e-12 * len,
                    "measure law, trial " + std::to_string(trial));

        // identity law on the same trajectory with k above its Lipschitz constant
        const double above = y.lipschitz_constant() * rng.uniform(1.0001, 3.0) + 1e-9;
        if (above > lambda) {
            const auto same = reparametrize(L, y, above);
            ++identity_checked;
            out.require(same.reparametrized == y, "identity law, trial " + std::to_string(trial));
        }
    }
    out.require(identity_checked >= 150, "too few identity-law instances");
    out.detail << " 200 trajectories; max(lip_after-2k)=" << g(worst_lip) << " max|A|-2deficit|/len="
               << g(worst_measure) << "; identity law on " << identity_checked << "; " << infeasible_retries
               << " retried at the minimal feasible k";
}

// 4. Threshold K for sqrt_chain on graded sqrt t.
void avoidance(Outcome& out) {
    const auto start = Clock::now();
    const Trajectory y = sample(exact_function("sqrt").value, graded_mesh(0.0, 1.0, 4096, 2.0));
    std::vector<double> grid;
    for (double k = 2.0; k <= 256.0; k *= 2.0) grid.push_back(k);
    const auto report = find_threshold_k(catalog("sqrt_chain"), y, grid);
    const double elapsed = seconds_since(start);
    out.require(report.k_threshold.has_value(), "no threshold on the grid");
    if (report.k_threshold) {
        for (const auto& row : report.rows) {
            if (row.k >= *report.k_threshold) {
                out.require(row.feasible && row.energy_after.value() <= row.energy_before.value() + 1.0 / row.k,
                            "bound fails at k=" + g(row.k));
            }
        }
        out.detail << " K=" << g(*report.k_threshold) << ";";
    }
    for (const auto& row : report.rows) out.detail << " k=" << g(row.k) << " gap=" << g(row.gap);
    out.require(elapsed < 30.0, "runtime >= 30 s");
    out.detail << "; " << g(elapsed) << " s";
}

// 5. Tangent intercept monotonicity and the tangent inequality.
void tangent_intercepts_check(Outcome& out) {
    oracle::Rng rng(0x5EED0005);
    int entries = 0;
    double worst = -1e300;
    for (std::string_view id : catalog_ids()) {
        const Lagrangian L = catalog(id);
        if (!L.convex_in_v()) continue;
        ++entries;
        auto random_y = [&] {
            if (id == "brachistochrone") return rng.uniform(-3.0, 0.95);
            if (id == "half_inverse") return rng.sign() * rng.uniform(0.02, 3.0);
            return rng.uniform(-3.0, 3.0);
        };
        for (int i = 0; i < 100; ++i) {
            const double y = random_y();
            const double t = rng.uniform(0.0, 1.0);
            std::vector<double> w;
            const std::size_t count = rng.index(3, 40);
            for (std::size_t j = 0; j < count; ++j) w.push_back(rng.sign() * rng.log_uniform(1e-3, 20.0));
            if (rng.unit() < 0.5) w.push_back(0.0);
            const auto p = tangent_intercepts(L, y, w, t);
            out.require(p.nondecreasing_on_negative && p.nonincreasing_on_positive,
                        std::string(id) + " intercept not monotone at y=" + g(y));
        }
        for (int i = 0; i < 1000; ++i) {
            const double y = random_y();
            const double t = rng.uniform(0.0, 1.0);
            const double d = rng.uniform(-8.0, 8.0);
            const double s = rng.unit() < 0.1 ? 1.0 : rng.log_uniform(1.0, 50.0);
            const double lhs = L(t, y, d / s) * s;
            const double rhs = L(t, y, d) + tangent_intercept(L, t, y, d / s) * (s - 1.0);
            const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
            worst = std::max(worst, (lhs - rhs) / scale);
            out.require(lhs <= rhs + 1e-10 * scale, std::string(id) + " tangent inequality at y=" + g(y) +
                                                        " d=" + g(d) + " s=" + g(s));
        }
    }
    out.detail << " " << entries << " convex entries x (100 grids + 1000 triples); max scaled (lhs-rhs)=" << g(worst);
}

// 6. Lower bound for the half-inverse energy and its blow-up.
void blow_up(Outcome& out) {
    oracle::Rng rng(0x5EED0006);
    const Lagrangian L = catalog("half_inverse");
    double tightest = 1e300;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = rng.index(1, 60);
        std::vector<double> t{0.0};
        std::vector<double> y{rng.log_uniform(0.05, 5.0)};
        for (std::size_t i = 0; i < n; ++i) {
            const double h = rng.log_uniform(1e-3, 0.5);
            double d = rng.uniform(-5.0, 5.0);
            if (y.back() + d * h < 0.02) d = std::abs(d);
            t.push_back(t.back() + h);
            y.push_back(y.back() + d * h);
        }
        Trajectory traj(Mesh(t), y);
        double c = rng.uniform(traj.mesh().a(), traj.mesh().b());
        double b = rng.uniform(traj.mesh().a(), traj.mesh().b());
        if (c > b) std::swap(c, b);
        if (b - c < 1e-6) b = traj.mesh().b(), c = traj.mesh().a();
        traj = with_node(with_node(traj, c), b);
        const auto nodes = traj.mesh().nodes();
        const std::size_t ic = traj.mesh().locate(c) + (nodes[traj.mesh().locate(c)] == c ? 0 : 1);
        std::size_t ib = traj.mesh().locate(b);
        if (nodes[ib] != b) ++ib;
        const Trajectory piece = slice(traj, ic, ib);
        const double C = piece.lipschitz_constant() * rng.uniform(1.0, 1.5) + 1e-12;
        const double bound = halfinverse_lower_bound(traj, c, b, C);
        const double e = energy(L, piece).value.value();
        const double scale = std::max(1.0, std::abs(e));
        tightest = std::min(tightest, (e - bound) / scale);
        out.require(bound <= e + 1e-8 * scale, "bound above energy in trial " + std::to_string(trial));
    }
    out.detail << " 200 random: min scaled (F - bound)=" << g(tightest) << ";";

    const double thresholds[] = {10.0, 1e3, 1e5};
    const double epsilons[] = {1e-2, 1e-4, 1e-6};
    for (int i = 0; i < 3; ++i) {
        const double eps = epsilons[i];
        std::vector<double> t{0.0};
        const Mesh tail = graded_mesh(0.0, 1.0, 800);
        for (const double s : tail.nodes()) t.push_back(eps * std::pow(1.0 / eps, s));  // geometric from eps to 1
        t.back() = 1.0;
        std::vector<double> v(t.size());
        for (std::size_t j = 0; j < t.size(); ++j) v[j] = std::max(t[j], eps);
        const Trajectory y(Mesh(t), v);
        const double F = energy(L, y).value.value();
        // the bound holds on every [eps, r eps]; take the best ratio
        double best = -1e300;
        double best_r = 0.0;
        for (int j = 0; j <= 400; ++j) {
            const double r = 1.1 * std::pow(100.0 / 1.1, j / 400.0);
            if (r * eps > 1.0) break;
            const double lb = halfinverse_lower_bound(y, eps, r * eps, 1.0);
            if (lb > best) best = lb, best_r = r;
        }
        const double whole = halfinverse_lower_bound(y, eps, 1.0, 1.0);
        out.require(best <= F, "bound above energy at eps=" + g(eps));
        out.require(best > thresholds[i], "bound below threshold at eps=" + g(eps));
        out.require(F > thresholds[i], "energy below threshold at eps=" + g(eps));
        out.detail << " eps=" << g(eps) << ": bound=" << g(best) << " on [eps," << g(best_r) << "eps] ([eps,1]: "
                   << g(whole) << ") F=" << g(F) << " > " << g(thresholds[i]) << ";";
    }
}

// 7. Two-endpoint floor versus one-endpoint truncations.
void lavrentiev(Outcome& out) {
    const auto start = Clock::now();
    const std::vector<std::size_t> ns{100, 200, 500};
    const std::vector<double> ms{5.0, 10.0, 20.0};
    const auto scan = mania_two_endpoint_scan(
        ns, ms, {.restarts = 8, .seed = default_seed, .order = 5, .max_iterations = 2000, .threads = 0});
    const std::vector<std::size_t> cuts{1, 10, 100, 1000, 10000};
    const auto trunc = mania_one_endpoint_truncations(cuts);
    const double elapsed = seconds_since(start);
    out.require(scan.floor_estimate > 10.0 * scan.reference_energy.value(), "floor not above 10x reference");
    out.require(trunc.back().energy.value() <= 1e-2, "truncation at n=1e4 above 1e-2");
    out.require(elapsed < 300.0, "runtime >= 5 min");
    out.detail << " floor=" << g(scan.floor_estimate) << " reference=" << g(scan.reference_energy.value())
               << " truncation(n=1e4)=" << g(trunc.back().energy.value()) << ";";
    for (const auto& row : scan.rows) out.detail << " (" << row.cells << "," << g(row.bound) << ")=" << g(row.best_energy);
    out.detail << "; " << g(elapsed) << " s";
}

// 8. Necessary conditions along the catenary.
void necessary_conditions(Outcome& out) {
    const Lagrangian L = catalog("surface_of_revolution");
    const auto cat = exact_function("catenary", {{"alpha", 1.0}, {"beta", 0.0}});
    auto sample_n = [&](std::size_t n) { return sample(cat.value, graded_mesh(-1.0, 1.0, n)); };
    const auto dbr = du_bois_reymond_residual(L, sample_n(4000));
    const double deviation = dbr.max_abs / oracle::two_pi;
    const double constant = dbr.constant.value_or(0.0) / oracle::two_pi;
    out.require(deviation <= 1e-3, "Du Bois-Reymond deviation above 1e-3");
    out.require(std::abs(constant - 1.0) <= 1e-3, "constant not within 1e-3 of 1/alpha");
    out.detail << " dbr deviation/2pi=" << g(deviation) << " constant/2pi=" << g(constant) << "; el max_abs:";
    double previous = 0.0;
    for (std::size_t n = 1000; n <= 8000; n *= 2) {
        const double r = euler_lagrange_residual(L, sample_n(n)).max_abs;
        out.detail << " n=" << n << ":" << g(r);
        if (previous > 0.0) {
            const double ratio = r / previous;
            out.detail << " (ratio " << g(ratio) << ")";
            out.require(std::abs(ratio - 0.5) <= 0.25 * 0.5, "el ratio " + g(ratio) + " not 0.5 +-25% at n=" +
                                                                 std::to_string(n));
        }
        previous = r;
    }
}

// 9. Byte-identical CLI output for repeated runs.
void reproducibility(Outcome& out) {
    if (cli_path.empty()) {
        out.require(false, "no --cli path given");
        return;
    }
    const auto dir = std::filesystem::temp_directory_path() / "lavlab_acceptance";
    std::filesystem::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> configs = {
        {"catalog", R"({"command": "catalog"})"},
        {"energy", R"({"command": "energy", "lagrangian": "mania", "exact": "cuberoot", "n": 2048, "power": 3})"},
        {"repar", R"({"command": "repar", "lagrangian": "sqrt_chain", "exact": "sqrt", "n": 4096, "power": 2,
                      "k_grid": [2, 4, 8, 16, 32, 64, 128, 256]})"},
        {"necessary", R"({"command": "necessary-check", "lagrangian": "surface_of_revolution", "exact": "catenary",
                          "a": -1, "b": 1, "n": 4000})"},
        {"gap", R"({"command": "gap-scan", "n_grid": [50, 100], "M_grid": [5, 10], "restarts": 3,
                    "max_iterations": 500})"},
        {"demo", R"({"command": "demo"})"},
    };
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    for (const auto& [name, body] : configs) {
        const auto config = dir / (name + ".config.json");
        std::ofstream(config) << body;
        const std::string command = nlohmann::json::parse(body).at("command");
        std::string outputs[2];
        for (int pass = 0; pass < 2; ++pass) {
            const auto target = dir / (name + "." + std::to_string(pass) + ".json");
            std::filesystem::remove(target);
            const std::string cmd = "\"" + cli_path + "\" " + command + " --config \"" + config.string() +
                                    "\" --out \"" + target.string() + "\" > /dev/null";
            const int status = std::system(cmd.c_str());
            out.require(status == 0, name + " exited with " + std::to_string(status));
            outputs[pass] = slurp(target);
        }
        out.require(!outputs[0].empty() && outputs[0] == outputs[1], name + " output differs");
        out.detail << " " << name << " (" << outputs[0].size() << " bytes)";
    }
    out.detail << " identical";
}

const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
    {"minimizing-sequence bounds", minimizing_sequences},
    {"known minimizers", known_minimizers},
    {"reparametrization contracts", repar_contracts},
    {"avoidance threshold", avoidance},
    {"tangent intercepts", tangent_intercepts_check},
    {"half-inverse blow-up", blow_up},
    {"Lavrentiev contrast", lavrentiev},
    {"necessary conditions", necessary_conditions},
    {"reproducibility", reproducibility},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            selected.push_back(std::atoi(argv[++i]));
        } else if (arg == "--cli" && i + 1 < argc) {
            cli_path = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--criterion N]... [--cli PATH]\n";
            return 2;
        }
    }
    if (selected.empty()) {
        for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);
    }
    bool all = true;
    for (const int index : selected) {
        if (index < 1 || index > static_cast<int>(criteria.size())) {
            std::cerr << "no criterion " << index << "\n";
            return 2;
        }
        const auto& [name, check] = criteria[index - 1];
        Outcome outcome;
        const auto start = Clock::now();
        try {
            check(outcome);
        } catch (const std::exception& e) {
            outcome.require(false, std::string("exception: ") + e.what());
        }
        std::cout << "criterion " << index << " (" << name << "): " << (outcome.pass ? "PASS" : "FAIL") << " -"
                  << outcome.detail.str() << " [" << g(seconds_since(start)) << " s]\n";
        all = all && outcome.pass;
    }
    return all ? 0 : 1;
}
