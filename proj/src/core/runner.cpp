#include "lavlab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>
#include <type_traits>

#include "lavlab/errors.hpp"
#include "lavlab/io.hpp"
#include "lavlab/necessary.hpp"
#include "lavlab/repar.hpp"

namespace lavlab {
namespace {

using nlohmann::json;

constexpr const char* commands[] = {"catalog", "energy", "repar", "necessary-check", "gap-scan", "demo"};

std::string g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string g12(ExtendedReal x) { return x.is_finite() ? g12(x.value()) : "+inf"; }

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += sep;
        out += p;
    }
    return out;
}

// Reads `key` into `target` when present, collecting type errors.
// nlohmann converts 2.5 to the integer 2; integer fields must hold integers.
template <class T>
bool integer_shaped(const json& value) {
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!value.is_number_integer()) return false;
        return !std::is_unsigned_v<T> || value.is_number_unsigned();
    } else if constexpr (requires { typename T::value_type; } && !std::is_same_v<T, std::string>) {
        if (!value.is_array()) return true;
        for (const auto& item : value) {
            if (!integer_shaped<typename T::value_type>(item)) return false;
        }
        return true;
    } else {
        return true;
    }
}

template <class T>
void read(const json& j, const char* key, T& target, std::vector<std::string>& errors) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    try {
        if (!integer_shaped<T>(j.at(key))) throw json::type_error::create(302, "not an integer", nullptr);
        target = j.at(key).get<T>();
    } catch (const json::exception&) {
        errors.push_back(std::string("'") + key + "' has the wrong type");
    }
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& target, std::vector<std::string>& errors) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    T value{};
    read(j, key, value, errors);
    target = value;
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
    if (requested > 0) return requested;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(std::max<std::size_t>(jobs, 1), hw));
}

Lagrangian config_lagrangian(const RunConfig& c) { return lagrangian_from_json(c.lagrangian); }

struct Source {
    Trajectory trajectory;
    std::optional<ExactFunction> exact;
    json description;
};

Source load_source(const RunConfig& c) {
    if (c.trajectory) {
        return {read_trajectory_file(*c.trajectory), std::nullopt, {{"trajectory", *c.trajectory}}};
    }
    const auto f = exact_function(*c.exact, c.exact_params);
    const Mesh mesh = graded_mesh(c.a, c.b, c.n, c.power);
    json params = json::object();
    for (const auto& [k, v] : c.exact_params) params[k] = v;
    return {sample(f.value, mesh), f,
            {{"exact", *c.exact}, {"params", params}, {"a", c.a}, {"b", c.b}, {"n", c.n}, {"power", c.power}}};
}

json lagrangian_summary(const Lagrangian& l) { return {{"id", l.id()}, {"flags", flags_to_json(l)}}; }

RunOutput run_catalog() {
    json entries = json::array();
    std::string text = "lagrangians:\n";
    for (const auto id : catalog_ids()) {
        const auto l = catalog(id);
        entries.push_back(lagrangian_summary(l));
        text += "  " + std::string(id) + (l.autonomous() ? "  autonomous" : "") + (l.convex_in_v() ? "  convex_in_v" : "") +
                (l.extended() ? "  extended" : "") + "\n";
    }
    json names = json::array();
    text += "exact functions:\n";
    for (const auto name : exact_function_names()) {
        names.push_back(std::string(name));
        text += "  " + std::string(name) + "\n";
    }
    return {dump({{"lagrangians", entries}, {"exact_functions", names}}), "", text};
}

RunOutput run_energy(const RunConfig& c) {
    const auto l = config_lagrangian(c);
    const auto src = load_source(c);
    json j;
    std::string text;
    if (src.exact) {
        const auto exact = energy_exact(l, *src.exact, src.trajectory.mesh(), {.order = c.order, .estimate_error = true});
        const auto surrogate = energy(l, src.trajectory, {.order = c.order});
        j = to_json(exact);
        j["surrogate_value"] = extended_to_json(surrogate.value);
        j["integrated_along"] = "exact";
        text = "F = " + g12(exact.value) + "  (interpolant: " + g12(surrogate.value) + ")\n";
    } else {
        const auto report = energy(l, src.trajectory, {.order = c.order, .estimate_error = true});
        j = to_json(report);
        j["integrated_along"] = "trajectory";
        text = "F = " + g12(report.value) + "\n";
    }
    if (l.id() == "surface_of_revolution" && j["value"].is_number()) {
        j["value_over_2pi"] = j["value"].get<double>() / (2.0 * std::numbers::pi);
    }
    j["lagrangian"] = lagrangian_summary(l);
    j["source"] = src.description;
    return {dump(j), "", text};
}

RunOutput run_repar(const RunConfig& c) {
    const auto l = config_lagrangian(c);
    const auto src = load_source(c);
    const auto report = sweep_reparametrize(l, src.trajectory, c.k_grid, c.order, worker_count(c.threads, c.k_grid.size()));
    json j = to_json(report);
    j["threshold_applicable"] = l.convex_in_v();
    j["lagrangian"] = lagrangian_summary(l);
    j["source"] = src.description;

    std::string csv = "k,measure_fast,measure_accel,lip_after,energy_before,energy_after,gap,bound_holds\n";
    char line[512];
    std::snprintf(line, sizeof line, "%10s %12s %12s %12s %16s %16s %14s\n", "k", "|S_k|", "|A_k|", "Lip(y_k)", "F(y)",
                  "F(y_k)", "gap");
    std::string text = line;
    for (const auto& r : report.rows) {
        if (!r.feasible) {
            csv += format_shortest(r.k) + ",,,,,,,\n";
            std::snprintf(line, sizeof line, "%10s  infeasible: %s\n", g12(r.k).c_str(), r.note.c_str());
            text += line;
            continue;
        }
        csv += format_shortest(r.k) + "," + format_shortest(r.measure_fast) + "," + format_shortest(r.measure_accel) + "," +
               format_shortest(r.lip_after) + "," + format_shortest(r.energy_before.value()) + "," +
               (r.energy_after.is_finite() ? format_shortest(r.energy_after.value()) : "+inf") + "," +
               format_shortest(r.gap) + "," + (r.bound_holds ? "1" : "0") + "\n";
        std::snprintf(line, sizeof line, "%10s %12s %12s %12s %16s %16s %14s\n", g12(r.k).c_str(),
                      g12(r.measure_fast).c_str(), g12(r.measure_accel).c_str(), g12(r.lip_after).c_str(),
                      g12(r.energy_before).c_str(), g12(r.energy_after).c_str(), g12(r.gap).c_str());
        text += line;
    }
    if (l.convex_in_v()) {
        text += report.k_threshold ? "K = " + g12(*report.k_threshold) + "\n" : "no threshold on this grid\n";
    }
    return {dump(j), csv, text};
}

RunOutput run_necessary(const RunConfig& c) {
    const auto l = config_lagrangian(c);
    const auto src = load_source(c);
    const auto el = euler_lagrange_residual(l, src.trajectory);
    json j{{"euler_lagrange", to_json(el)}, {"lagrangian", lagrangian_summary(l)}, {"source", src.description}};
    std::string text = "Euler-Lagrange max |residual| = " + g12(el.max_abs) + "\n";
    if (l.autonomous()) {
        const auto dbr = du_bois_reymond_residual(l, src.trajectory);
        j["du_bois_reymond"] = to_json(dbr);
        text += "Du Bois-Reymond deviation = " + g12(dbr.max_abs);
        if (dbr.constant) {
            text += ", constant = " + g12(*dbr.constant);
            if (l.id() == "surface_of_revolution") {
                j["du_bois_reymond"]["constant_over_2pi"] = *dbr.constant / (2.0 * std::numbers::pi);
                text += " (/2pi: " + g12(*dbr.constant / (2.0 * std::numbers::pi)) + ")";
            }
        }
        text += "\n";
    } else {
        j["du_bois_reymond"] = nullptr;
        j["du_bois_reymond_note"] = "skipped: Lagrangian depends on t";
    }
    std::string csv = "t,residual\n";
    for (const auto& s : el.samples) csv += format_full(s.t) + "," + format_full(s.residual) + "\n";
    return {dump(j), csv, text};
}

RunOutput run_gap_scan(const RunConfig& c) {
    json j{{"problem", c.problem}, {"endpoint", c.endpoint}};
    std::string text;
    std::string csv;
    if (c.endpoint == "two") {
        const ScanOptions opts{.restarts = c.restarts,
                               .seed = c.seed,
                               .order = c.order,
                               .max_iterations = c.max_iterations,
                               .threads = worker_count(c.threads, c.n_grid.size())};
        const auto report = mania_two_endpoint_scan(c.n_grid, c.m_grid, opts);
        j["two_endpoint"] = to_json(report);
        csv = "n,M,best_energy,iterations\n";
        text = "        n          M      best_energy\n";
        char line[256];
        for (const auto& r : report.rows) {
            csv += std::to_string(r.cells) + "," + format_shortest(r.bound) + "," + format_shortest(r.best_energy) + "," +
                   std::to_string(r.iterations) + "\n";
            std::snprintf(line, sizeof line, "%9zu %10s %16s\n", r.cells, g12(r.bound).c_str(), g12(r.best_energy).c_str());
            text += line;
        }
        text += "floor = " + g12(report.floor_estimate) + ", reference F(t^(1/3)) = " + g12(report.reference_energy) + "\n";
    }
    const auto truncations = mania_one_endpoint_truncations(c.truncation_n, 4096, 3.0, c.order);
    j["one_endpoint_truncations"] = to_json(truncations);
    for (const auto& t : truncations) text += "truncation n = " + std::to_string(t.n) + ": F = " + g12(t.energy) + "\n";
    return {dump(j), csv, text};
}

RunOutput run_demo(const RunConfig& c) {
    json j;
    std::string text;
    json sequences = json::array();
    const auto sqrt_chain = catalog("sqrt_chain");
    const auto quartic = catalog("quartic");
    const auto qps = catalog("quartic_plus_square");
    for (const std::size_t n : {10, 100, 1000}) {
        const double e1 = energy(sqrt_chain, sqrt_ramp_sequence(n), {.order = c.order}).value.value();
        const double e2 = energy(quartic, mollified_tent_sequence(n), {.order = c.order}).value.value();
        const double e3 = energy(qps, sawtooth_sequence(n), {.order = c.order}).value.value();
        sequences.push_back({{"n", n}, {"sqrt_chain_ramp", e1}, {"quartic_mollified_tent", e2}, {"quartic_plus_square_sawtooth", e3}});
        text += "n = " + std::to_string(n) + ": ramp " + g12(e1) + " (<= " + g12(3.0 / n) + "), tent " + g12(e2) +
                " (<= " + g12(2.0 / n) + "), sawtooth " + g12(e3) + " (= " + g12(1.0 / (12.0 * n * n)) + ")\n";
    }
    j["minimizing_sequences"] = sequences;

    json blowup = json::array();
    for (const double eps : {1e-2, 1e-4, 1e-6}) {
        const Trajectory y(Mesh({0.0, eps, 1.0}), {eps, eps, 1.0});
        const double bound = halfinverse_lower_bound(y, eps, std::min(1.0, 4.92 * eps), 1.0);
        blowup.push_back({{"eps", eps}, {"lower_bound", bound}});
        text += "max(t, " + g12(eps) + "): half_inverse energy >= " + g12(bound) + "\n";
    }
    j["halfinverse_blowup"] = blowup;

    const std::vector<double> ks{2, 4, 8, 16, 32, 64, 128, 256};
    const auto avoid = avoidance_demo(sqrt_chain, exact_function("sqrt"), graded_mesh(0.0, 1.0, 1024, 2.0), ks, c.order,
                                      worker_count(c.threads, ks.size()));
    j["avoidance_sqrt_chain"] = to_json(avoid);
    text += avoid.k_threshold ? "sqrt_chain reparametrization: K = " + g12(*avoid.k_threshold) + "\n"
                              : "sqrt_chain reparametrization: no K on grid\n";
    return {dump(j), "", text};
}

}  // namespace

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::parse, "config must be a JSON object");
    static const std::vector<std::string> known{
        "command", "lagrangian", "trajectory", "exact", "exact_params", "a", "b", "n", "power", "start", "end",
        "endpoint", "k_grid", "M_grid", "n_grid", "truncation_n", "order", "seed", "restarts", "max_iterations",
        "threads", "problem", "out", "csv_out", "format"};
    std::vector<std::string> errors;
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) errors.push_back("unknown key '" + key + "'");
    }
    RunConfig c;
    read(j, "command", c.command, errors);
    if (j.contains("lagrangian")) c.lagrangian = j.at("lagrangian");
    read(j, "trajectory", c.trajectory, errors);
    read(j, "exact", c.exact, errors);
    if (j.contains("exact_params") && !j.at("exact_params").is_null()) {
        try {
            for (const auto& [k, v] : j.at("exact_params").items()) c.exact_params[k] = v.get<double>();
        } catch (const json::exception&) {
            errors.push_back("'exact_params' must map names to numbers");
        }
    }
    read(j, "a", c.a, errors);
    read(j, "b", c.b, errors);
    read(j, "n", c.n, errors);
    read(j, "power", c.power, errors);
    read(j, "start", c.start, errors);
    read(j, "end", c.end, errors);
    read(j, "endpoint", c.endpoint, errors);
    read(j, "k_grid", c.k_grid, errors);
    read(j, "M_grid", c.m_grid, errors);
    read(j, "n_grid", c.n_grid, errors);
    read(j, "truncation_n", c.truncation_n, errors);
    read(j, "order", c.order, errors);
    if (j.contains("seed") && j.at("seed").is_string()) {
        try {
            c.seed = std::stoull(j.at("seed").get<std::string>(), nullptr, 0);
        } catch (const std::exception&) {
            errors.push_back("'seed' string must be an integer literal");
        }
    } else {
        read(j, "seed", c.seed, errors);
    }
    read(j, "restarts", c.restarts, errors);
    read(j, "max_iterations", c.max_iterations, errors);
    read(j, "threads", c.threads, errors);
    read(j, "problem", c.problem, errors);
    read(j, "out", c.out, errors);
    read(j, "csv_out", c.csv_out, errors);
    read(j, "format", c.format, errors);
    if (!errors.empty()) throw Error(ErrorKind::parse, "config: " + join(errors, "; "));
    return c;
}

json config_to_json(const RunConfig& c) {
    json params = json::object();
    for (const auto& [k, v] : c.exact_params) params[k] = v;
    return {{"command", c.command},
            {"lagrangian", c.lagrangian},
            {"trajectory", c.trajectory ? json(*c.trajectory) : json(nullptr)},
            {"exact", c.exact ? json(*c.exact) : json(nullptr)},
            {"exact_params", params},
            {"a", c.a},
            {"b", c.b},
            {"n", c.n},
            {"power", c.power},
            {"start", c.start},
            {"end", c.end},
            {"endpoint", c.endpoint},
            {"k_grid", c.k_grid},
            {"M_grid", c.m_grid},
            {"n_grid", c.n_grid},
            {"truncation_n", c.truncation_n},
            {"order", c.order},
            {"seed", c.seed},
            {"restarts", c.restarts},
            {"max_iterations", c.max_iterations},
            {"threads", c.threads},
            {"problem", c.problem},
            {"out", c.out},
            {"csv_out", c.csv_out},
            {"format", c.format}};
}

void validate(const RunConfig& c) {
    std::vector<std::string> errors;
    ErrorKind kind = ErrorKind::argument;
    bool only_lookup = true;
    auto fail = [&](std::string message, ErrorKind k = ErrorKind::argument) {
        errors.push_back(std::move(message));
        only_lookup = only_lookup && k == ErrorKind::lookup;
    };

    if (std::find(std::begin(commands), std::end(commands), c.command) == std::end(commands)) {
        fail("unknown command '" + c.command + "'; valid: catalog, energy, repar, necessary-check, gap-scan, demo");
    }
    const bool needs_source = c.command == "energy" || c.command == "repar" || c.command == "necessary-check";
    if (!(std::isfinite(c.a) && std::isfinite(c.b) && c.a < c.b)) fail("mesh needs finite a < b");
    if (c.n < 1) fail("mesh needs n >= 1");
    if (!(c.power >= 1.0)) fail("mesh grading power must be >= 1");
    if (c.order < 1 || c.order > 256) fail("quadrature order must lie in [1, 256]");
    if (c.endpoint != "one" && c.endpoint != "two") fail("endpoint must be 'one' or 'two'");
    if (c.format != "json" && c.format != "csv") fail("format must be 'json' or 'csv'");
    if (needs_source) {
        if (c.lagrangian.is_null()) {
            fail(c.command + " needs a lagrangian");
        } else {
            try {
                (void)lagrangian_from_json(c.lagrangian);
            } catch (const Error& e) {
                fail(e.what(), e.kind());
            }
        }
        if (c.trajectory.has_value() == c.exact.has_value()) {
            fail(c.command + " needs exactly one of a trajectory file or an exact function");
        }
        if (c.exact) {
            try {
                (void)exact_function(*c.exact, c.exact_params);
            } catch (const Error& e) {
                fail(e.what(), e.kind());
            }
        }
    }
    if (c.command == "repar") {
        if (c.k_grid.empty()) fail("repar needs a non-empty k grid");
        for (const double k : c.k_grid) {
            if (!(k > 0.0) || !std::isfinite(k)) fail("k grid values must be finite and positive");
        }
    }
    if (c.command == "gap-scan") {
        if (c.problem != "mania") fail("gap-scan supports problem 'mania' only", ErrorKind::lookup);
        if (c.start != 0.0 || c.end != 1.0) fail("the mania problem has boundary values start = 0, end = 1");
        if (c.endpoint == "two") {
            if (c.n_grid.empty()) fail("gap-scan needs a non-empty n grid");
            if (c.m_grid.empty()) fail("gap-scan needs a non-empty M grid");
            for (const auto n : c.n_grid) {
                if (n < 1) fail("n grid values must be >= 1");
            }
            for (const double m : c.m_grid) {
                if (!(m > 1.0) || !std::isfinite(m)) fail("M grid values must be finite and > 1 to connect (0,0) to (1,1)");
            }
        }
        for (const auto n : c.truncation_n) {
            if (n < 1) fail("truncation n values must be >= 1");
        }
    }
    if (c.format == "csv" && !c.out.empty() && (c.command == "catalog" || c.command == "energy" || c.command == "demo")) {
        fail(c.command + " has no CSV output");
    }
    if (!errors.empty()) {
        if (only_lookup) kind = ErrorKind::lookup;
        throw Error(kind, join(errors, "\n"));
    }
}

RunOutput run(const RunConfig& config) {
    validate(config);
    RunOutput out;
    if (config.command == "catalog") {
        out = run_catalog();
    } else if (config.command == "energy") {
        out = run_energy(config);
    } else if (config.command == "repar") {
        out = run_repar(config);
    } else if (config.command == "necessary-check") {
        out = run_necessary(config);
    } else if (config.command == "gap-scan") {
        out = run_gap_scan(config);
    } else {
        out = run_demo(config);
    }
    if (!config.out.empty()) write_text_file(config.out, config.format == "csv" ? out.csv : out.json);
    if (!config.csv_out.empty()) {
        if (out.csv.empty()) throw Error(ErrorKind::argument, config.command + " has no CSV output");
        write_text_file(config.csv_out, out.csv);
    }
    return out;
}

}  // namespace lavlab
