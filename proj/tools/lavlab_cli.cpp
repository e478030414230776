// Command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lavlab/lavlab.h"

namespace {

using nlohmann::json;

int exit_code(lavlab_status status) {
    switch (status) {
        case LAVLAB_OK: return 0;
        case LAVLAB_ERR_ARGUMENT:
        case LAVLAB_ERR_LOOKUP:
        case LAVLAB_ERR_PARSE: return 2;
        case LAVLAB_ERR_INFEASIBLE: return 3;
        default: return 1;
    }
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t");
    const auto last = s.find_last_not_of(" \t");
    return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
}

double to_number(const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + text + "'");
    }
    if (used != text.size()) throw UsageError("not a number: '" + text + "'");
    return value;
}

// "2,4,8" or with an ellipsis continuing the pattern: "2,4,8,...,256"
// (geometric when the ratio is constant, arithmetic when the step is).
std::vector<double> parse_list(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) parts.push_back(trim(item));
    std::vector<double> out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string& p = parts[i];
        if (p != "..." && p != "…") {
            out.push_back(to_number(p));
            continue;
        }
        if (out.size() < 2 || i + 1 != parts.size() - 1) {
            throw UsageError("an ellipsis needs two values before it and one after it: '" + text + "'");
        }
        const double last = to_number(parts[i + 1]);
        const double x0 = out[out.size() - 2];
        const double x1 = out.back();
        bool geometric = false;
        if (out.size() >= 3) {
            const double x_prev = out[out.size() - 3];
            const bool same_step = x0 - x_prev == x1 - x0;
            const bool same_ratio = x_prev != 0.0 && x0 != 0.0 && std::abs(x0 / x_prev - x1 / x0) <= 1e-12 * std::abs(x1 / x0);
            if (!same_step && !same_ratio) throw UsageError("no arithmetic or geometric pattern in '" + text + "'");
            geometric = !same_step;
        }
        for (std::size_t step = 1; step < 100000; ++step) {
            const double next = geometric ? x1 * std::pow(x1 / x0, static_cast<double>(step))
                                              : x1 + static_cast<double>(step) * (x1 - x0);
            const bool past = (x1 > x0) ? next > last * (1 + 1e-12) : next < last * (1 - 1e-12);
            if (past) break;
            out.push_back(next);
        }
        if (out.back() != last) throw UsageError("progression in '" + text + "' does not reach its last value");
        break;
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

json lagrangian_argument(const std::string& text) {
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '{') {
        try {
            return json::parse(t);
        } catch (const json::parse_error& e) {
            throw UsageError(std::string("--lagrangian JSON: ") + e.what());
        }
    }
    return t;
}

json read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("config '" + path + "': " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for one-dimensional variational problems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", lavlab_version());

    std::string config_path;
    std::string lagrangian;
    std::string trajectory;
    std::string exact;
    std::vector<std::string> params;
    double a = 0.0;
    double b = 1.0;
    std::size_t mesh_n = 0;
    double power = 1.0;
    std::string k_list;
    std::string n_list;
    std::string m_list;
    std::string truncation_list;
    std::string problem;
    std::string endpoint;
    std::size_t restarts = 0;
    std::size_t max_iterations = 0;
    std::string seed;
    int order = 0;
    unsigned threads = 0;
    std::string out;
    std::string csv_out;
    std::string format;
    bool print_json = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file; flags override its values");
        sub->add_option("--out", out, "Primary output file");
        sub->add_option("--csv", csv_out, "CSV companion output file");
        sub->add_option("--format", format, "Format of --out: json or csv");
        sub->add_option("--order", order, "Gauss-Legendre points per cell");
        sub->add_option("--threads", threads, "Worker threads (0: automatic)");
        sub->add_flag("--json", print_json, "Print the JSON report to stdout instead of the summary");
    };
    auto source = [&](CLI::App* sub) {
        sub->add_option("--lagrangian", lagrangian, "Catalog id or JSON description");
        sub->add_option("--trajectory", trajectory, "Trajectory file (CSV with header t,y, or .json)");
        sub->add_option("--exact", exact, "Named exact function sampled on the mesh");
        sub->add_option("--param", params, "Exact-function parameter name=value (repeatable)");
        sub->add_option("--a", a, "Mesh start");
        sub->add_option("--b", b, "Mesh end");
        sub->add_option("--n", mesh_n, "Number of cells");
        sub->add_option("--power", power, "Mesh grading power (>= 1)");
    };

    auto* catalog_cmd = app.add_subcommand("catalog", "List Lagrangians and exact functions");
    common(catalog_cmd);
    auto* energy_cmd = app.add_subcommand("energy", "Evaluate F(y)");
    common(energy_cmd);
    source(energy_cmd);
    auto* repar_cmd = app.add_subcommand("repar", "Lipschitz reparametrization sweep over k");
    common(repar_cmd);
    source(repar_cmd);
    repar_cmd->add_option("--k", k_list, "k grid, e.g. 2,4,8,...,256");
    auto* necessary_cmd = app.add_subcommand("necessary-check", "Euler-Lagrange and Du Bois-Reymond residuals");
    common(necessary_cmd);
    source(necessary_cmd);
    auto* gap_cmd = app.add_subcommand("gap-scan", "Bounded-slope minimization scan and truncations");
    common(gap_cmd);
    gap_cmd->add_option("--problem", problem, "Problem id (mania)");
    gap_cmd->add_option("--n", n_list, "Mesh sizes, e.g. 100,200,500");
    gap_cmd->add_option("--M", m_list, "Slope bounds, e.g. 5,10,20");
    gap_cmd->add_option("--truncation-n", truncation_list, "Truncation indices for the one-endpoint problem");
    gap_cmd->add_option("--endpoint", endpoint, "two (scan and truncations) or one (truncations only)");
    gap_cmd->add_option("--restarts", restarts, "Random restarts per run");
    gap_cmd->add_option("--max-iterations", max_iterations, "Descent iterations per start");
    gap_cmd->add_option("--seed", seed, "64-bit seed (decimal or 0x...)");
    auto* demo_cmd = app.add_subcommand("demo", "Small tour of the classical examples");
    common(demo_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };

    json config;
    try {
        config = json::object();
        if (!config_path.empty()) config = read_config_file(config_path);
        if (!config.is_object()) throw UsageError("config file must hold a JSON object");
        config["command"] = sub->get_name();
        if (given("--out")) config["out"] = out;
        if (given("--csv")) config["csv_out"] = csv_out;
        if (given("--format")) config["format"] = format;
        if (given("--order")) config["order"] = order;
        if (given("--threads")) config["threads"] = threads;
        if (given("--lagrangian")) config["lagrangian"] = lagrangian_argument(lagrangian);
        if (given("--trajectory")) {
            config["trajectory"] = trajectory;
            config.erase("exact");
        }
        if (given("--exact")) {
            config["exact"] = exact;
            config.erase("trajectory");
        }
        for (const auto& p : params) {
            const auto eq = p.find('=');
            if (eq == std::string::npos) throw UsageError("--param expects name=value, got '" + p + "'");
            config["exact_params"][trim(p.substr(0, eq))] = to_number(trim(p.substr(eq + 1)));
        }
        if (given("--a")) config["a"] = a;
        if (given("--b")) config["b"] = b;
        if (sub == gap_cmd) {
            if (given("--n")) {
                json grid = json::array();
                for (const double v : parse_list(n_list)) grid.push_back(static_cast<std::size_t>(std::llround(v)));
                config["n_grid"] = grid;
            }
        } else if (given("--n")) {
            config["n"] = mesh_n;
        }
        if (given("--power")) config["power"] = power;
        if (given("--k")) config["k_grid"] = parse_list(k_list);
        if (given("--M")) config["M_grid"] = parse_list(m_list);
        if (given("--truncation-n")) {
            json grid = json::array();
            for (const double v : parse_list(truncation_list)) grid.push_back(static_cast<std::size_t>(std::llround(v)));
            config["truncation_n"] = grid;
        }
        if (given("--problem")) config["problem"] = problem;
        if (given("--endpoint")) config["endpoint"] = endpoint;
        if (given("--restarts")) config["restarts"] = restarts;
        if (given("--max-iterations")) config["max_iterations"] = max_iterations;
        if (given("--seed")) config["seed"] = seed;
        if (const char* env = std::getenv("LAVLAB_SEED"); env && *env) config["seed"] = std::string(env);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    lavlab_run_output* result = nullptr;
    const lavlab_status status = lavlab_run(config.dump().c_str(), &result);
    if (status != LAVLAB_OK) {
        std::cerr << "error (" << lavlab_status_name(status) << "): " << lavlab_last_error_message() << "\n";
        return exit_code(status);
    }
    std::cout << (print_json ? lavlab_run_output_json(result) : lavlab_run_output_text(result));
    lavlab_run_output_free(result);
    return 0;
}
