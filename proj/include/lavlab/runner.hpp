#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lavlab/exact.hpp"
#include "lavlab/gapscan.hpp"

namespace lavlab {

/// Everything one CLI invocation needs. The JSON form (config_to_json) is
/// canonical: every field present, grids as arrays, keys sorted.
struct RunConfig {
    std::string command;  // catalog | energy | repar | necessary-check | gap-scan | demo
    nlohmann::json lagrangian;  // catalog id or custom description; null when unused
    std::optional<std::string> trajectory;  // CSV or JSON file
    std::optional<std::string> exact;       // named exact function, sampled on the mesh
    ExactParams exact_params;
    double a = 0.0;
    double b = 1.0;
    std::size_t n = 1024;
    double power = 1.0;
    double start = 0.0;  // boundary value at a (two-endpoint mode)
    double end = 1.0;    // boundary value at b
    std::string endpoint = "two";  // one | two
    std::vector<double> k_grid;
    std::vector<double> m_grid{5.0, 10.0, 20.0};
    std::vector<std::size_t> n_grid{100, 200, 500};
    std::vector<std::size_t> truncation_n{1, 10, 100, 1000, 10000};
    int order = default_quadrature_order;
    std::uint64_t seed = default_seed;
    std::size_t restarts = 8;
    std::size_t max_iterations = 2000;
    unsigned threads = 0;  // 0: one per independent job, capped by the hardware
    std::string problem = "mania";
    std::string out;      // primary output file; empty: none
    std::string csv_out;  // optional CSV companion
    std::string format = "json";  // format of `out`: json | csv
};

/// Parses a (possibly partial) JSON config; unknown keys and wrong types are
/// reported together in one parse error.
[[nodiscard]] RunConfig config_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json config_to_json(const RunConfig& config);

/// Aggregates every problem into one argument (or lookup) error.
void validate(const RunConfig& config);

struct RunOutput {
    std::string json;  // always produced
    std::string csv;   // empty when the command has no table
    std::string text;  // human-readable summary for stdout
};

/// Validates, runs the experiment and writes `out` / `csv_out` when set.
[[nodiscard]] RunOutput run(const RunConfig& config);

}  // namespace lavlab
