#include "lavlab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lavlab/errors.hpp"

namespace lavlab {
namespace {

double parse_double(std::string_view text, std::size_t line) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw Error(ErrorKind::parse, "CSV line " + std::to_string(line) + ": bad number '" + std::string(text) + "'");
    }
    return value;
}

nlohmann::json cells_to_json(const std::vector<std::size_t>& cells) {
    auto out = nlohmann::json::array();
    for (const auto c : cells) out.push_back(c);
    return out;
}

}  // namespace

std::string format_shortest(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, ptr};
}

std::string format_full(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return {buf, ptr};
}

nlohmann::json extended_to_json(ExtendedReal x) {
    if (!x.is_finite()) return "+inf";
    return x.value();
}

ExtendedReal extended_from_json(const nlohmann::json& j) {
    if (j.is_string() && j.get<std::string>() == "+inf") return ExtendedReal::infinity();
    if (j.is_number()) return ExtendedReal(j.get<double>());
    throw Error(ErrorKind::parse, "extended real must be a number or \"+inf\"");
}

std::string trajectory_to_csv(const Trajectory& y) {
    std::string out = "t,y\n";
    const auto nodes = y.mesh().nodes();
    const auto values = y.values();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out += format_full(nodes[i]);
        out += ',';
        out += format_full(values[i]);
        out += '\n';
    }
    return out;
}

Trajectory trajectory_from_csv(std::string_view text) {
    std::vector<double> nodes;
    std::vector<double> values;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const auto end = text.find('\n');
        std::string_view line = text.substr(0, end);
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            if (line == "t,y") continue;
            throw Error(ErrorKind::parse, "trajectory CSV must start with the header 't,y'");
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) {
            throw Error(ErrorKind::parse, "CSV line " + std::to_string(line_no) + " needs two columns");
        }
        nodes.push_back(parse_double(line.substr(0, comma), line_no));
        values.push_back(parse_double(line.substr(comma + 1), line_no));
    }
    if (!header_seen) throw Error(ErrorKind::parse, "trajectory CSV is empty");
    return Trajectory(Mesh(std::move(nodes)), std::move(values));
}

nlohmann::json trajectory_to_json(const Trajectory& y) {
    return {{"nodes", std::vector<double>(y.mesh().nodes().begin(), y.mesh().nodes().end())},
            {"values", std::vector<double>(y.values().begin(), y.values().end())}};
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("nodes") || !j.contains("values")) {
        throw Error(ErrorKind::parse, "trajectory JSON needs 'nodes' and 'values' arrays");
    }
    try {
        return Trajectory(Mesh(j.at("nodes").get<std::vector<double>>()), j.at("values").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse, std::string("trajectory JSON: ") + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorKind::io, "failed writing '" + path + "'");
}

Trajectory read_trajectory_file(const std::string& path) {
    const std::string text = read_text_file(path);
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorKind::parse, "'" + path + "': " + e.what());
        }
        return trajectory_from_json(j);
    }
    return trajectory_from_csv(text);
}

nlohmann::json to_json(const EnergyReport& report) {
    auto cells = nlohmann::json::array();
    for (const auto& c : report.per_cell) cells.push_back(extended_to_json(c));
    nlohmann::json j{{"value", extended_to_json(report.value)}, {"per_cell", std::move(cells)},
                     {"order", report.quadrature_order}};
    if (report.refinement_error_estimate) {
        const double e = *report.refinement_error_estimate;
        j["error_estimate"] = std::isfinite(e) ? nlohmann::json(e) : nlohmann::json("+inf");
    } else {
        j["error_estimate"] = nullptr;
    }
    return j;
}

nlohmann::json to_json(const ReparPlan& plan) {
    auto pieces = nlohmann::json::array();
    for (const auto& p : plan.accel_pieces) pieces.push_back({{"cell", p.cell}, {"fraction", p.fraction}});
    return {{"k", plan.k},
            {"lambda", plan.lambda},
            {"fast_cells", cells_to_json(plan.fast_cells)},
            {"accel_cells", cells_to_json(plan.accel_cells)},
            {"accel_pieces", std::move(pieces)},
            {"measure_fast", plan.measure_fast},
            {"measure_slow", plan.measure_slow},
            {"measure_accel", plan.measure_accel},
            {"deficit", plan.deficit},
            {"cells", plan.trajectory.cell_count()}};
}

nlohmann::json to_json(const ReparResult& result) {
    return {{"plan", to_json(result.plan)},
            {"lip_before", result.lip_before},
            {"lip_after", result.lip_after},
            {"energy_before", extended_to_json(result.energy_before)},
            {"energy_after", extended_to_json(result.energy_after)},
            {"gap", result.gap()},
            {"trajectory", trajectory_to_json(result.reparametrized)}};
}

nlohmann::json to_json(const ThresholdReport& report) {
    auto rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json row{{"k", r.k}, {"feasible", r.feasible}};
        if (r.feasible) {
            row["measure_fast"] = r.measure_fast;
            row["measure_accel"] = r.measure_accel;
            row["deficit"] = r.deficit;
            row["lip_after"] = r.lip_after;
            row["energy_before"] = extended_to_json(r.energy_before);
            row["energy_after"] = extended_to_json(r.energy_after);
            row["gap"] = r.gap;
            row["bound_holds"] = r.bound_holds;
        } else {
            row["note"] = r.note;
            row["minimal_k"] = r.minimal_k ? nlohmann::json(*r.minimal_k) : nlohmann::json(nullptr);
        }
        rows.push_back(std::move(row));
    }
    return {{"k_threshold", report.k_threshold ? nlohmann::json(*report.k_threshold) : nlohmann::json(nullptr)},
            {"lambda", report.lambda},
            {"lip_before", report.lip_before},
            {"rows", std::move(rows)}};
}

nlohmann::json to_json(const ResidualReport& report) {
    auto samples = nlohmann::json::array();
    for (const auto& s : report.samples) samples.push_back({s.t, s.residual});
    nlohmann::json j{{"samples", std::move(samples)},
                     {"max_abs", report.max_abs},
                     {"mesh_resolution", report.mesh_resolution},
                     {"skipped", report.skipped}};
    j["constant"] = report.constant ? nlohmann::json(*report.constant) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const GapReport& report) {
    auto rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"n", r.cells}, {"M", r.bound}, {"best_energy", r.best_energy}, {"iterations", r.iterations}});
    }
    return {{"rows", std::move(rows)},
            {"floor_estimate", report.floor_estimate},
            {"reference_energy", extended_to_json(report.reference_energy)},
            {"reference_converged", report.reference_converged},
            {"gap_estimate", report.gap_estimate}};
}

nlohmann::json to_json(const std::vector<TruncationEnergy>& truncations) {
    auto out = nlohmann::json::array();
    for (const auto& t : truncations) out.push_back({{"n", t.n}, {"energy", extended_to_json(t.energy)}});
    return out;
}

nlohmann::json flags_to_json(const Lagrangian& lagrangian) {
    return {{"autonomous", lagrangian.autonomous()},
            {"convex_in_v", lagrangian.convex_in_v()},
            {"extended", lagrangian.extended()},
            {"exact_partials", lagrangian.has_exact_partials()}};
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace lavlab
