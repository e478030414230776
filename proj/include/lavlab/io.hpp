#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "lavlab/extended_real.hpp"
#include "lavlab/functional.hpp"
#include "lavlab/gapscan.hpp"
#include "lavlab/necessary.hpp"
#include "lavlab/repar.hpp"
#include "lavlab/trajectory.hpp"

namespace lavlab {

/// Shortest decimal that parses back to the same double.
[[nodiscard]] std::string format_shortest(double x);
/// 17 significant digits.
[[nodiscard]] std::string format_full(double x);

/// Finite values as numbers, +inf as the string "+inf".
[[nodiscard]] nlohmann::json extended_to_json(ExtendedReal x);
[[nodiscard]] ExtendedReal extended_from_json(const nlohmann::json& j);

/// Header `t,y`, one row per node.
[[nodiscard]] std::string trajectory_to_csv(const Trajectory& y);
[[nodiscard]] Trajectory trajectory_from_csv(std::string_view text);
/// {"nodes": [...], "values": [...]}
[[nodiscard]] nlohmann::json trajectory_to_json(const Trajectory& y);
[[nodiscard]] Trajectory trajectory_from_json(const nlohmann::json& j);

/// Reads CSV or JSON, chosen by the file extension (.json, anything else CSV).
[[nodiscard]] Trajectory read_trajectory_file(const std::string& path);
[[nodiscard]] std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

[[nodiscard]] nlohmann::json to_json(const EnergyReport& report);
[[nodiscard]] nlohmann::json to_json(const ReparPlan& plan);
[[nodiscard]] nlohmann::json to_json(const ReparResult& result);
[[nodiscard]] nlohmann::json to_json(const ThresholdReport& report);
[[nodiscard]] nlohmann::json to_json(const ResidualReport& report);
[[nodiscard]] nlohmann::json to_json(const GapReport& report);
[[nodiscard]] nlohmann::json to_json(const std::vector<TruncationEnergy>& truncations);
[[nodiscard]] nlohmann::json flags_to_json(const Lagrangian& lagrangian);

/// Sorted keys, two-space indent, trailing newline.
[[nodiscard]] std::string dump(const nlohmann::json& j);

}  // namespace lavlab
