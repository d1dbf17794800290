#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "eppv/simulation.hpp"
#include "eppv/test_result.hpp"

namespace eppv {

nlohmann::ordered_json to_json(const TestResult& result);
nlohmann::ordered_json to_json(const ScenarioConfig& config);
nlohmann::ordered_json to_json(const Table1Config& config);

/// Wall-clock time is omitted unless `include_timing` so that reports from
/// identical seeds are byte-identical.
nlohmann::ordered_json to_json(const SimulationReport& report, bool include_timing = false);
nlohmann::ordered_json to_json(const Table1Report& report, bool include_timing = false);

/// Aligned plain-text renderings.
std::string format_text(const TestResult& result);
std::string format_text(const SimulationReport& report);
/// Rows (n, beta, d) by columns (tests).
std::string format_text(const Table1Report& report);

}  // namespace eppv
