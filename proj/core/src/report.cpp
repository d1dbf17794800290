#include "eppv/report.hpp"

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace eppv {
namespace {

using nlohmann::ordered_json;

ordered_json tally_json(const TestTally& t) {
  return {{"rejections", t.rejections},
          {"valid_replicates", t.valid},
          {"failed_replicates", t.failed},
          {"empirical_rate", t.rate()},
          {"standard_error", t.standard_error()}};
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string column_title(Method m) {
  switch (m) {
    case Method::wald: return "Wald";
    case Method::lr: return "LR";
    case Method::pr: return "PR";
    case Method::eppv: return "Eppv";
    case Method::boot_wald: return "BootWald";
    case Method::fisher: return "Fisher";
  }
  return "?";
}

std::string rate_cell(const TestTally& t) {
  if (t.valid == 0) return "-";
  return fixed(t.rate(), 3) + " (" + fixed(t.standard_error(), 3) + ")";
}

}  // namespace

ordered_json to_json(const TestResult& result) {
  ordered_json j;
  j["method"] = to_string(result.method);
  j["statistic"] = result.statistic;
  j["p_value"] = result.p_value;
  j["side"] = to_string(result.side);
  j["seed"] = result.seed ? ordered_json(*result.seed) : ordered_json(nullptr);
  ordered_json detail = ordered_json::object();
  for (const auto& [key, value] : result.detail) detail[key] = value;
  j["detail"] = detail;
  j["warnings"] = result.warnings;
  return j;
}

ordered_json to_json(const ScenarioConfig& c) {
  std::vector<std::string> tests;
  for (Method m : c.tests) tests.emplace_back(to_string(m));
  ordered_json j{{"n", c.n},
                 {"d", c.d},
                 {"beta0", c.beta0},
                 {"beta1", c.beta1},
                 {"beta2", c.beta2},
                 {"replicates", c.replicates},
                 {"alpha", c.alpha},
                 {"tests", tests},
                 {"eppv_draws", c.eppv.draws},
                 {"eppv_perms", c.eppv.scheme.m},
                 {"eppv_side", to_string(c.eppv.side)},
                 {"pr_perms", c.pr_perms},
                 {"pr_side", to_string(c.pr_side)},
                 {"bootstrap_resamples", c.bootstrap_resamples},
                 {"seed", c.seed}};
  j["bootstrap_replicates"] = c.bootstrap_replicates
                                  ? ordered_json(*c.bootstrap_replicates)
                                  : ordered_json(c.replicates);
  return j;
}

ordered_json to_json(const Table1Config& c) {
  return {{"replicates", c.replicates},
          {"seed", c.seed},
          {"eppv_draws", c.eppv_draws},
          {"eppv_perms", c.eppv_perms},
          {"pr_perms", c.pr_perms},
          {"include_bootstrap", c.include_bootstrap},
          {"bootstrap_replicates", c.bootstrap_replicates},
          {"bootstrap_resamples", c.bootstrap_resamples},
          {"alpha", c.alpha}};
}

ordered_json to_json(const SimulationReport& report, bool include_timing) {
  ordered_json j;
  j["scenario"] = to_json(report.scenario);
  ordered_json tests = ordered_json::object();
  for (const auto& t : report.tallies) tests[std::string(to_string(t.method))] = tally_json(t);
  j["tests"] = tests;
  j["null_fit_failures"] = report.null_fit_failures;
  if (include_timing) j["wall_seconds"] = report.wall_seconds;
  return j;
}

ordered_json to_json(const Table1Report& report, bool include_timing) {
  ordered_json j;
  j["config"] = to_json(report.config);
  ordered_json rows = ordered_json::array();
  for (const auto& cell : report.cells) {
    ordered_json row{{"n", cell.scenario.n},
                     {"beta2", cell.scenario.beta2},
                     {"d", cell.scenario.d},
                     {"kind", cell.scenario.beta2 == 0.0 ? "size" : "power"}};
    ordered_json tests = ordered_json::object();
    for (const auto& t : cell.tallies) tests[std::string(to_string(t.method))] = tally_json(t);
    row["tests"] = tests;
    row["null_fit_failures"] = cell.null_fit_failures;
    row["seed"] = cell.scenario.seed;
    if (include_timing) row["wall_seconds"] = cell.wall_seconds;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

std::string format_text(const TestResult& result) {
  std::ostringstream out;
  auto line = [&](const std::string& key, const std::string& value) {
    out << key << std::string(key.size() < 14 ? 14 - key.size() : 1, ' ') << value << '\n';
  };
  char buf[64];
  line("method", std::string(to_string(result.method)));
  line("side", std::string(to_string(result.side)));
  std::snprintf(buf, sizeof buf, "%.10g", result.statistic);
  line("statistic", buf);
  std::snprintf(buf, sizeof buf, "%.10g", result.p_value);
  line("p_value", buf);
  if (result.seed) line("seed", std::to_string(*result.seed));
  for (const auto& [key, value] : result.detail) {
    std::snprintf(buf, sizeof buf, "%.10g", value);
    line(key, buf);
  }
  for (const auto& w : result.warnings) line("warning", w);
  return out.str();
}

std::string format_text(const SimulationReport& report) {
  std::ostringstream out;
  const auto& s = report.scenario;
  out << "n=" << s.n << "  d=" << s.d << "  beta2=" << s.beta2 << "  replicates=" << s.replicates
      << "  alpha=" << s.alpha << "  seed=" << s.seed << '\n';
  out << pad("test", 10) << pad("rate", 10) << pad("se", 10) << pad("reject", 9)
      << pad("valid", 9) << pad("failed", 9) << '\n';
  for (const auto& t : report.tallies) {
    out << pad(column_title(t.method), 10) << pad(fixed(t.rate(), 4), 10)
        << pad(fixed(t.standard_error(), 4), 10) << pad(std::to_string(t.rejections), 9)
        << pad(std::to_string(t.valid), 9) << pad(std::to_string(t.failed), 9) << '\n';
  }
  out << "null fit failures: " << report.null_fit_failures << '\n';
  return out.str();
}

std::string format_text(const Table1Report& report) {
  std::vector<Method> columns = {Method::wald, Method::lr, Method::pr, Method::eppv};
  if (report.config.include_bootstrap) columns.push_back(Method::boot_wald);
  constexpr std::size_t kWidth = 16;

  std::ostringstream out;
  out << "Empirical rejection rates (standard errors), alpha=" << report.config.alpha
      << ", replicates=" << report.config.replicates << ", seed=" << report.config.seed << '\n';
  out << std::string(20, ' ');
  for (Method m : columns) out << pad(column_title(m), kWidth);
  out << '\n';

  std::size_t last_n = 0;
  double last_beta = -1.0;
  for (const auto& cell : report.cells) {
    const auto& s = cell.scenario;
    if (s.n != last_n) {
      out << "n=" << s.n << '\n';
      last_n = s.n;
      last_beta = -1.0;
    }
    std::string label;
    if (s.beta2 != last_beta) {
      label = (s.beta2 == 0.0 ? "beta=0 " : "beta=" + fixed(s.beta2, 0) + " ");
      last_beta = s.beta2;
    }
    label += "d=" + std::to_string(s.d);
    out << "  " << label << std::string(label.size() < 18 ? 18 - label.size() : 1, ' ');
    for (Method m : columns) {
      std::string cell_text = "-";
      for (const auto& t : cell.tallies) {
        if (t.method == m) cell_text = rate_cell(t);
      }
      out << pad(cell_text, kWidth);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace eppv
