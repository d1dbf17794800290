#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "eppv/dataset_csv.hpp"
#include "eppv/eppv.hpp"
#include "eppv/errors.hpp"
#include "eppv/fisher.hpp"
#include "eppv/report.hpp"
#include "eppv/score_tests.hpp"
#include "eppv/simulation.hpp"

namespace eppv::cli {
namespace {

using nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 20240601;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = item.find_last_not_of(" \t");
    items.push_back(item.substr(first, last - first + 1));
  }
  return items;
}

struct TestOptions {
  std::string data;
  std::string response;
  std::string null_columns;
  std::string test_column;
  std::string method = "eppv";
  std::string side = "two_sided";
  std::size_t draws = 200;
  std::size_t perms = 999;
  bool exhaustive = false;
  std::size_t resamples = 499;
  std::uint64_t seed = kDefaultSeed;
  std::string minimax;
  std::size_t grid = 21;
  bool no_intercept = false;
  double alpha = 0.05;
  std::string format = "json";
  unsigned threads = 0;
};

struct SimulateOptions {
  std::size_t n = 30;
  int d = 0;
  double beta0 = 0.0;
  double beta1 = 1.0;
  double beta2 = 0.0;
  std::size_t replicates = 2000;
  std::string tests = "wald,lr,pr,eppv";
  double alpha = 0.05;
  std::uint64_t seed = kDefaultSeed;
  std::size_t draws = 50;
  std::size_t perms = 199;
  std::size_t pr_perms = 999;
  std::size_t resamples = 499;
  std::optional<std::size_t> boot_replicates;
  std::string side = "two_sided";
  std::string format = "json";
  bool timing = false;
  unsigned threads = 0;
};

struct Table1Options {
  Table1Config config;
  std::string format = "text";
  bool timing = false;
};

ordered_json test_config_json(const TestOptions& o, const ColumnSpec& spec) {
  ordered_json j;
  j["data"] = o.data;
  j["response"] = spec.response;
  j["null"] = spec.null_columns;
  j["test"] = spec.test_column;
  j["intercept"] = spec.add_intercept;
  j["method"] = o.method;
  j["side"] = o.side;
  j["draws"] = o.draws;
  j["perms"] = o.exhaustive ? ordered_json("exhaustive") : ordered_json(o.perms);
  j["resamples"] = o.resamples;
  j["seed"] = o.seed;
  j["alpha"] = o.alpha;
  if (!o.minimax.empty()) {
    j["minimax"] = o.minimax;
    j["grid"] = o.grid;
  }
  return j;
}

std::pair<double, double> parse_interval(const std::string& text) {
  const auto parts = split_list(text);
  if (parts.size() != 2) throw ConfigError("--minimax expects A,B");
  try {
    return {std::stod(parts[0]), std::stod(parts[1])};
  } catch (const std::exception&) {
    throw ConfigError("--minimax expects two numbers, got '" + text + "'");
  }
}

TestResult run_fisher(const Dataset& data, Side side) {
  const auto& design = data.null_design;
  const bool intercept_only =
      design.cols() == 0 || (design.cols() == 1 && (design.col(0).array() == 1.0).all());
  if (!intercept_only) {
    throw ConfigError("fisher cannot adjust for covariates; pass no --null columns");
  }
  std::uint64_t a = 0, b = 0, c = 0, d = 0;
  for (Eigen::Index i = 0; i < data.y.size(); ++i) {
    const double z = data.tested[i];
    if (z != 0.0 && z != 1.0) {
      throw DataError("fisher needs a 0/1 test column; row " + std::to_string(i + 1) + " has " +
                          std::to_string(z),
                      static_cast<std::size_t>(i) + 1);
    }
    const bool yi = data.y[i] == 1.0;
    const bool zi = z == 1.0;
    if (yi && zi) ++a;
    else if (yi) ++b;
    else if (zi) ++c;
    else ++d;
  }
  return fisher_exact(a, b, c, d, side);
}

int cmd_test(const TestOptions& o, std::ostream& out, std::ostream& err) {
  ColumnSpec spec;
  spec.response = o.response;
  spec.null_columns = split_list(o.null_columns);
  spec.test_column = o.test_column;
  spec.add_intercept = !o.no_intercept;

  const Method method = parse_method(o.method);
  const Side side = parse_side(o.side);
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw ConfigError("--alpha must lie in (0, 1)");
  const Dataset data = parse_dataset_csv(o.data, spec);
  validate(data);

  const PermScheme scheme =
      o.exhaustive ? PermScheme::exhaustive() : PermScheme::monte_carlo(o.perms, o.seed);

  TestResult result;
  std::optional<double> mc_se;
  std::optional<std::size_t> n_draws;
  std::optional<std::size_t> n_perms;
  switch (method) {
    case Method::wald: result = wald_test(data); break;
    case Method::lr: result = lr_test(data); break;
    case Method::fisher: result = run_fisher(data, side); break;
    case Method::boot_wald: {
      BootstrapOptions bo;
      bo.resamples = o.resamples;
      bo.seed = o.seed;
      bo.threads = o.threads;
      result = bootstrap_wald_test(data, bo);
      break;
    }
    case Method::pr:
      result = pr_test(data, scheme, side);
      n_perms = static_cast<std::size_t>(result.detail.at("n_perms"));
      break;
    case Method::eppv: {
      EppvConfig config;
      config.draws = o.draws;
      config.scheme = scheme;
      config.side = side;
      config.seed = o.seed;
      config.threads = o.threads;
      if (o.minimax.empty()) {
        EppvOutcome outcome = eppv_test(data, config);
        result = std::move(outcome.test);
        mc_se = outcome.detail.mc_se;
      } else {
        const auto [a, b] = parse_interval(o.minimax);
        result = minimax_eppv(data, a, b, o.grid, config).test;
      }
      n_draws = o.draws;
      n_perms = scheme.count(static_cast<std::size_t>(data.y.size()));
      break;
    }
  }
  if ((method == Method::wald || method == Method::lr || method == Method::boot_wald) &&
      side != Side::two_sided) {
    result.warnings.emplace_back("--side ignored: " + std::string(to_string(method)) +
                                 " is a two-sided chi-square test");
  }

  const bool reject = result.p_value <= o.alpha;
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';

  if (o.format == "json") {
    ordered_json j;
    j["method"] = to_string(result.method);
    j["statistic"] = result.statistic;
    j["p_value"] = result.p_value;
    j["side"] = to_string(result.side);
    j["seed"] = result.seed ? ordered_json(*result.seed) : ordered_json(nullptr);
    j["n_draws"] = n_draws ? ordered_json(*n_draws) : ordered_json(nullptr);
    j["n_perms"] = n_perms ? ordered_json(*n_perms) : ordered_json(nullptr);
    if (mc_se) j["mc_se"] = *mc_se;
    j["reject"] = reject;
    j["warnings"] = result.warnings;
    j["detail"] = to_json(result)["detail"];
    j["config"] = test_config_json(o, spec);
    out << j.dump(2) << '\n';
  } else {
    out << format_text(result);
    out << "reject        " << (reject ? "yes" : "no") << " (alpha " << o.alpha << ")\n";
    out << "config        " << test_config_json(o, spec).dump() << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  ScenarioConfig config;
  config.n = o.n;
  config.d = o.d;
  config.beta0 = o.beta0;
  config.beta1 = o.beta1;
  config.beta2 = o.beta2;
  config.replicates = o.replicates;
  config.alpha = o.alpha;
  config.tests.clear();
  for (const auto& name : split_list(o.tests)) config.tests.push_back(parse_method(name));
  config.eppv.draws = o.draws;
  config.eppv.scheme = PermScheme::monte_carlo(o.perms, 0);
  config.eppv.side = parse_side(o.side);
  config.pr_side = config.eppv.side;
  config.pr_perms = o.pr_perms;
  config.bootstrap_resamples = o.resamples;
  config.bootstrap_replicates = o.boot_replicates;
  config.seed = o.seed;
  config.threads = o.threads;

  const SimulationReport report = run_scenario(config);
  err << "simulate: " << report.wall_seconds << " s\n";
  if (o.format == "json") {
    out << to_json(report, o.timing).dump(2) << '\n';
  } else {
    out << format_text(report);
  }
  return kExitOk;
}

int cmd_table1(const Table1Options& o, std::ostream& out, std::ostream& err) {
  const Table1Report report = table1_harness(o.config);
  double total = 0.0;
  for (const auto& cell : report.cells) total += cell.wall_seconds;
  err << "table1: " << total << " s\n";
  if (o.format == "json") {
    out << to_json(report, o.timing).dump(2) << '\n';
  } else {
    out << format_text(report);
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Expected permutation p-values and comparator tests for logistic regression"};
  app.require_subcommand(1);
  const std::vector<std::string> formats = {"json", "text"};

  TestOptions test;
  auto* test_cmd = app.add_subcommand("test", "Test one covariate on a CSV dataset");
  test_cmd->add_option("--data", test.data, "CSV file with a header row")->required();
  test_cmd->add_option("--response", test.response, "0/1 response column")->required();
  test_cmd->add_option("--null", test.null_columns,
                       "Comma-separated covariates of the null model (may be empty)");
  test_cmd->add_option("--test", test.test_column, "Covariate under test")->required();
  test_cmd->add_option("--method", test.method, "wald, lr, fisher, boot_wald, pr or eppv")
      ->capture_default_str();
  test_cmd->add_option("--side", test.side, "two_sided, greater or less")->capture_default_str();
  test_cmd->add_option("--draws", test.draws, "Eppv latent draws")->capture_default_str();
  test_cmd->add_option("--perms", test.perms, "Monte Carlo permutations")->capture_default_str();
  test_cmd->add_flag("--exhaustive", test.exhaustive, "Enumerate all n! permutations (n <= 9)");
  test_cmd->add_option("--resamples", test.resamples, "Bootstrap resamples")
      ->capture_default_str();
  test_cmd->add_option("--seed", test.seed, "Random seed")->capture_default_str();
  test_cmd->add_option("--minimax", test.minimax, "Maximize Eppv over beta1 in A,B");
  test_cmd->add_option("--grid", test.grid, "Grid points for --minimax")->capture_default_str();
  test_cmd->add_flag("--no-intercept", test.no_intercept, "Do not prepend an intercept column");
  test_cmd->add_option("--alpha", test.alpha, "Level used for the reject flag")
      ->capture_default_str();
  test_cmd->add_option("--format", test.format)->check(CLI::IsMember(formats))
      ->capture_default_str();
  test_cmd->add_option("--threads", test.threads, "Worker threads (0 = all cores)");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Empirical size/power for one scenario");
  sim_cmd->add_option("--n", sim.n, "Sample size")->capture_default_str();
  sim_cmd->add_option("--d", sim.d, "Dependence exponent (-1, 0 or 1)")->capture_default_str();
  sim_cmd->add_option("--beta0", sim.beta0)->capture_default_str();
  sim_cmd->add_option("--beta1", sim.beta1)->capture_default_str();
  sim_cmd->add_option("--beta2", sim.beta2, "Coefficient of the tested covariate")
      ->capture_default_str();
  sim_cmd->add_option("--replicates", sim.replicates)->capture_default_str();
  sim_cmd->add_option("--tests", sim.tests, "Comma-separated subset of wald,lr,pr,eppv,boot_wald")
      ->capture_default_str();
  sim_cmd->add_option("--alpha", sim.alpha)->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
  sim_cmd->add_option("--draws", sim.draws, "Eppv latent draws")->capture_default_str();
  sim_cmd->add_option("--perms", sim.perms, "Eppv permutations per draw")->capture_default_str();
  sim_cmd->add_option("--pr-perms", sim.pr_perms)->capture_default_str();
  sim_cmd->add_option("--resamples", sim.resamples, "Bootstrap resamples")->capture_default_str();
  sim_cmd->add_option("--boot-replicates", sim.boot_replicates,
                      "Run bootstrap-Wald on the first R replicates only");
  sim_cmd->add_option("--side", sim.side, "Side of the PR and Eppv tests")->capture_default_str();
  sim_cmd->add_option("--format", sim.format)->check(CLI::IsMember(formats))
      ->capture_default_str();
  sim_cmd->add_flag("--timing", sim.timing, "Include wall-clock time in JSON output");
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");

  Table1Options table;
  auto* table_cmd = app.add_subcommand("table1", "All twelve size/power cells");
  table_cmd->add_option("--replicates", table.config.replicates)->capture_default_str();
  table_cmd->add_option("--seed", table.config.seed)->capture_default_str();
  table_cmd->add_option("--draws", table.config.eppv_draws)->capture_default_str();
  table_cmd->add_option("--perms", table.config.eppv_perms)->capture_default_str();
  table_cmd->add_option("--pr-perms", table.config.pr_perms)->capture_default_str();
  table_cmd->add_flag("--bootstrap", table.config.include_bootstrap,
                      "Add bootstrap-Wald for n = 30");
  table_cmd->add_option("--boot-replicates", table.config.bootstrap_replicates)
      ->capture_default_str();
  table_cmd->add_option("--resamples", table.config.bootstrap_resamples)->capture_default_str();
  table_cmd->add_option("--format", table.format)->check(CLI::IsMember(formats))
      ->capture_default_str();
  table_cmd->add_flag("--timing", table.timing, "Include wall-clock time in JSON output");
  table_cmd->add_option("--threads", table.config.threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*test_cmd) return cmd_test(test, out, err);
    if (*sim_cmd) return cmd_simulate(sim, out, err);
    if (*table_cmd) return cmd_table1(table, out, err);
  } catch (const FitError& e) {
    err << "fit failure: " << e.what() << '\n';
    return kExitFitFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace eppv::cli
