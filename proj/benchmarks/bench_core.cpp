#include <benchmark/benchmark.h>

#include "eppv/eppv.hpp"
#include "eppv/fisher.hpp"
#include "eppv/logistic.hpp"
#include "eppv/permutation.hpp"
#include "eppv/random.hpp"
#include "eppv/simulation.hpp"

namespace {

eppv::Dataset simulated(std::size_t n, std::uint64_t seed) {
  eppv::Rng rng(seed);
  const eppv::Covariates cov = eppv::generate_covariates(n, 0, rng);
  eppv::Dataset data;
  data.y = eppv::generate_response(cov.z1, cov.z2, 0.0, 1.0, 0.0, rng);
  data.null_design.resize(static_cast<Eigen::Index>(n), 2);
  data.null_design.col(0).setOnes();
  data.null_design.col(1) = cov.z1;
  data.tested = cov.z2;
  return data;
}

void BM_FitLogistic(benchmark::State& state) {
  const auto data = simulated(static_cast<std::size_t>(state.range(0)), 1);
  const Eigen::MatrixXd design = eppv::full_design(data);
  for (auto _ : state) benchmark::DoNotOptimize(eppv::fit_logistic(data.y, design));
}
BENCHMARK(BM_FitLogistic)->Arg(15)->Arg(30)->Arg(200);

void BM_PrTest(benchmark::State& state) {
  const auto data = simulated(30, 2);
  const auto scheme = eppv::PermScheme::monte_carlo(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eppv::pr_test(data, scheme, eppv::Side::two_sided));
  }
}
BENCHMARK(BM_PrTest)->Arg(199)->Arg(999);

void BM_EppvTest(benchmark::State& state) {
  const auto data = simulated(30, 4);
  eppv::EppvConfig config;
  config.draws = static_cast<std::size_t>(state.range(0));
  config.scheme = eppv::PermScheme::monte_carlo(199, 0);
  for (auto _ : state) benchmark::DoNotOptimize(eppv::eppv_test(data, config));
}
BENCHMARK(BM_EppvTest)->Arg(50)->Arg(200);

void BM_EppvExhaustive(benchmark::State& state) {
  const auto data = simulated(static_cast<std::size_t>(state.range(0)), 5);
  eppv::EppvConfig config;
  config.draws = 10;
  config.scheme = eppv::PermScheme::exhaustive();
  for (auto _ : state) benchmark::DoNotOptimize(eppv::eppv_test(data, config));
}
BENCHMARK(BM_EppvExhaustive)->Arg(6)->Arg(8);

void BM_FisherExact(benchmark::State& state) {
  const auto k = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eppv::fisher_exact(k, k / 2, k / 3, k, eppv::Side::two_sided));
  }
}
BENCHMARK(BM_FisherExact)->Arg(10)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
