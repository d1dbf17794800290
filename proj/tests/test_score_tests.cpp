#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "eppv/errors.hpp"
#include "eppv/logistic.hpp"
#include "eppv/random.hpp"
#include "eppv/score_tests.hpp"
#include "eppv/simulation.hpp"
#include "test_support.hpp"

namespace eppv {
namespace {

Dataset simulated_null(std::size_t n, int d, std::uint64_t seed) {
  Rng rng(seed);
  const Covariates cov = generate_covariates(n, d, rng);
  Dataset data;
  data.y = generate_response(cov.z1, cov.z2, 0.0, 1.0, 0.0, rng);
  data.null_design.resize(static_cast<Eigen::Index>(n), 2);
  data.null_design.col(0).setOnes();
  data.null_design.col(1) = cov.z1;
  data.tested = cov.z2;
  return data;
}

TEST(ScoreStatistic, InterceptOnlyArithmetic) {
  const Eigen::VectorXd y{{1, 1, 0, 0}};
  const LogisticFit fit = fit_logistic(y, Eigen::MatrixXd::Ones(4, 1));
  EXPECT_DOUBLE_EQ(score_statistic(fit, Eigen::VectorXd{{1, 2, 3, 4}}, y), -2.0);
}

TEST(ScoreStatistic, ConstantCovariateGivesZero) {
  const Eigen::VectorXd y{{1, 0, 0, 1, 1}};
  const LogisticFit fit = fit_logistic(y, Eigen::MatrixXd::Ones(5, 1));
  // Zero up to the rounding left in sum(y - pi_hat).
  EXPECT_NEAR(score_statistic(fit, Eigen::VectorXd::Constant(5, 3.0), y), 0.0, 1e-14);
}

TEST(ScoreStatistic, MatchesFiniteDifferenceOfFullLikelihood) {
  std::mt19937_64 gen(21);
  const double h = 1e-5;
  for (int rep = 0; rep < 100; ++rep) {
    const Dataset data = testing::random_dataset(gen, 20, 2);
    const LogisticFit fit = fit_logistic(data.y, data.null_design);
    const Eigen::MatrixXd design = full_design(data);
    Eigen::VectorXd plus(3), minus(3);
    plus << fit.beta, h;
    minus << fit.beta, -h;
    const double fd = (log_likelihood(plus, data.y, design) - log_likelihood(minus, data.y, design)) /
                      (2.0 * h);
    EXPECT_NEAR(score_statistic(fit, data.tested, data.y), fd, 1e-4);
  }
}

TEST(ScoreStatistic, EqualsCenteredIndicatorMinusFittedPart) {
  std::mt19937_64 gen(22);
  for (int rep = 0; rep < 100; ++rep) {
    const Dataset data = testing::random_dataset(gen, 25, 3);
    const LogisticFit fit = fit_logistic(data.y, data.null_design);
    const Eigen::VectorXd zc = center(data.tested);
    EXPECT_NEAR(score_statistic(fit, data.tested, data.y),
                centered_indicator_statistic(data.tested, data.y) - zc.dot(fit.pi_hat), 1e-10);
  }
}

TEST(ScoreStatistic, DimensionMismatchThrows) {
  const Eigen::VectorXd y{{1, 0, 1}};
  const LogisticFit fit = fit_logistic(y, Eigen::MatrixXd::Ones(3, 1));
  EXPECT_THROW(score_statistic(fit, Eigen::VectorXd::Zero(4), y), DimensionError);
}

TEST(CenteredIndicator, Arithmetic) {
  EXPECT_DOUBLE_EQ(centered_indicator_statistic(Eigen::VectorXd{{1, 2, 3, 4}},
                                                Eigen::VectorXd{{1, 1, 0, 0}}),
                   -2.0);
}

TEST(CenteredIndicator, ConstantIndicatorGivesZero) {
  const Eigen::VectorXd z{{0.5, 2.0, 3.0, 4.0}};
  EXPECT_EQ(centered_indicator_statistic(z, Eigen::VectorXd::Zero(4)), 0.0);
  EXPECT_NEAR(centered_indicator_statistic(z, Eigen::VectorXd::Ones(4)), 0.0, 1e-14);
}

TEST(CenteredIndicator, ShiftInvariant) {
  std::mt19937_64 gen(23);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.5);
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::VectorXd z(12), b(12);
    for (Eigen::Index i = 0; i < 12; ++i) {
      z[i] = normal(gen);
      b[i] = coin(gen) ? 1.0 : 0.0;
    }
    const double base = centered_indicator_statistic(z, b);
    for (double c : {-5.0, 3.2, 17.0}) {
      const Eigen::VectorXd shifted = z.array() + c;
      EXPECT_NEAR(centered_indicator_statistic(shifted, b), base, 1e-12);
    }
  }
}

TEST(ChiSquare1, KnownQuantiles) {
  EXPECT_NEAR(chi_square1_upper(3.841458820694124), 0.05, 1e-12);
  EXPECT_NEAR(chi_square1_upper(6.634896601021214), 0.01, 1e-12);
  EXPECT_EQ(chi_square1_upper(0.0), 1.0);
  // P(Z^2 > 1) = 2 (1 - Phi(1)).
  EXPECT_NEAR(chi_square1_upper(1.0), 0.31731050786291415, 1e-14);
}

TEST(WaldTest, OrthogonalCovariateGivesZero) {
  // Intercept-only null with y balanced inside each level of a symmetric z.
  Dataset data;
  data.y = Eigen::VectorXd{{1, 0, 1, 0, 1, 0}};
  data.null_design = Eigen::MatrixXd::Ones(6, 1);
  data.tested = Eigen::VectorXd{{-1, -1, 0, 0, 1, 1}};
  const TestResult result = wald_test(data);
  EXPECT_NEAR(result.statistic, 0.0, 1e-20);
  EXPECT_NEAR(result.p_value, 1.0, 1e-10);
}

TEST(WaldTest, SeparatedDatasetThrows) {
  Dataset data;
  data.y = Eigen::VectorXd{{1, 0, 1, 0, 0}};
  data.null_design = Eigen::MatrixXd::Ones(5, 1);
  data.tested = Eigen::VectorXd{{0.2, -1.1, 0.9, -0.4, -0.8}};
  EXPECT_THROW(wald_test(data), SeparationError);
}

TEST(WaldAndLr, AffineInvariance) {
  std::mt19937_64 gen(24);
  for (int rep = 0; rep < 50; ++rep) {
    const Dataset data = testing::random_dataset(gen, 30, 2);
    Dataset moved = data;
    moved.tested = -2.5 * data.tested.array() + 7.0;
    EXPECT_NEAR(wald_test(moved).p_value, wald_test(data).p_value, 1e-6);
    EXPECT_NEAR(lr_test(moved).p_value, lr_test(data).p_value, 1e-6);
  }
}

TEST(LrTest, ConstantCovariateGivesZero) {
  std::mt19937_64 gen(25);
  Dataset data = testing::random_dataset(gen, 15, 2);
  data.tested = Eigen::VectorXd::Constant(15, 4.0);
  const TestResult result = lr_test(data);
  EXPECT_EQ(result.statistic, 0.0);
  EXPECT_EQ(result.p_value, 1.0);
}

TEST(LrTest, MatchesRecomputedLogLikelihoods) {
  std::mt19937_64 gen(26);
  for (int rep = 0; rep < 50; ++rep) {
    const Dataset data = testing::random_dataset(gen, 30, 2);
    const TestResult result = lr_test(data);
    const LogisticFit null_fit = fit_logistic(data.y, data.null_design);
    const LogisticFit full_fit = fit_logistic(data.y, full_design(data));
    const double l0 = log_likelihood(null_fit.beta, data.y, data.null_design);
    const double l1 = log_likelihood(full_fit.beta, data.y, full_design(data));
    EXPECT_NEAR(result.statistic, std::max(0.0, 2.0 * (l1 - l0)), 1e-8);
    EXPECT_NEAR(result.p_value, chi_square1_upper(result.statistic), 1e-15);
  }
}

TEST(LrTest, SeparatedFullModelUsesSupremum) {
  Dataset data;
  data.y = Eigen::VectorXd{{1, 0, 1, 0, 0, 1}};
  data.null_design = Eigen::MatrixXd::Ones(6, 1);
  data.tested = Eigen::VectorXd{{2, -1, 3, -2, -3, 1}};
  const TestResult result = lr_test(data);
  // Full model reaches likelihood 1, so the statistic is -2 L_null.
  EXPECT_NEAR(result.statistic, -2.0 * 6.0 * std::log(0.5), 1e-6);
  EXPECT_FALSE(result.warnings.empty());
  EXPECT_EQ(result.detail.at("full_separated"), 1.0);
}

TEST(LrTest, NullPValuesAreApproximatelyUniform) {
  std::vector<double> pvalues;
  for (std::uint64_t r = 0; r < 400; ++r) {
    const Dataset data = simulated_null(100, 0, derive_seed(27, {r}));
    try {
      pvalues.push_back(lr_test(data).p_value);
    } catch (const FitError&) {
    }
  }
  ASSERT_GE(pvalues.size(), 200u);
  std::sort(pvalues.begin(), pvalues.end());
  const double n = static_cast<double>(pvalues.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < pvalues.size(); ++i) {
    ks = std::max({ks, (i + 1) / n - pvalues[i], pvalues[i] - i / n});
  }
  // Asymptotic Kolmogorov critical value at level 0.01.
  EXPECT_LT(ks, 1.628 / std::sqrt(n));
}

TEST(BootstrapWald, ZeroResamplesIsAnError) {
  std::mt19937_64 gen(28);
  const Dataset data = testing::random_dataset(gen, 20, 2);
  EXPECT_THROW(bootstrap_wald_test(data, {0, 1, 1}), ConfigError);
}

TEST(BootstrapWald, ConstantCovariateIsUnstable) {
  std::mt19937_64 gen(29);
  Dataset data = testing::random_dataset(gen, 20, 2);
  data.tested = Eigen::VectorXd::Constant(20, 1.5);
  EXPECT_THROW(bootstrap_wald_test(data, {99, 1, 1}), BootstrapUnstable);
}

TEST(BootstrapWald, DeterministicAcrossThreads) {
  std::mt19937_64 gen(30);
  const Dataset data = testing::random_dataset(gen, 40, 2);
  const TestResult one = bootstrap_wald_test(data, {199, 77, 1});
  const TestResult four = bootstrap_wald_test(data, {199, 77, 4});
  EXPECT_EQ(one.p_value, four.p_value);
  EXPECT_EQ(one.detail, four.detail);
  EXPECT_GE(one.p_value, 1.0 / 200.0);
  EXPECT_LE(one.p_value, 1.0);
  EXPECT_EQ(one.detail.at("resamples"), 199.0);
}

}  // namespace
}  // namespace eppv
